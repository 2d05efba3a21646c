// Serial reference loops against the OpenMP kernels, plus whole solver steps.
// Run with OMP_NUM_THREADS set to compare thread counts.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "kgfactor/factor_m.hpp"
#include "kgfactor/kernels.hpp"
#include "kgfactor/kg_exact.hpp"
#include "kgfactor/wavepacket.hpp"

using namespace kgfactor;

namespace {

std::vector<cplx> random_vec(std::size_t n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {u(rng), u(rng)};
  return v;
}

std::vector<double> random_real(std::size_t n) {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

template <bool Parallel>
void BM_axpy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_vec(n);
  auto y = random_vec(n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::axpy({1e-9, 0.0}, x, y);
    else kernels::serial::axpy({1e-9, 0.0}, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_apply_phase(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto f = random_vec(n);
  const auto angle = random_real(n);
  for (auto _ : state) {
    if constexpr (Parallel) kernels::apply_phase(f, angle, 1e-3);
    else kernels::serial::apply_phase(f, angle, 1e-3);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_sum_abs2(benchmark::State& state) {
  const auto f = random_vec(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    double s = Parallel ? kernels::sum_abs2(f) : kernels::serial::sum_abs2(f);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_kg_step(benchmark::State& state) {
  const Grid g(static_cast<std::size_t>(state.range(0)), 200.0);
  const Constants u;
  KGState s = kg_init_forward(make_gaussian_packet({0.0, 5.0, 0.5}, g), u);
  KgStepper stepper(KgOperator(g, static_potential::GaussianWell{-0.05, 0.0, 10.0},
                               dynamic_potential::StandingWave{0.01, 0.1, 0.5}, u));
  const double dt = 0.5 * stepper.op().stable_dt();
  for (auto _ : state) stepper.step(s, dt);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_split_step(benchmark::State& state) {
  const Grid g(static_cast<std::size_t>(state.range(0)), 200.0);
  const Constants u;
  auto f = make_gaussian_packet({0.0, 5.0, 0.5}, g);
  SplitStepPropagator prop(g, static_potential::GaussianWell{-0.05, 0.0, 10.0},
                           dynamic_potential::StandingWave{0.01, 0.1, 0.5}, u);
  double t = 0.0;
  for (auto _ : state) {
    prop.step(f, t, 0.01);
    t += 0.01;
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

#define KERNEL_RANGE RangeMultiplier(8)->Range(1 << 10, 1 << 22)

BENCHMARK(BM_axpy<false>)->Name("axpy/serial")->KERNEL_RANGE;
BENCHMARK(BM_axpy<true>)->Name("axpy/omp")->KERNEL_RANGE->UseRealTime();
BENCHMARK(BM_apply_phase<false>)->Name("apply_phase/serial")->KERNEL_RANGE;
BENCHMARK(BM_apply_phase<true>)->Name("apply_phase/omp")->KERNEL_RANGE->UseRealTime();
BENCHMARK(BM_sum_abs2<false>)->Name("sum_abs2/serial")->KERNEL_RANGE;
BENCHMARK(BM_sum_abs2<true>)->Name("sum_abs2/omp")->KERNEL_RANGE->UseRealTime();
BENCHMARK(BM_kg_step)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->UseRealTime();
BENCHMARK(BM_split_step)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->UseRealTime();

BENCHMARK_MAIN();
