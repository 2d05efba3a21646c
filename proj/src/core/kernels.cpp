#include "kgfactor/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kgfactor::kernels {
namespace {

inline std::ptrdiff_t len(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const auto n = len(y.size());
#pragma omp parallel for schedule(static) if (y.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) y[j] += a * x[j];
}

void combine(std::span<cplx> out, std::span<const cplx> x, cplx a, std::span<const cplx> y) {
  const auto n = len(out.size());
#pragma omp parallel for schedule(static) if (out.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) out[j] = x[j] + a * y[j];
}

void scale(std::span<cplx> f, cplx a) {
  const auto n = len(f.size());
#pragma omp parallel for schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) f[j] *= a;
}

void multiply(std::span<cplx> f, std::span<const double> r) {
  const auto n = len(f.size());
#pragma omp parallel for schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) f[j] *= r[j];
}

void multiply(std::span<cplx> f, std::span<const cplx> g) {
  const auto n = len(f.size());
#pragma omp parallel for schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) f[j] *= g[j];
}

void multiply_rows(std::span<cplx> f, std::span<const cplx> g) {
  const auto row = len(g.size());
  const auto rows = len(f.size() / g.size());
#pragma omp parallel for collapse(2) schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r)
    for (std::ptrdiff_t j = 0; j < row; ++j) f[r * row + j] *= g[j];
}

void multiply_columns(std::span<cplx> f, std::span<const cplx> g) {
  const auto rows = len(g.size());
  const auto row = len(f.size() / g.size());
#pragma omp parallel for collapse(2) schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t r = 0; r < rows; ++r)
    for (std::ptrdiff_t j = 0; j < row; ++j) f[r * row + j] *= g[r];
}

void apply_phase(std::span<cplx> f, std::span<const double> angle, double scale) {
  const auto n = len(f.size());
#pragma omp parallel for schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) f[j] *= std::polar(1.0, scale * angle[j]);
}

double sum_abs2(std::span<const cplx> f) {
  const std::size_t chunks = (f.size() + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(chunks, 0.0);
  const auto nchunks = len(chunks);
#pragma omp parallel for schedule(static) if (f.size() >= kParallelThreshold)
  for (std::ptrdiff_t c = 0; c < nchunks; ++c) {
    const std::size_t begin = static_cast<std::size_t>(c) * kReductionChunk;
    const std::size_t end = std::min(f.size(), begin + kReductionChunk);
    double s = 0.0;
    for (std::size_t j = begin; j < end; ++j) s += std::norm(f[j]);
    partial[static_cast<std::size_t>(c)] = s;
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

namespace serial {

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t j = 0; j < y.size(); ++j) y[j] += a * x[j];
}

void combine(std::span<cplx> out, std::span<const cplx> x, cplx a, std::span<const cplx> y) {
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = x[j] + a * y[j];
}

void scale(std::span<cplx> f, cplx a) {
  for (auto& v : f) v *= a;
}

void multiply(std::span<cplx> f, std::span<const double> r) {
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= r[j];
}

void multiply(std::span<cplx> f, std::span<const cplx> g) {
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= g[j];
}

void multiply_rows(std::span<cplx> f, std::span<const cplx> g) {
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= g[j % g.size()];
}

void multiply_columns(std::span<cplx> f, std::span<const cplx> g) {
  const std::size_t row = f.size() / g.size();
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= g[j / row];
}

void apply_phase(std::span<cplx> f, std::span<const double> angle, double scale) {
  for (std::size_t j = 0; j < f.size(); ++j) f[j] *= std::polar(1.0, scale * angle[j]);
}

double sum_abs2(std::span<const cplx> f) {
  double s = 0.0;
  for (const auto& v : f) s += std::norm(v);
  return s;
}

}  // namespace serial
}  // namespace kgfactor::kernels
