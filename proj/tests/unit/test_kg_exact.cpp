#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kgfactor/dispersion.hpp"
#include "kgfactor/errors.hpp"
#include "kgfactor/factor_m.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kg_exact.hpp"
#include "kgfactor/wavepacket.hpp"

using namespace kgfactor;
using std::numbers::pi;

namespace {

const StaticPotential kNoV = static_potential::Zero{};
const DynamicPotential kNoXi = dynamic_potential::Zero{};

KGState plane_wave(const Grid& g, long index, const Constants& u) {
  const auto phi = make_mode_superposition(g, {{index, {1.0, 0.0}}});
  return kg_init_forward(phi, u);
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Evolve a forward plane wave over one period with n steps; error against the start.
double period_error(const Grid& g, long index, const Constants& u, int n) {
  KGState s = plane_wave(g, index, u);
  const KGState s0 = s;
  const double period = 2.0 * pi / kg_dispersion_omega(g.frequency(g.bin_of(index)), u);
  KgStepper stepper(KgOperator(g, kNoV, kNoXi, u));
  for (int i = 0; i < n; ++i) stepper.step(s, period / n);
  return max_abs_diff(s.phi, s0.phi);
}

}  // namespace

TEST_CASE("plane-wave eigenmode closure") {
  Constants u;
  Grid g(64, 20.0);
  const long idx = 3;
  const double w = kg_dispersion_omega(g.frequency(g.bin_of(idx)), u);
  const KGState s = plane_wave(g, idx, u);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(s.chi[j] - w * s.phi[j]) < 1e-12);
  const KGState ds = kg_rhs(s, kNoV, kNoXi, u);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(ds.phi[j] - cplx(0.0, -w) * s.phi[j]) < 1e-12);
    CHECK(std::abs(ds.chi[j] - cplx(0.0, -w) * s.chi[j]) < 1e-12);
  }
}

TEST_CASE("zero state has zero derivative") {
  Grid g(32, 5.0);
  const KGState s{ComplexField(g), ComplexField(g), 0.0};
  const KGState ds = kg_rhs(s, static_potential::Constant{0.3}, dynamic_potential::Constant{0.1}, Constants{});
  CHECK(l2_norm(ds.phi) == 0.0);
  CHECK(l2_norm(ds.chi) == 0.0);
}

TEST_CASE("constant V, k = 0 forward mode rotates at (V0 + m c^2) / hbar") {
  Constants u{1.0, 1.0, 2.0};
  const double V0 = 0.25;
  Grid g(16, 4.0);
  KGState s{make_mode_superposition(g, {{0, {1.0, 0.0}}}), ComplexField(g), 0.0};
  s.chi.fill({u.rest_energy(), 0.0});
  const KGState ds = kg_rhs(s, static_potential::Constant{V0}, kNoXi, u);
  const double rate = (V0 + u.rest_energy()) / u.hbar;
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(ds.phi[j] - cplx(0.0, -rate) * s.phi[j]) < 1e-12);
    CHECK(std::abs(ds.chi[j] - cplx(0.0, -rate) * s.chi[j]) < 1e-12);
  }
}

TEST_CASE("free plane wave returns to itself after one period") {
  Grid g(64, 20.0);
  CHECK(period_error(g, 4, Constants{}, 2000) < 1e-8);
}

TEST_CASE("RK4 self-convergence: halving dt cuts the error about 16x") {
  Grid g(64, 20.0);
  const Constants u;
  const double e1 = period_error(g, 4, u, 100);
  const double e2 = period_error(g, 4, u, 200);
  const double ratio = e1 / e2;
  CAPTURE(e1);
  CAPTURE(e2);
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}

TEST_CASE("dt = 0 is the identity") {
  Grid g(64, 20.0);
  const KGState s = kg_init_forward(make_gaussian_packet({0.0, 1.0, 0.5}, g), Constants{});
  const KGState out = kg_step(s, 0.0, static_potential::Constant{0.2}, dynamic_potential::Constant{0.1}, Constants{});
  CHECK(max_abs_diff(out.phi, s.phi) == 0.0);
  CHECK(max_abs_diff(out.chi, s.chi) == 0.0);
  CHECK(out.t == 0.0);
}

TEST_CASE("forward plane wave keeps a constant modulus") {
  Grid g(64, 20.0);
  const Constants u;
  KGState s = plane_wave(g, 5, u);
  KgStepper stepper(KgOperator(g, kNoV, kNoXi, u));
  for (int i = 0; i < 500; ++i) stepper.step(s, 0.01);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(std::abs(std::abs(s.phi[j]) - 1.0) < 1e-8);
  CHECK(stepper.steps_taken() == 500);
}

TEST_CASE("massless forward projection is hbar c |k|") {
  Grid g(128, 30.0);
  const Constants u{1.0, 2.0, 0.0};
  const auto packet = make_gaussian_packet({0.0, 1.5, 1.0}, g);
  const KGState s = kg_init_forward(packet, u);
  auto phi_hat = s.phi, chi_hat = s.chi;
  fft::forward_primary(phi_hat);
  fft::forward_primary(chi_hat);
  for (std::size_t j = 0; j < g.size(); ++j)
    CHECK(std::abs(chi_hat[j] - u.hbar * u.c * std::abs(g.frequency(j)) * phi_hat[j]) < 1e-10);
}

TEST_CASE("forward projection of a k = 0 mode has no backward part") {
  Grid g(32, 10.0);
  const Constants u;
  const KGState s = plane_wave(g, 0, u);
  const PairStateM p = pair_from_kg(s, u);
  CHECK(l2_norm(p.minus) / l2_norm(p.plus) < 1e-12);
}

TEST_CASE("free KG energy is conserved") {
  Grid g(256, 100.0);
  const Constants u;
  KGState s = kg_init_forward(make_gaussian_packet({0.0, 4.0, 0.5}, g), u);
  const double e0 = kg_energy(s, u);
  KgStepper stepper(KgOperator(g, kNoV, kNoXi, u));
  for (int i = 0; i < 1000; ++i) stepper.step(s, 0.01);
  CHECK(std::abs(kg_energy(s, u) - e0) / e0 < 1e-8);
}

TEST_CASE("stability bound follows the largest frequency") {
  Grid g(64, 2.0 * pi);  // nyquist k = 32
  const Constants u;
  KgOperator op(g, static_potential::Constant{-0.5}, dynamic_potential::StandingWave{0.1, 1.0, 1.0}, u);
  const double w = std::sqrt(32.0 * 32.0 + 1.0) + 0.5 + 0.2;
  CHECK(op.max_frequency() == doctest::Approx(w));
  CHECK(op.stable_dt() == doctest::Approx(0.5 / w));
}

TEST_CASE("runaway stepping reports divergence") {
  Grid g(64, 2.0 * pi);
  const Constants u;
  KGState s = kg_init_forward(make_gaussian_packet({0.0, 0.5, 0.0}, g), u);
  KgStepper stepper(KgOperator(g, kNoV, kNoXi, u));
  CHECK_THROWS_AS(
      [&] {
        for (int i = 0; i < 10000; ++i) stepper.step(s, 1.0);
      }(),
      DivergenceError);
}

TEST_CASE("light-cone mass examples") {
  Grid g(256, 40.0);
  const Constants u;
  const auto f = make_gaussian_packet({0.0, 0.5, 0.0}, g);
  const double r = containment_radius(f, 0.0);
  CHECK(r > 0.0);
  CHECK(r < 20.0);
  CHECK(light_cone_mass(f, 0.0, 0.0, u, r) <= 1e-10);  // r encloses 1 - 1e-10 of the weight
  CHECK(light_cone_mass(f, 0.0, 0.0, u, containment_radius(f, 0.0, 1.0 - 1e-15)) < 1e-12);
  CHECK(light_cone_mass(f, 0.0, 0.0, u, 20.0) == 0.0);
  CHECK(light_cone_mass(f, 0.0, 0.3, u, 20.0) == 0.0);
  CHECK(light_cone_mass(f, 0.0, 0.0, u, 0.0) > 0.5);
  CHECK_THROWS_AS(light_cone_mass(f, 0.0, -1.0, u, r), ConfigError);
}
