#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kgfactor/constants.hpp"
#include "kgfactor/dispersion.hpp"
#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/field.hpp"
#include "kgfactor/grid.hpp"
#include "kgfactor/harness/experiments.hpp"
#include "kgfactor/spectral.hpp"
#include "kgfactor/wavepacket.hpp"

using namespace kgfactor;
using std::numbers::pi;

namespace {

ComplexField random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n01;
  std::vector<cplx> v(g.size());
  for (auto& x : v) x = {n01(rng), n01(rng)};
  return ComplexField(g, std::move(v));
}

double max_abs_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid coordinates and frequencies") {
  Grid g(8, 4.0);
  CHECK(g.spacing() == doctest::Approx(0.5));
  CHECK(g.coordinate(0) == doctest::Approx(-2.0));
  CHECK(g.coordinate(7) == doctest::Approx(1.5));
  CHECK(g.signed_index(3) == 3);
  CHECK(g.signed_index(4) == -4);
  CHECK(g.signed_index(7) == -1);
  CHECK(g.frequency(1) == doctest::Approx(2.0 * pi / 4.0));
  CHECK(g.frequency(7) == doctest::Approx(-2.0 * pi / 4.0));
  CHECK(g.nyquist() == doctest::Approx(pi / 0.5));
  for (long s = -4; s < 4; ++s) CHECK(g.signed_index(g.bin_of(s)) == s);
  CHECK_THROWS_AS(Grid(0, 1.0), ConfigError);
  CHECK_THROWS_AS(Grid(8, -1.0), ConfigError);
}

TEST_CASE("field construction errors") {
  Grid g(8, 1.0);
  CHECK_THROWS_AS(ComplexField(g, std::vector<cplx>(7)), GridMismatchError);
  std::vector<cplx> bad(8);
  bad[3] = {std::nan(""), 0.0};
  CHECK_THROWS_AS(ComplexField(g, bad), NonFiniteError);
  CHECK_THROWS_AS(l2_error(ComplexField(g), ComplexField(Grid(16, 1.0))), GridMismatchError);
}

TEST_CASE("l2 norm examples") {
  Grid g(64, 2.0 * pi);
  ComplexField one(g);
  one.fill({1.0, 0.0});
  CHECK(l2_norm(one) == doctest::Approx(std::sqrt(2.0 * pi)).epsilon(1e-14));
  CHECK(l2_norm(ComplexField(g)) == 0.0);
  ComplexField two(g);
  two.fill({0.0, 2.0});
  CHECK(l2_error(one, two) == doctest::Approx(std::sqrt(5.0 * 2.0 * pi)).epsilon(1e-14));
}

TEST_CASE("Parseval: spectral norm equals grid norm") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto f = random_field(Grid(128, 7.0), seed);
    CHECK(l2_norm_spectral(f) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
  }
}

TEST_CASE("fft round trip and single-mode peak") {
  Grid g(32, 10.0);
  auto f = make_mode_superposition(g, {{5, {2.0, -1.0}}});
  const auto orig = f;
  fft::forward_primary(f);
  for (std::size_t j = 0; j < g.size(); ++j) {
    // the grid starts at -L/2, so the coefficient carries exp(i k x_0)
    const double k = g.frequency(g.bin_of(5));
    const cplx expect = g.signed_index(j) == 5 ? cplx(2.0, -1.0) * 32.0 * std::polar(1.0, k * g.coordinate(0)) : cplx(0.0);
    CHECK(std::abs(f[j] - expect) < 1e-12);
  }
  fft::inverse_primary(f);
  CHECK(max_abs_diff(f, orig) < 1e-14);
}

TEST_CASE("spectral derivative of a grid mode is exact") {
  Grid g(64, 20.0);
  const double k = g.frequency(g.bin_of(3));
  const auto f = make_mode_superposition(g, {{3, {1.0, 0.0}}});
  const auto d1 = spectral_derivative(f, 1);
  const auto d2 = spectral_derivative(f, 2);
  for (std::size_t j = 0; j < g.size(); ++j) {
    CHECK(std::abs(d1[j] - cplx(0.0, k) * f[j]) < 1e-12);
    CHECK(std::abs(d2[j] + k * k * f[j]) < 1e-12);
  }
  CHECK_THROWS_AS(spectral_derivative(f, 3), ConfigError);
}

TEST_CASE("spectral derivative agrees with finite differences on a smooth packet") {
  Grid g(512, 40.0);
  const auto f = make_gaussian_packet({0.0, 2.0, 1.0, Normalization::unit_peak}, g);
  const auto d1 = spectral_derivative(f, 1);
  const double h = g.spacing();
  const std::size_t n = g.size();
  for (std::size_t j = 0; j < n; ++j) {
    auto at = [&](long o) { return f[(j + n + o) % n]; };
    // 6th-order central difference
    const cplx fd = (-at(-3) + 9.0 * at(-2) - 45.0 * at(-1) + 45.0 * at(1) - 9.0 * at(2) + at(3)) / (60.0 * h);
    CHECK(std::abs(d1[j] - fd) < 1e-6);
  }
}

TEST_CASE("spectral derivative is linear") {
  Grid g(128, 9.0);
  const auto a = random_field(g, 11), b = random_field(g, 12);
  const cplx alpha{0.3, -1.7};
  std::vector<cplx> v(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = a[j] + alpha * b[j];
  const auto lhs = spectral_derivative(ComplexField(g, v), 2);
  const auto da = spectral_derivative(a, 2), db = spectral_derivative(b, 2);
  for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(lhs[j] - (da[j] + alpha * db[j])) < 1e-9);
}

TEST_CASE("transverse laplacian acts on the transverse axis only") {
  Grid t(16, 8.0, AxisKind::time), x(32, 4.0);
  std::vector<cplx> v(t.size() * x.size());
  const double k = x.frequency(x.bin_of(2));
  for (std::size_t r = 0; r < x.size(); ++r)
    for (std::size_t j = 0; j < t.size(); ++j) v[r * t.size() + j] = std::polar(1.0, k * x.coordinate(r) + 0.3 * j);
  const ComplexField f(t, x, v);
  const auto lap = transverse_laplacian(f);
  for (std::size_t i = 0; i < v.size(); ++i) CHECK(std::abs(lap[i] + k * k * f[i]) < 1e-11);
  const auto flat = transverse_laplacian(make_mode_superposition(t, {{1, {1.0, 0.0}}}));
  CHECK(l2_norm(flat) == 0.0);
}

TEST_CASE("gaussian packet normalization and validation") {
  Grid g(256, 50.0);
  const auto unit = make_gaussian_packet({1.0, 2.0, 0.5, Normalization::unit_l2}, g);
  CHECK(l2_norm(unit) == doctest::Approx(1.0).epsilon(1e-14));
  const auto peak = make_gaussian_packet({0.0, 2.0, 0.5, Normalization::unit_peak}, g);
  double m = 0.0;
  for (const auto& s : peak.values()) m = std::max(m, std::abs(s));
  CHECK(m == doctest::Approx(1.0).epsilon(1e-14));
  // closed-form norm of exp(-x^2/4s^2): (2 pi s^2)^(1/4)
  CHECK(l2_norm(peak) == doctest::Approx(std::pow(2.0 * pi * 4.0, 0.25)).epsilon(1e-10));
  CHECK_THROWS_AS(make_gaussian_packet({0.0, 0.0, 0.0}, g), ConfigError);
  CHECK_THROWS_AS(make_gaussian_packet({0.0, 50.0 / 8.0, 0.0}, g), ConfigError);
  CHECK_THROWS_AS(make_gaussian_packet({0.0, 1.0, g.nyquist() / 4.0}, g), ConfigError);
  CHECK_THROWS_AS(make_mode_superposition(g, {{128, {1.0, 0.0}}}), ConfigError);
}

TEST_CASE("dispersion closed forms") {
  Constants u;
  CHECK(kg_dispersion_omega(0.0, u) == doctest::Approx(1.0));
  CHECK(kg_dispersion_omega(std::sqrt(3.0), u) == doctest::Approx(2.0));
  CHECK(kg_dispersion_omega(-2.0, Constants{1.0, 3.0, 0.0}) == doctest::Approx(6.0));
  CHECK(kg_dispersion_omega(1.0, Constants{2.0, 1.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(schrodinger_dispersion_E(0.0, 0.0, 0.0, u) == doctest::Approx(1.0));
  CHECK(schrodinger_dispersion_E(2.0, 0.5, 0.1, u) == doctest::Approx(1.0 + 0.5 + 0.1 + 2.0));
  CHECK_THROWS_AS(schrodinger_dispersion_E(1.0, 0.0, 0.0, Constants{1.0, 1.0, 0.0}), ConfigError);
}

TEST_CASE("relativistic correction to the quadratic dispersion is -k^4/8") {
  Constants u;
  std::vector<double> ks{0.05, 0.1, 0.2}, diff;
  for (double k : ks) {
    const double d = kg_dispersion_omega(k, u) - schrodinger_dispersion_E(k, 0.0, 0.0, u);
    CHECK(d == doctest::Approx(-std::pow(k, 4) / 8.0).epsilon(0.01));
    diff.push_back(-d);
  }
  CHECK(harness::log_log_slope(ks, diff) == doctest::Approx(4.0).epsilon(0.01));
}
