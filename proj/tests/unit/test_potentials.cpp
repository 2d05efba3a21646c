#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kgfactor/errors.hpp"
#include "kgfactor/potentials.hpp"

using namespace kgfactor;
using std::numbers::pi;

TEST_CASE("static potential examples") {
  Grid g(64, 20.0);
  for (double v : eval_static(static_potential::Zero{}, g)) CHECK(v == 0.0);
  for (double v : eval_static(static_potential::Constant{0.3}, g)) CHECK(v == 0.3);

  const auto well = eval_static(static_potential::GaussianWell{-0.05, 0.0, 2.0}, g);
  CHECK(well[32] == doctest::Approx(-0.05));  // x = 0
  CHECK(well[42] == doctest::Approx(-0.05 * std::exp(-0.5 * 3.125 * 3.125 / 4.0)));
  for (double v : well) CHECK(v <= 0.0);

  const auto harm = eval_static(static_potential::Harmonic{2.0, 1.0}, g);
  CHECK(harm[32] == doctest::Approx(1.0));  // 2 (0 - 1)^2 / 2
  CHECK(static_value_at(static_potential::Harmonic{2.0, 1.0}, 1.0) == 0.0);
}

TEST_CASE("static potential errors") {
  Grid g(16, 1.0);
  CHECK_THROWS_AS(eval_static(static_potential::Tabulated{std::vector<double>(15)}, g), ConfigError);
  CHECK_THROWS_AS(eval_static(static_potential::Zero{}, Grid(16, 1.0, AxisKind::time)), ConfigError);
  CHECK_THROWS_AS(eval_static(static_potential::GaussianWell{1.0, 0.0, 0.0}, g), ConfigError);
  CHECK_THROWS_AS(static_value_at(static_potential::Tabulated{}, 0.0), ConfigError);
  std::vector<double> nan(16, 0.0);
  nan[2] = std::nan("");
  CHECK_THROWS_AS(eval_static(static_potential::Tabulated{nan}, g), NonFiniteError);
}

TEST_CASE("static potential does not depend on when it is evaluated") {
  Grid g(128, 10.0);
  const StaticPotential V = static_potential::GaussianWell{-0.1, 1.0, 0.7};
  CHECK(eval_static(V, g) == eval_static(V, g));
}

TEST_CASE("dynamic potential examples") {
  Grid g(64, 2.0 * pi);
  for (double v : eval_dynamic(dynamic_potential::Zero{}, g, 3.0)) CHECK(v == 0.0);

  // cosine node: omega t = pi/2
  const dynamic_potential::StandingWave sw{0.2, 1.0, 2.0};
  for (double v : eval_dynamic(sw, g, pi / 4.0)) CHECK(std::abs(v) < 1e-16);
  const auto at0 = eval_dynamic(sw, g, 0.0);
  CHECK(at0[32] == doctest::Approx(0.2));

  // dense sampling of a traveling wave reaches its amplitude
  const dynamic_potential::TravelingWave tw{0.3, 1.0, 0.5};
  double peak = 0.0;
  for (double v : eval_dynamic(tw, Grid(4096, 2.0 * pi), 0.7)) {
    CHECK(std::abs(v) <= 0.3);
    peak = std::max(peak, std::abs(v));
  }
  CHECK(peak == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(max_abs(tw) == 0.3);
}

TEST_CASE("tabulated dynamic potential interpolates linearly in time") {
  Grid g(8, 1.0);
  dynamic_potential::Tabulated tab{1.0, 0.5, {std::vector<double>(8, 0.0), std::vector<double>(8, 2.0)}};
  for (double v : eval_dynamic(tab, g, 1.25)) CHECK(v == doctest::Approx(1.0));
  for (double v : eval_dynamic(tab, g, 1.5)) CHECK(v == doctest::Approx(2.0));
  CHECK_THROWS_AS(eval_dynamic(tab, g, 2.0), ConfigError);
  CHECK_THROWS_AS(eval_dynamic(tab, g, 0.5), ConfigError);
  CHECK_THROWS_AS(eval_dynamic(tab, Grid(16, 1.0), 1.0), ConfigError);
  CHECK(max_abs(tab) == 2.0);
  CHECK_FALSE(is_time_independent(tab));
}

TEST_CASE("dynamic potential over a time axis") {
  Grid t(32, 4.0 * pi, AxisKind::time);
  const auto v = eval_dynamic_over_time(dynamic_potential::TravelingWave{0.1, 2.0, 1.0}, 0.5, t);
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(v[j] == doctest::Approx(0.1 * std::cos(1.0 - t.coordinate(j))));
}

TEST_CASE("potential classification") {
  CHECK(is_zero(StaticPotential{static_potential::Constant{0.0}}));
  CHECK_FALSE(is_zero(StaticPotential{static_potential::Constant{0.1}}));
  CHECK(is_zero(DynamicPotential{dynamic_potential::StandingWave{0.0, 1.0, 1.0}}));
  CHECK(is_time_independent(dynamic_potential::StandingWave{0.1, 1.0, 0.0}));
  CHECK_FALSE(is_time_independent(dynamic_potential::TravelingWave{0.1, 1.0, 1.0}));
}

// A constant V shift is the same perturbation as a constant Xi = V / m c^2.
TEST_CASE("a constant V is expressible as a constant Xi") {
  const double V0 = 0.02, mc2 = 1.0;
  Grid g(16, 1.0);
  const auto v = eval_static(static_potential::Constant{V0}, g);
  const auto xi = eval_dynamic(dynamic_potential::Constant{V0 / mc2}, g, 5.0);
  for (std::size_t j = 0; j < g.size(); ++j) CHECK(v[j] == doctest::Approx(mc2 * xi[j]));
}
