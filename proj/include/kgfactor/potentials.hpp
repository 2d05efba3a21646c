#pragma once

#include <variant>
#include <vector>

#include "kgfactor/grid.hpp"

namespace kgfactor {

// Static (Salpeter) potential V(x), energy units.
namespace static_potential {
struct Zero {};
struct Constant {
  double value = 0.0;
};
/// depth * exp(-(x - center)^2 / 2 width^2); negative depth is a well.
struct GaussianWell {
  double depth = 0.0;
  double center = 0.0;
  double width = 1.0;
};
/// strength * (x - center)^2 / 2
struct Harmonic {
  double strength = 0.0;
  double center = 0.0;
};
struct Tabulated {
  std::vector<double> samples;
};
}  // namespace static_potential

using StaticPotential = std::variant<static_potential::Zero, static_potential::Constant,
                                     static_potential::GaussianWell, static_potential::Harmonic,
                                     static_potential::Tabulated>;

// Dynamic (gravitational proxy) potential Xi(x, t), dimensionless.
namespace dynamic_potential {
struct Zero {};
struct Constant {
  double value = 0.0;
};
/// amplitude * cos(k x) * cos(w t)
struct StandingWave {
  double amplitude = 0.0;
  double k = 0.0;
  double omega = 0.0;
};
/// amplitude * cos(k x - w t)
struct TravelingWave {
  double amplitude = 0.0;
  double k = 0.0;
  double omega = 0.0;
};
/// Frames sampled at t0 + i * dt, each matching the grid; linear in t between frames.
struct Tabulated {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<std::vector<double>> frames;
};
}  // namespace dynamic_potential

using DynamicPotential =
    std::variant<dynamic_potential::Zero, dynamic_potential::Constant, dynamic_potential::StandingWave,
                 dynamic_potential::TravelingWave, dynamic_potential::Tabulated>;

/// V(x_j) on a space grid. Throws ConfigError for a time grid or a table of the wrong length.
std::vector<double> eval_static(const StaticPotential& V, const Grid& grid);
/// V at a single position; tables are not supported (ConfigError).
double static_value_at(const StaticPotential& V, double x);

/// Xi(x_j, t) on a grid. Throws ConfigError when t lies outside a table's range.
std::vector<double> eval_dynamic(const DynamicPotential& Xi, const Grid& grid, double t);
/// Xi(x, t_j) at fixed position x over a time grid (analytic families only).
std::vector<double> eval_dynamic_over_time(const DynamicPotential& Xi, double x, const Grid& time_grid);

/// Largest |V| / |Xi| over a grid (time-sampled for tables and waves via amplitude bounds).
double max_abs(const StaticPotential& V, const Grid& grid);
double max_abs(const DynamicPotential& Xi);

bool is_zero(const StaticPotential& V);
bool is_zero(const DynamicPotential& Xi);
bool is_time_independent(const DynamicPotential& Xi);

}  // namespace kgfactor
