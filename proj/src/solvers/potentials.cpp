#include "kgfactor/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kgfactor/errors.hpp"

namespace kgfactor {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double static_at(const StaticPotential& V, double x) {
  return std::visit(overloaded{
                        [](const static_potential::Zero&) { return 0.0; },
                        [](const static_potential::Constant& p) { return p.value; },
                        [x](const static_potential::GaussianWell& p) {
                          const double d = (x - p.center) / p.width;
                          return p.depth * std::exp(-0.5 * d * d);
                        },
                        [x](const static_potential::Harmonic& p) {
                          const double d = x - p.center;
                          return 0.5 * p.strength * d * d;
                        },
                        [](const static_potential::Tabulated&) -> double {
                          throw ConfigError("tabulated static potential has no pointwise value");
                        },
                    },
                    V);
}

double dynamic_at(const DynamicPotential& Xi, double x, double t) {
  return std::visit(overloaded{
                        [](const dynamic_potential::Zero&) { return 0.0; },
                        [](const dynamic_potential::Constant& p) { return p.value; },
                        [x, t](const dynamic_potential::StandingWave& p) {
                          return p.amplitude * std::cos(p.k * x) * std::cos(p.omega * t);
                        },
                        [x, t](const dynamic_potential::TravelingWave& p) {
                          return p.amplitude * std::cos(p.k * x - p.omega * t);
                        },
                        [](const dynamic_potential::Tabulated&) -> double {
                          throw ConfigError("tabulated dynamic potential has no pointwise value");
                        },
                    },
                    Xi);
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double s : v)
    if (!std::isfinite(s)) throw NonFiniteError(std::string(what) + " is not finite on the grid");
}

}  // namespace

std::vector<double> eval_static(const StaticPotential& V, const Grid& grid) {
  if (grid.axis_kind() != AxisKind::space) throw ConfigError("static potential needs a space grid");
  std::vector<double> out(grid.size());
  if (const auto* table = std::get_if<static_potential::Tabulated>(&V)) {
    if (table->samples.size() != grid.size())
      throw ConfigError("tabulated static potential has " + std::to_string(table->samples.size()) +
                        " samples, grid has " + std::to_string(grid.size()));
    out = table->samples;
  } else {
    if (const auto* well = std::get_if<static_potential::GaussianWell>(&V); well && !(well->width > 0.0))
      throw ConfigError("gaussian_well width must be positive");
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = static_at(V, grid.coordinate(j));
  }
  check_finite(out, "static potential");
  return out;
}

double static_value_at(const StaticPotential& V, double x) { return static_at(V, x); }

std::vector<double> eval_dynamic(const DynamicPotential& Xi, const Grid& grid, double t) {
  std::vector<double> out(grid.size());
  if (const auto* table = std::get_if<dynamic_potential::Tabulated>(&Xi)) {
    if (table->frames.empty() || !(table->dt > 0.0)) throw ConfigError("tabulated dynamic potential is empty");
    if (table->frames.size() == 1) {
      if (table->frames.front().size() != grid.size())
        throw ConfigError("tabulated dynamic potential frame length differs from grid");
      return table->frames.front();
    }
    const double pos = (t - table->t0) / table->dt;
    const double last = static_cast<double>(table->frames.size() - 1);
    constexpr double slack = 1e-9;
    if (pos < -slack || pos > last + slack)
      throw ConfigError("time " + std::to_string(t) + " outside tabulated dynamic potential range");
    const double clamped = std::clamp(pos, 0.0, last);
    const auto i0 = static_cast<std::size_t>(std::floor(clamped));
    const std::size_t i1 = std::min(i0 + 1, table->frames.size() - 1);
    const double w = clamped - static_cast<double>(i0);
    const auto& f0 = table->frames[i0];
    const auto& f1 = table->frames[i1];
    if (f0.size() != grid.size() || f1.size() != grid.size())
      throw ConfigError("tabulated dynamic potential frame length differs from grid");
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = (1.0 - w) * f0[j] + w * f1[j];
  } else {
    for (std::size_t j = 0; j < grid.size(); ++j) out[j] = dynamic_at(Xi, grid.coordinate(j), t);
  }
  check_finite(out, "dynamic potential");
  return out;
}

std::vector<double> eval_dynamic_over_time(const DynamicPotential& Xi, double x, const Grid& time_grid) {
  std::vector<double> out(time_grid.size());
  for (std::size_t j = 0; j < time_grid.size(); ++j) out[j] = dynamic_at(Xi, x, time_grid.coordinate(j));
  check_finite(out, "dynamic potential");
  return out;
}

double max_abs(const StaticPotential& V, const Grid& grid) {
  double m = 0.0;
  for (double v : eval_static(V, grid)) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const DynamicPotential& Xi) {
  return std::visit(overloaded{
                        [](const dynamic_potential::Zero&) { return 0.0; },
                        [](const dynamic_potential::Constant& p) { return std::abs(p.value); },
                        [](const dynamic_potential::StandingWave& p) { return std::abs(p.amplitude); },
                        [](const dynamic_potential::TravelingWave& p) { return std::abs(p.amplitude); },
                        [](const dynamic_potential::Tabulated& p) {
                          double m = 0.0;
                          for (const auto& frame : p.frames)
                            for (double v : frame) m = std::max(m, std::abs(v));
                          return m;
                        },
                    },
                    Xi);
}

bool is_zero(const StaticPotential& V) {
  if (std::holds_alternative<static_potential::Zero>(V)) return true;
  if (const auto* c = std::get_if<static_potential::Constant>(&V)) return c->value == 0.0;
  return false;
}

bool is_zero(const DynamicPotential& Xi) {
  if (std::holds_alternative<dynamic_potential::Zero>(Xi)) return true;
  if (const auto* c = std::get_if<dynamic_potential::Constant>(&Xi)) return c->value == 0.0;
  return max_abs(Xi) == 0.0;
}

bool is_time_independent(const DynamicPotential& Xi) {
  if (std::holds_alternative<dynamic_potential::Zero>(Xi) || std::holds_alternative<dynamic_potential::Constant>(Xi))
    return true;
  if (const auto* s = std::get_if<dynamic_potential::StandingWave>(&Xi)) return s->omega == 0.0 || s->amplitude == 0.0;
  if (const auto* w = std::get_if<dynamic_potential::TravelingWave>(&Xi)) return w->omega == 0.0 || w->amplitude == 0.0;
  if (const auto* tab = std::get_if<dynamic_potential::Tabulated>(&Xi)) return tab->frames.size() == 1;
  return false;
}

}  // namespace kgfactor
