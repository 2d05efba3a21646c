#include "kgfactor/kg_exact.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kgfactor/dispersion.hpp"
#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"
#include "kgfactor/spectral.hpp"

namespace kgfactor {
namespace {

void require_line(const ComplexField& f, const char* what) {
  if (f.transverse()) throw ConfigError(std::string(what) + " works on 1-D space fields only");
  if (f.grid().axis_kind() != AxisKind::space) throw ConfigError(std::string(what) + " needs a space grid");
}

double periodic_distance(double x, double x0, double length) {
  double d = x - x0;
  d -= length * std::round(d / length);
  return std::abs(d);
}

}  // namespace

KgOperator::KgOperator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi,
                       const Constants& consts)
    : grid_(grid),
      xi_(Xi),
      consts_(consts),
      v_(eval_static(V, grid)),
      xi_cache_t_(0.0),
      xi_static_(is_time_independent(Xi)),
      laplacian_(derivative_multiplier(grid, 2)),
      work_(grid) {
  consts_.validate();
  xi_cache_ = eval_dynamic(xi_, grid_, 0.0);
  double vmax = 0.0;
  for (double v : v_) vmax = std::max(vmax, std::abs(v));
  omega_max_ = kg_dispersion_omega(grid_.nyquist(), consts_) + vmax / consts_.hbar +
               consts_.rest_energy() * 2.0 * max_abs(xi_) / consts_.hbar;
}

void KgOperator::rhs(const KGState& s, double t, KGState& ds) {
  if (!xi_static_ && t != xi_cache_t_) {
    xi_cache_ = eval_dynamic(xi_, grid_, t);
    xi_cache_t_ = t;
  }
  auto w = work_.values();
  std::copy(s.phi.values().begin(), s.phi.values().end(), w.begin());
  apply_spectral_multiplier(work_, laplacian_);

  const double hbar = consts_.hbar;
  const double mc2 = consts_.rest_energy();
  const double m2c4 = mc2 * mc2;
  const double h2c2 = hbar * hbar * consts_.c * consts_.c;
  const cplx minus_i_over_hbar(0.0, -1.0 / hbar);

  auto phi = s.phi.values();
  auto chi = s.chi.values();
  auto dphi = ds.phi.values();
  auto dchi = ds.chi.values();
  const auto n = static_cast<std::ptrdiff_t>(phi.size());
#pragma omp parallel for schedule(static) if (phi.size() >= kernels::kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double v = v_[j];
    dphi[j] = minus_i_over_hbar * (v * phi[j] + chi[j]);
    dchi[j] = minus_i_over_hbar * (v * chi[j] + m2c4 * (1.0 + 2.0 * xi_cache_[j]) * phi[j] - h2c2 * w[j]);
  }
}

KGState kg_rhs(const KGState& s, const StaticPotential& V, const DynamicPotential& Xi, const Constants& consts) {
  require_same_layout(s.phi, s.chi, "kg_rhs");
  require_line(s.phi, "kg_rhs");
  KgOperator op(s.phi.grid(), V, Xi, consts);
  KGState ds = s;
  op.rhs(s, s.t, ds);
  return ds;
}

void KgStepper::step(KGState& s, double dt) {
  if (dt == 0.0) return;
  rk4_.advance(s, s.t, dt, [this](const KGState& in, double t, KGState& out) { op_.rhs(in, t, out); });
  s.t += dt;
  ++steps_;
  if (!s.phi.all_finite() || !s.chi.all_finite()) throw DivergenceError(steps_, "Klein-Gordon state");
}

KGState kg_step(const KGState& s, double dt, const StaticPotential& V, const DynamicPotential& Xi,
                const Constants& consts) {
  require_same_layout(s.phi, s.chi, "kg_step");
  require_line(s.phi, "kg_step");
  KgStepper stepper(KgOperator(s.phi.grid(), V, Xi, consts));
  KGState out = s;
  stepper.step(out, dt);
  return out;
}

KGState kg_init_forward(const ComplexField& packet, const Constants& consts) {
  require_line(packet, "kg_init_forward");
  consts.validate();
  const Grid& grid = packet.grid();
  std::vector<cplx> mult(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) mult[j] = consts.hbar * kg_dispersion_omega(grid.frequency(j), consts);
  ComplexField chi = packet;
  apply_spectral_multiplier(chi, mult);
  return KGState{packet, std::move(chi), 0.0};
}

double kg_energy(const KGState& s, const Constants& consts) {
  const double mc2 = consts.rest_energy();
  const double hc = consts.hbar * consts.c;
  const ComplexField dphi = spectral_derivative(s.phi, 1);
  const double cell = s.phi.cell();
  return (kernels::sum_abs2(s.chi.values()) + mc2 * mc2 * kernels::sum_abs2(s.phi.values()) +
          hc * hc * kernels::sum_abs2(dphi.values())) *
         cell;
}

double containment_radius(const ComplexField& f, double x0, double fraction) {
  require_line(f, "containment_radius");
  const Grid& grid = f.grid();
  std::vector<std::size_t> order(grid.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) dist[j] = periodic_distance(grid.coordinate(j), x0, grid.length());
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  double total = 0.0;
  for (std::size_t j : order) total += std::norm(f[j]);
  if (total == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t j : order) {
    acc += std::norm(f[j]);
    if (acc >= fraction * total) return dist[j];
  }
  return dist[order.back()];
}

double light_cone_mass(const ComplexField& f, double x0, double t, const Constants& consts, double margin) {
  require_line(f, "light_cone_mass");
  if (t < 0.0) throw ConfigError("light_cone_mass needs t >= 0");
  const Grid& grid = f.grid();
  const double radius = consts.c * t + margin;
  double outside = 0.0;
  double total = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double w = std::norm(f[j]);
    total += w;
    if (periodic_distance(grid.coordinate(j), x0, grid.length()) > radius) outside += w;
  }
  return total == 0.0 ? 0.0 : outside / total;
}

}  // namespace kgfactor
