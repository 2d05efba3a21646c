#include "kgfactor/factor_m.hpp"

#include <algorithm>
#include <cmath>

#include "kgfactor/dispersion.hpp"
#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"
#include "kgfactor/spectral.hpp"

namespace kgfactor {
namespace {

void require_line(const ComplexField& f, const char* what) {
  if (f.transverse() || f.grid().axis_kind() != AxisKind::space)
    throw ConfigError(std::string(what) + " works on 1-D space fields only");
}

double d10_omega_max(const Grid& grid, const std::vector<double>& v, const DynamicPotential& xi,
                     const Constants& consts) {
  double vmax = 0.0;
  for (double s : v) vmax = std::max(vmax, std::abs(s));
  return kg_dispersion_omega(grid.nyquist(), consts) + vmax / consts.hbar +
         consts.rest_energy() * 2.0 * max_abs(xi) / consts.hbar;
}

}  // namespace

PairStateM pair_from_kg(const KGState& s, const Constants& consts) {
  consts.require_massive("pair_from_kg");
  require_same_layout(s.phi, s.chi, "pair_from_kg");
  const double inv = 1.0 / consts.rest_energy();
  PairStateM p{s.phi, s.phi, s.t};
  kernels::axpy(inv, s.chi.values(), p.plus.values());
  kernels::axpy(-inv, s.chi.values(), p.minus.values());
  kernels::scale(p.plus.values(), 0.5);
  kernels::scale(p.minus.values(), 0.5);
  return p;
}

KGState kg_from_pair(const PairStateM& p, const Constants& consts) {
  consts.require_massive("kg_from_pair");
  require_same_layout(p.plus, p.minus, "kg_from_pair");
  KGState s{p.plus, p.plus, p.t};
  kernels::axpy(1.0, p.minus.values(), s.phi.values());
  kernels::axpy(-1.0, p.minus.values(), s.chi.values());
  kernels::scale(s.chi.values(), consts.rest_energy());
  return s;
}

PairMOperator::PairMOperator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi,
                             const Constants& consts)
    : grid_(grid), xi_(Xi), consts_(consts), v_(eval_static(V, grid)), kinetic_(grid.size()), sum_(grid) {
  consts_.require_massive("pair_m");
  const double coef = consts_.hbar * consts_.hbar / (2.0 * consts_.m);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.frequency(j);
    kinetic_[j] = coef * k * k;
  }
  xi_now_ = eval_dynamic(xi_, grid_, 0.0);
  omega_max_ = d10_omega_max(grid_, v_, xi_, consts_);
}

void PairMOperator::rhs(const PairStateM& p, double t, PairStateM& dp) {
  if (!is_time_independent(xi_)) xi_now_ = eval_dynamic(xi_, grid_, t);
  auto sum = sum_.values();
  kernels::combine(sum, p.plus.values(), 1.0, p.minus.values());
  // Coupling G = m c^2 Xi S - (hbar^2 / 2m) d_x^2 S, S = Phi+ + Phi-.
  ComplexField kin = sum_;
  apply_spectral_multiplier(kin, kinetic_);

  const double mc2 = consts_.rest_energy();
  const cplx minus_i_over_hbar(0.0, -1.0 / consts_.hbar);
  auto plus = p.plus.values();
  auto minus = p.minus.values();
  auto dplus = dp.plus.values();
  auto dminus = dp.minus.values();
  auto k = kin.values();
  const auto n = static_cast<std::ptrdiff_t>(plus.size());
#pragma omp parallel for schedule(static) if (plus.size() >= kernels::kParallelThreshold)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const cplx g = mc2 * xi_now_[j] * sum[j] + k[j];
    dplus[j] = minus_i_over_hbar * ((mc2 + v_[j]) * plus[j] + g);
    dminus[j] = minus_i_over_hbar * ((v_[j] - mc2) * minus[j] - g);
  }
}

PairStateM pair_rhs_m(const PairStateM& p, const StaticPotential& V, const DynamicPotential& Xi,
                      const Constants& consts) {
  require_same_layout(p.plus, p.minus, "pair_rhs_m");
  require_line(p.plus, "pair_rhs_m");
  PairMOperator op(p.plus.grid(), V, Xi, consts);
  PairStateM dp = p;
  op.rhs(p, p.t, dp);
  return dp;
}

void PairMStepper::step(PairStateM& p, double dt) {
  if (dt == 0.0) return;
  rk4_.advance(p, p.t, dt, [this](const PairStateM& in, double t, PairStateM& out) { op_.rhs(in, t, out); });
  p.t += dt;
  ++steps_;
  if (!p.plus.all_finite() || !p.minus.all_finite()) throw DivergenceError(steps_, "coupled m-pair");
}

ValidityReport validity_margin_m(const PairStateM& p, const StaticPotential& V, const DynamicPotential& Xi,
                                 const Constants& consts, double threshold) {
  consts.require_massive("validity_margin_m");
  require_same_layout(p.plus, p.minus, "validity_margin_m");
  require_line(p.plus, "validity_margin_m");
  const Grid& grid = p.plus.grid();
  const auto v = eval_static(V, grid);
  const auto xi = eval_dynamic(Xi, grid, p.t);
  const double mc2 = consts.rest_energy();
  const double kin = consts.hbar * consts.hbar / (2.0 * mc2 * consts.m);

  // D f = (Xi - hbar^2 d_x^2 / 2 m^2 c^2) f
  auto drive = [&](const ComplexField& f) {
    ComplexField out = spectral_derivative(f, 2);
    auto o = out.values();
    for (std::size_t j = 0; j < o.size(); ++j) o[j] = xi[j] * f[j] - kin * o[j];
    return l2_norm(out);
  };
  auto kept = [&](const ComplexField& f, double sign) {
    ComplexField out = f;
    auto o = out.values();
    for (std::size_t j = 0; j < o.size(); ++j) o[j] *= 1.0 + sign * v[j] / mc2;
    return l2_norm(out);
  };

  const double den_plus = kept(p.plus, +1.0);
  const double den_minus = kept(p.minus, -1.0);
  if (den_plus == 0.0 && den_minus == 0.0) throw UndefinedRatioError("validity_margin_m: both components vanish");

  ValidityReport r;
  r.threshold = threshold;
  r.ratio_plus = den_plus > 0.0 ? drive(p.minus) / den_plus : 0.0;
  r.ratio_minus = den_minus > 0.0 ? drive(p.plus) / den_minus : 0.0;
  r.ratio = std::max(r.ratio_plus, r.ratio_minus);
  r.ok = r.ratio < threshold;
  return r;
}

void rotate_rest_mass(ComplexField& f, double sign, double t, const Constants& consts) {
  const cplx phase = std::polar(1.0, sign * consts.rest_energy() * t / consts.hbar);
  kernels::scale(f.values(), phase);
}

PairStateM remove_rest_mass_phase(const PairStateM& p, const Constants& consts) {
  consts.require_massive("remove_rest_mass_phase");
  PairStateM out = p;
  rotate_rest_mass(out.plus, +1.0, p.t, consts);
  rotate_rest_mass(out.minus, -1.0, p.t, consts);
  return out;
}

PairStateM restore_rest_mass_phase(const PairStateM& p, const Constants& consts) {
  consts.require_massive("restore_rest_mass_phase");
  PairStateM out = p;
  rotate_rest_mass(out.plus, -1.0, p.t, consts);
  rotate_rest_mass(out.minus, +1.0, p.t, consts);
  return out;
}

SplitStepPropagator::SplitStepPropagator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi,
                                         const Constants& consts, int direction, bool with_rest_mass)
    : grid_(grid),
      xi_(Xi),
      consts_(consts),
      direction_(direction >= 0 ? +1 : -1),
      rest_mass_(with_rest_mass),
      v_(eval_static(V, grid)),
      angle_(grid.size()),
      k2_(grid.size()),
      kinetic_(grid.size()) {
  consts_.require_massive("split-step propagation");
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.frequency(j);
    k2_[j] = k * k;
  }
}

void SplitStepPropagator::potential_phase(ComplexField& f, double t_mid, double half_dt) {
  const double mc2 = consts_.rest_energy();
  const double s = direction_;
  const auto xi = eval_dynamic(xi_, grid_, t_mid);
  for (std::size_t j = 0; j < angle_.size(); ++j)
    angle_[j] = (rest_mass_ ? s * mc2 : 0.0) + v_[j] + s * mc2 * xi[j];
  kernels::apply_phase(f.values(), angle_, -half_dt / consts_.hbar);
}

void SplitStepPropagator::step(ComplexField& f, double t, double dt) {
  if (f.grid() != grid_ || f.transverse()) throw GridMismatchError("split-step field does not match propagator grid");
  if (!f.all_finite()) throw NonFiniteError("split-step input is not finite");
  if (dt != kinetic_dt_) {
    const double coef = -direction_ * consts_.hbar * dt / (2.0 * consts_.m);
    for (std::size_t j = 0; j < k2_.size(); ++j) kinetic_[j] = std::polar(1.0, coef * k2_[j]);
    kinetic_dt_ = dt;
  }
  const double t_mid = t + 0.5 * dt;
  potential_phase(f, t_mid, 0.5 * dt);
  fft::forward_primary(f);
  kernels::multiply(f.values(), kinetic_);
  fft::inverse_primary(f);
  potential_phase(f, t_mid, 0.5 * dt);
}

ComplexField schrodinger_step(const ComplexField& psi, double t, double dt, const StaticPotential& V,
                              const DynamicPotential& Xi, const Constants& consts) {
  if (!(dt > 0.0)) throw ConfigError("schrodinger_step needs dt > 0");
  require_line(psi, "schrodinger_step");
  SplitStepPropagator prop(psi.grid(), V, Xi, consts, +1, false);
  ComplexField out = psi;
  prop.step(out, t, dt);
  return out;
}

PairStateM m_equation_with_mass_step(const PairStateM& p, double dt, const StaticPotential& V,
                                     const DynamicPotential& Xi, const Constants& consts) {
  if (!(dt > 0.0)) throw ConfigError("m_equation_with_mass_step needs dt > 0");
  require_same_layout(p.plus, p.minus, "m_equation_with_mass_step");
  require_line(p.plus, "m_equation_with_mass_step");
  SplitStepPropagator forward(p.plus.grid(), V, Xi, consts, +1, true);
  SplitStepPropagator backward(p.plus.grid(), V, Xi, consts, -1, true);
  PairStateM out = p;
  forward.step(out.plus, p.t, dt);
  backward.step(out.minus, p.t, dt);
  out.t = p.t + dt;
  return out;
}

}  // namespace kgfactor
