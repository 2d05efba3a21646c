#include "kgfactor/factor_p.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"
#include "kgfactor/spectral.hpp"

namespace kgfactor {
namespace {

void require_time_layout(const ComplexField& f, const Grid& time, const std::optional<Grid>& transverse) {
  if (f.grid() != time || f.transverse() != transverse)
    throw GridMismatchError("p-field layout does not match the propagator grids");
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double s : v) m = std::max(m, std::abs(s));
  return m;
}

// Components advanced together by one integrating-factor RK4 step; sign[i]
// picks the direction of the diagonal term for component i.
struct Components {
  std::vector<ComplexField*> parts;
  std::vector<double> sign;
};

}  // namespace

std::optional<double> ebar(double omega, const Constants& consts, double eps) {
  const double e = consts.hbar * std::abs(omega);
  const double mc2 = consts.rest_energy();
  if (e <= mc2 * (1.0 + eps)) return std::nullopt;
  return std::sqrt((e - mc2) * (e + mc2));
}

std::optional<double> reference_wavevector(double omega, double V, const Constants& consts, double eps) {
  const auto eb = ebar(omega, consts, eps);
  if (!eb) return std::nullopt;
  return omega / consts.c * (1.0 + V / *eb);
}

EbarSpectrum EbarSpectrum::build(const Grid& time_grid, const Constants& consts, double eps) {
  if (time_grid.axis_kind() != AxisKind::time) throw ConfigError("Ebar spectrum needs a time grid");
  consts.validate();
  EbarSpectrum s;
  const std::size_t n = time_grid.size();
  s.ebar.assign(n, 0.0);
  s.inverse.assign(n, 0.0);
  s.masked.assign(n, true);
  for (std::size_t j = 0; j < n; ++j) {
    if (const auto eb = kgfactor::ebar(time_grid.frequency(j), consts, eps)) {
      s.ebar[j] = *eb;
      s.inverse[j] = 1.0 / *eb;
      s.masked[j] = false;
    }
  }
  return s;
}

double EbarSpectrum::masked_fraction(const ComplexField& f) const {
  if (f.row_length() != masked.size()) throw GridMismatchError("Ebar spectrum length differs from field");
  ComplexField spec = f;
  fft::forward_primary(spec);
  double total = 0.0;
  double hidden = 0.0;
  for (std::size_t r = 0; r < spec.rows(); ++r) {
    const auto row = spec.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double e = std::norm(row[j]);
      total += e;
      if (masked[j]) hidden += e;
    }
  }
  return total > 0.0 ? hidden / total : 0.0;
}

PPropagator::PPropagator(const Grid& time_grid, std::optional<Grid> transverse, PPotentials potentials,
                         const Constants& consts, PMode mode, double eps)
    : time_(time_grid),
      transverse_(std::move(transverse)),
      pot_(std::move(potentials)),
      consts_(consts),
      mode_(mode),
      spectrum_(EbarSpectrum::build(time_grid, consts, eps)),
      kappa_(time_grid.size(), 0.0),
      dt_mult_(derivative_multiplier(time_grid, 1)),
      loaded_z_(0.0),
      stable_dz_(std::numeric_limits<double>::infinity()) {
  if (transverse_) {
    if (transverse_->axis_kind() != AxisKind::space) throw ConfigError("transverse axis must be a space grid");
    transverse_mult_ = derivative_multiplier(*transverse_, 2);
    static_profile_ = eval_static(pot_.V, *transverse_);
  }
  const std::size_t nyquist_bin = time_.size() / 2;
  for (std::size_t j = 0; j < time_.size(); ++j) {
    if (j == nyquist_bin) continue;  // odd-order convention: the Nyquist bin does not propagate
    const double w = time_.frequency(j);
    if (mode_ == PMode::literal)
      kappa_[j] = w / consts_.c;
    else if (!spectrum_.masked[j])
      kappa_[j] = std::copysign(spectrum_.ebar[j], w) / (consts_.hbar * consts_.c);
  }

  load_potentials(0.0);
  const double vmax = max_abs(v_);
  const double ximax = max_abs(xi_);
  const double mc2 = consts_.rest_energy();
  const double kt = transverse_ ? transverse_->nyquist() : 0.0;
  const double hc = consts_.hbar * consts_.c;
  double bound = 0.0;
  for (std::size_t j = 0; j < time_.size(); ++j) {
    const double w = std::abs(time_.frequency(j));
    const double drive =
        vmax * vmax + 2.0 * consts_.hbar * w * vmax + 2.0 * mc2 * mc2 * ximax + hc * hc * kt * kt;
    bound = std::max(bound, spectrum_.inverse[j] * drive / (2.0 * hc));
  }
  if (bound > 0.0) stable_dz_ = 0.5 / bound;
}

void PPropagator::load_potentials(double z) {
  if (loaded_ && z == loaded_z_) return;
  const std::size_t rows = transverse_ ? transverse_->size() : 1;
  const std::size_t n = time_.size();
  const auto v_time = eval_dynamic_over_time(pot_.V_time, z, time_);
  const auto xi_time = eval_dynamic_over_time(pot_.Xi, z, time_);
  const double v_line = transverse_ ? 0.0 : static_value_at(pot_.V, z);
  v_.resize(rows * n);
  xi_.resize(rows * n);
  for (std::size_t r = 0; r < rows; ++r) {
    const double base = transverse_ ? static_profile_[r] : v_line;
    for (std::size_t j = 0; j < n; ++j) {
      v_[r * n + j] = base + v_time[j];
      xi_[r * n + j] = xi_time[j];
    }
  }
  loaded_z_ = z;
  loaded_ = true;
}

ComplexField PPropagator::apply_W(const ComplexField& f, double z) {
  require_time_layout(f, time_, transverse_);
  if (!f.all_finite()) throw NonFiniteError("apply_W input is not finite");
  load_potentials(z);
  const double hbar = consts_.hbar;
  const double mc2 = consts_.rest_energy();
  const cplx minus_i_hbar(0.0, -hbar);

  ComplexField vf = f;
  kernels::multiply(vf.values(), v_);
  ComplexField d_vf = vf;  // d_t (V f)
  apply_spectral_multiplier(d_vf, dt_mult_);
  ComplexField df = f;  // d_t f
  apply_spectral_multiplier(df, dt_mult_);

  ComplexField out = f;
  auto o = out.values();
  const auto in = f.values();
  const auto a = d_vf.values();
  const auto b = df.values();
  for (std::size_t j = 0; j < o.size(); ++j) {
    const double v = v_[j];
    o[j] = (v * v - 2.0 * mc2 * mc2 * xi_[j]) * in[j] + minus_i_hbar * (a[j] + v * b[j]);
  }
  if (transverse_) {
    const double hc = hbar * consts_.c;
    kernels::axpy(hc * hc, transverse_laplacian(f).values(), o);
  }
  if (!out.all_finite()) throw NonFiniteError("apply_W produced non-finite values");
  return out;
}

void PPropagator::coupling_into(const ComplexField& f, double z, ComplexField& out) {
  out = apply_W(f, z);
  const double pre = 1.0 / (2.0 * consts_.hbar * consts_.c);
  std::vector<cplx> mult(time_.size());
  for (std::size_t j = 0; j < mult.size(); ++j) mult[j] = cplx(0.0, pre * spectrum_.inverse[j]);
  apply_spectral_multiplier(out, mult);
}

ComplexField PPropagator::coupling(const ComplexField& f, double z) {
  ComplexField out = f;
  coupling_into(f, z, out);
  return out;
}

ComplexField PPropagator::leading(const ComplexField& f) const {
  require_time_layout(f, time_, transverse_);
  std::vector<cplx> mult(kappa_.size());
  for (std::size_t j = 0; j < mult.size(); ++j) mult[j] = cplx(0.0, kappa_[j]);
  ComplexField out = f;
  apply_spectral_multiplier(out, mult);
  return out;
}

void PPropagator::diagonal_phase(ComplexField& f, double sign, double dz) const {
  std::vector<cplx> mult(kappa_.size());
  for (std::size_t j = 0; j < mult.size(); ++j) mult[j] = std::polar(1.0, sign * kappa_[j] * dz);
  apply_spectral_multiplier(f, mult);
}

void PPropagator::check_evanescent(const PairStateP& p) const {
  require_time_layout(p.plus, time_, transverse_);
  require_time_layout(p.minus, time_, transverse_);
  const double ep = l2_norm(p.plus);
  const double em = l2_norm(p.minus);
  const double total = ep * ep + em * em;
  if (total == 0.0) return;
  const double hidden =
      spectrum_.masked_fraction(p.plus) * ep * ep + spectrum_.masked_fraction(p.minus) * em * em;
  if (hidden / total >= kMaskedEnergyTolerance)
    throw EvanescentContentError("fraction " + std::to_string(hidden / total) +
                                 " of the field energy lies in evanescent frequency bins");
}

PairStateP PPropagator::pair_rhs(const PairStateP& p) {
  check_evanescent(p);
  ComplexField sum = p.plus;
  kernels::axpy(1.0, p.minus.values(), sum.values());
  const ComplexField drive = coupling(sum, p.z);
  PairStateP d{leading(p.plus), leading(p.minus), p.z};
  kernels::axpy(1.0, drive.values(), d.plus.values());
  kernels::scale(d.minus.values(), -1.0);
  kernels::axpy(-1.0, drive.values(), d.minus.values());
  return d;
}

ComplexField PPropagator::forward_rhs(const PairStateP& p) {
  require_time_layout(p.plus, time_, transverse_);
  if (spectrum_.masked_fraction(p.plus) >= kMaskedEnergyTolerance)
    throw EvanescentContentError("forward field has energy in evanescent frequency bins");
  ComplexField d = leading(p.plus);
  kernels::axpy(1.0, coupling(p.plus, p.z).values(), d.values());
  return d;
}

namespace {

// Lawson RK4: y' = L y + N(z, y) with L diagonal in w, integrated exactly.
template <class Phase, class Drive>
void lawson_step(Components y, double z, double h, Phase&& phase, Drive&& drive) {
  const std::size_t m = y.parts.size();
  auto copy = [&]() {
    std::vector<ComplexField> out;
    out.reserve(m);
    for (auto* f : y.parts) out.push_back(*f);
    return out;
  };
  auto apply_phase = [&](std::vector<ComplexField>& v, double dz) {
    for (std::size_t i = 0; i < m; ++i) phase(v[i], y.sign[i], dz);
  };
  auto eval = [&](const std::vector<ComplexField>& v, double zz) {
    std::vector<ComplexField> k = v;
    drive(v, zz, k);
    return k;
  };

  const std::vector<ComplexField> y0 = copy();
  std::vector<ComplexField> k1 = eval(y0, z);

  std::vector<ComplexField> a = y0;
  for (std::size_t i = 0; i < m; ++i) kernels::axpy(0.5 * h, k1[i].values(), a[i].values());
  apply_phase(a, 0.5 * h);
  std::vector<ComplexField> k2 = eval(a, z + 0.5 * h);

  std::vector<ComplexField> half_y = y0;
  apply_phase(half_y, 0.5 * h);
  std::vector<ComplexField> b = half_y;
  for (std::size_t i = 0; i < m; ++i) kernels::axpy(0.5 * h, k2[i].values(), b[i].values());
  std::vector<ComplexField> k3 = eval(b, z + 0.5 * h);

  std::vector<ComplexField> full_y = y0;
  apply_phase(full_y, h);
  std::vector<ComplexField> half_k3 = k3;
  apply_phase(half_k3, 0.5 * h);
  std::vector<ComplexField> c = full_y;
  for (std::size_t i = 0; i < m; ++i) kernels::axpy(h, half_k3[i].values(), c[i].values());
  std::vector<ComplexField> k4 = eval(c, z + h);

  apply_phase(k1, h);
  for (std::size_t i = 0; i < m; ++i) kernels::axpy(1.0, k3[i].values(), k2[i].values());
  apply_phase(k2, 0.5 * h);
  for (std::size_t i = 0; i < m; ++i) {
    auto out = y.parts[i]->values();
    std::copy(full_y[i].values().begin(), full_y[i].values().end(), out.begin());
    kernels::axpy(h / 6.0, k1[i].values(), out);
    kernels::axpy(h / 3.0, k2[i].values(), out);
    kernels::axpy(h / 6.0, k4[i].values(), out);
  }
}

}  // namespace

void PPropagator::step_pair(PairStateP& p, double dz) {
  if (dz == 0.0) return;
  check_evanescent(p);
  auto phase = [this](ComplexField& f, double sign, double h) { diagonal_phase(f, sign, h); };
  auto drive = [this](const std::vector<ComplexField>& v, double z, std::vector<ComplexField>& k) {
    ComplexField sum = v[0];
    kernels::axpy(1.0, v[1].values(), sum.values());
    coupling_into(sum, z, k[0]);
    k[1] = k[0];
    kernels::scale(k[1].values(), -1.0);
  };
  lawson_step(Components{{&p.plus, &p.minus}, {+1.0, -1.0}}, p.z, dz, phase, drive);
  p.z += dz;
  ++steps_;
  if (!p.plus.all_finite() || !p.minus.all_finite()) throw DivergenceError(steps_, "coupled p-pair");
}

void PPropagator::step_forward(PairStateP& p, double dz) {
  if (dz == 0.0) return;
  require_time_layout(p.plus, time_, transverse_);
  if (spectrum_.masked_fraction(p.plus) >= kMaskedEnergyTolerance)
    throw EvanescentContentError("forward field has energy in evanescent frequency bins");
  auto phase = [this](ComplexField& f, double sign, double h) { diagonal_phase(f, sign, h); };
  auto drive = [this](const std::vector<ComplexField>& v, double z, std::vector<ComplexField>& k) {
    coupling_into(v[0], z, k[0]);
  };
  lawson_step(Components{{&p.plus}, {+1.0}}, p.z, dz, phase, drive);
  p.z += dz;
  ++steps_;
  if (!p.plus.all_finite()) throw DivergenceError(steps_, "forward p-equation");
}

void PPropagator::free_march(PairStateP& p, double dz) const {
  check_evanescent(p);
  diagonal_phase(p.plus, +1.0, dz);
  diagonal_phase(p.minus, -1.0, dz);
  p.z += dz;
}

ValidityReport PPropagator::validity(const PairStateP& p, double threshold) {
  check_evanescent(p);
  load_potentials(p.z);
  const double c = consts_.c;
  // Kept term (1/c) [d_t f + Ebar^-1 (V d_t f)].
  std::vector<cplx> inv(spectrum_.inverse.begin(), spectrum_.inverse.end());
  auto kept = [&](const ComplexField& f) {
    ComplexField df = f;
    apply_spectral_multiplier(df, dt_mult_);
    ComplexField vdf = df;
    kernels::multiply(vdf.values(), v_);
    apply_spectral_multiplier(vdf, inv);
    kernels::axpy(1.0, vdf.values(), df.values());
    return l2_norm(df) / c;
  };
  auto cross = [&](const ComplexField& f) { return l2_norm(coupling(f, p.z)); };

  const double den_plus = kept(p.plus);
  const double den_minus = kept(p.minus);
  if (den_plus == 0.0 && den_minus == 0.0) throw UndefinedRatioError("validity_margin_p: both components vanish");
  ValidityReport r;
  r.threshold = threshold;
  r.ratio_plus = den_plus > 0.0 ? cross(p.minus) / den_plus : 0.0;
  r.ratio_minus = den_minus > 0.0 ? cross(p.plus) / den_minus : 0.0;
  r.ratio = std::max(r.ratio_plus, r.ratio_minus);
  r.ok = r.ratio < threshold;
  return r;
}

ComplexField apply_W(const ComplexField& f, const PPotentials& pot, const Constants& consts, double z) {
  PPropagator prop(f.grid(), f.transverse(), pot, consts, PMode::literal);
  return prop.apply_W(f, z);
}

PairStateP p_pair_rhs(const PairStateP& p, const PPotentials& pot, const Constants& consts, PMode mode) {
  require_same_layout(p.plus, p.minus, "p_pair_rhs");
  PPropagator prop(p.plus.grid(), p.plus.transverse(), pot, consts, mode);
  return prop.pair_rhs(p);
}

ComplexField p_forward_rhs(const PairStateP& p, const PPotentials& pot, const Constants& consts, PMode mode) {
  PPropagator prop(p.plus.grid(), p.plus.transverse(), pot, consts, mode);
  return prop.forward_rhs(p);
}

PairStateP p_exact_free_march(const PairStateP& p, double dz, const Constants& consts) {
  require_same_layout(p.plus, p.minus, "p_exact_free_march");
  PPropagator prop(p.plus.grid(), p.plus.transverse(), PPotentials{}, consts, PMode::exact_omega);
  PairStateP out = p;
  prop.free_march(out, dz);
  return out;
}

ValidityReport validity_margin_p(const PairStateP& p, const PPotentials& pot, const Constants& consts,
                                 double threshold) {
  require_same_layout(p.plus, p.minus, "validity_margin_p");
  PPropagator prop(p.plus.grid(), p.plus.transverse(), pot, consts, PMode::literal);
  return prop.validity(p, threshold);
}

}  // namespace kgfactor
