#include "kgfactor/harness/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>

#include <omp.h>

#include "kgfactor/dispersion.hpp"
#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::optional<double> constant_value(const StaticPotential& V) {
  if (std::holds_alternative<static_potential::Zero>(V)) return 0.0;
  if (const auto* c = std::get_if<static_potential::Constant>(&V)) return c->value;
  return std::nullopt;
}

std::optional<double> constant_value(const DynamicPotential& Xi) {
  if (std::holds_alternative<dynamic_potential::Zero>(Xi)) return 0.0;
  if (const auto* c = std::get_if<dynamic_potential::Constant>(&Xi)) return c->value;
  return std::nullopt;
}

// Evaluate f(i) for i in [0, n) on the scan thread pool; results in index order.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<std::optional<T>> out(n);
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 1) num_threads(scan_threads())
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      out[i].emplace(f(static_cast<std::size_t>(i)));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<T> result;
  result.reserve(n);
  for (auto& o : out) result.push_back(std::move(*o));
  return result;
}

void require_same_setup(const SimConfig& a, const SimConfig& b) {
  if (a.primary_grid() != b.primary_grid() || a.transverse_grid() != b.transverse_grid())
    throw ConfigError("compare: runs use different grids");
  if (a.is_p_solver() != b.is_p_solver()) throw ConfigError("compare: cannot mix m-solvers and p-solvers");
  const json ja = to_json(a);
  const json jb = to_json(b);
  for (const char* key : {"packet", "modes", "transverse_packet"}) {
    const bool ha = ja.contains(key);
    if (ha != jb.contains(key) || (ha && ja.at(key) != jb.at(key)))
      throw ConfigError(std::string("compare: runs use different '") + key + "'");
  }
}

double unwrap_step(double prev, double next) {
  double d = next - prev;
  d -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
  return prev + d;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : kNaN;
}

double predicted_rate(const SimConfig& c, double k) {
  const auto V0 = constant_value(c.V);
  const auto Xi0 = constant_value(c.Xi);
  if (!V0 || !Xi0 || !is_zero(c.V_time) || c.transverse) return kNaN;
  const Constants& q = c.constants;
  switch (c.solver) {
    case Solver::kg:
    case Solver::pair_m: {
      const double m2 = q.m * q.m * q.c * q.c * q.c * q.c * (1.0 + 2.0 * *Xi0) / (q.hbar * q.hbar);
      return std::sqrt(q.c * q.c * k * k + m2) + *V0 / q.hbar;
    }
    case Solver::schrodinger: return (*V0 + q.rest_energy() * *Xi0 + q.hbar * q.hbar * k * k / (2.0 * q.m)) / q.hbar;
    case Solver::m_with_mass: return schrodinger_dispersion_E(k, *V0, *Xi0, q) / q.hbar;
    case Solver::pair_p:
    case Solver::forward_p: {
      if (*Xi0 != 0.0) return kNaN;
      const auto eb = ebar(k, q);
      if (!eb) return kNaN;
      if (c.p_mode == PMode::literal) return *reference_wavevector(k, *V0, q);
      return std::copysign(*eb, k) / (q.hbar * q.c) + k * *V0 / (q.c * *eb);
    }
  }
  return kNaN;
}

}  // namespace

int scan_threads() {
  int n = omp_get_max_threads();
  if (const char* env = std::getenv("KGFACTOR_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<long>(n, cap);
  }
  return std::max(n, 1);
}

Alignment parse_alignment(const std::string& s) {
  if (s == "none") return Alignment::none;
  if (s == "remove_rest_mass") return Alignment::remove_rest_mass;
  if (s == "remove_rest_mass_and_V") return Alignment::remove_rest_mass_and_V;
  throw ConfigError("alignment must be none, remove_rest_mass or remove_rest_mass_and_V");
}

std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::none: return "none";
    case Alignment::remove_rest_mass: return "remove_rest_mass";
    case Alignment::remove_rest_mass_and_V: return "remove_rest_mass_and_V";
  }
  return "?";
}

ComplexField aligned_field(const Snapshot& snap, const SimConfig& c, Alignment alignment) {
  const double t = snap.coordinate;
  if (c.is_p_solver()) {
    if (alignment != Alignment::none) throw ConfigError("p-solver runs only compare with alignment none");
    ComplexField f = snap.component("plus");
    if (c.solver == Solver::pair_p) kernels::axpy(1.0, snap.component("minus").values(), f.values());
    return f;
  }
  ComplexField f(c.primary_grid());
  bool has_rest_mass = true;
  switch (c.solver) {
    case Solver::kg:
      if (alignment == Alignment::none) return snap.component("phi");
      if (c.constants.m == 0.0) throw ConfigError("rest-mass alignment needs m > 0");
      f = pair_from_kg(KGState{snap.component("phi"), snap.component("chi"), t}, c.constants).plus;
      break;
    case Solver::pair_m:
    case Solver::m_with_mass:
      f = snap.component("plus");
      if (alignment == Alignment::none) {
        kernels::axpy(1.0, snap.component("minus").values(), f.values());
        return f;
      }
      break;
    case Solver::schrodinger:
      f = snap.component("psi");
      has_rest_mass = false;
      break;
    default: break;
  }
  if (alignment == Alignment::none) return f;
  double energy = has_rest_mass ? c.constants.rest_energy() : 0.0;
  if (alignment == Alignment::remove_rest_mass_and_V) {
    const auto V0 = constant_value(c.V);
    if (!V0) throw ConfigError("remove_rest_mass_and_V needs a zero or constant V");
    energy += *V0;
  }
  kernels::scale(f.values(), std::polar(1.0, energy * t / c.constants.hbar));
  return f;
}

ErrorReport compare(const SimConfig& a, const SimConfig& b, Alignment alignment) {
  require_same_setup(a, b);
  const std::vector<const SimConfig*> legs{&a, &b};
  const auto results = parallel_map<SimResult>(2, [&](std::size_t i) {
    RunOptions opt;
    opt.snapshot_every = legs[i]->output_every;
    return run(*legs[i], opt);
  });
  const auto& ra = results[0];
  const auto& rb = results[1];
  if (ra.snapshots.size() != rb.snapshots.size())
    throw ConfigError("compare: runs record different numbers of samples");

  ErrorReport report;
  report.series.names = {"l2_error", "relative_error", "norm_a", "norm_b"};
  for (std::size_t i = 0; i < ra.snapshots.size(); ++i) {
    const auto& sa = ra.snapshots[i];
    const auto& sb = rb.snapshots[i];
    if (std::abs(sa.coordinate - sb.coordinate) > 1e-9 * std::max(1.0, std::abs(sb.coordinate)))
      throw ConfigError("compare: runs record samples at different times");
    const ComplexField fa = aligned_field(sa, a, alignment);
    const ComplexField fb = aligned_field(sb, b, alignment);
    const double err = l2_error(fa, fb);
    const double nb = l2_norm(fb);
    const double rel = nb > 0.0 ? err / nb : (err == 0.0 ? 0.0 : kNaN);
    report.series.push(sb.step, sb.coordinate, {err, rel, l2_norm(fa), nb});
  }
  report.final_error = report.series.rows.back()[0];
  report.final_relative = report.series.rows.back()[1];
  return report;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (x[i] == 0.0 || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    lx.push_back(std::log(std::abs(x[i])));
    ly.push_back(std::log(y[i]));
  }
  if (lx.size() < 2) return kNaN;
  return fit_slope(lx, ly);
}

ScanResult convergence_scan(const ScanSpec& spec) {
  if (spec.values.size() < 3) throw ConfigError("a scan needs at least 3 values");
  if (std::all_of(spec.values.begin(), spec.values.end(), [&](double v) { return v == spec.values.front(); }))
    throw ConfigError("scan values are all identical");
  if (spec.param.empty()) throw ConfigError("scan needs a parameter key");

  ScanResult out;
  out.param = spec.param;
  out.values = spec.values;
  out.metric = spec.metric.empty() ? (spec.reference ? "error" : "validity_ratio") : spec.metric;
  if (spec.reference && out.metric != "error" && out.metric != "relative_error")
    throw ConfigError("scan with a reference records 'error' or 'relative_error'");

  std::vector<SimConfig> configs, refs;
  for (double v : spec.values) {
    json base = spec.base;
    set_dotted(base, spec.param, v);
    configs.push_back(parse_config(base));
    if (spec.reference) {
      json ref = *spec.reference;
      set_dotted(ref, spec.param, v);
      refs.push_back(parse_config(ref));
    }
  }
  // Legs run serially inside a point; points run in parallel.
  out.metrics = parallel_map<double>(spec.values.size(), [&](std::size_t i) {
    if (spec.reference) {
      const SimConfig& a = configs[i];
      const SimConfig& b = refs[i];
      require_same_setup(a, b);
      const SimResult ra = run(a, RunOptions{false, a.step_count() ? a.step_count() : 1});
      const SimResult rb = run(b, RunOptions{false, b.step_count() ? b.step_count() : 1});
      const ComplexField fa = aligned_field(ra.snapshots.back(), a, spec.alignment);
      const ComplexField fb = aligned_field(rb.snapshots.back(), b, spec.alignment);
      const double err = l2_error(fa, fb);
      if (out.metric == "error") return err;
      const double nb = l2_norm(fb);
      return nb > 0.0 ? err / nb : 0.0;
    }
    const SimResult r = run(configs[i]);
    return r.series.column(out.metric).back();
  });
  out.slope = log_log_slope(out.values, out.metrics);
  return out;
}

std::vector<DispersionPoint> dispersion_extract(const SimResult& result) {
  const auto& snaps = result.snapshots;
  if (snaps.size() < 4) throw ConfigError("dispersion fit needs at least 4 samples, have " + std::to_string(snaps.size()));
  const SimConfig& c = result.config;
  const Grid grid = c.primary_grid();
  const std::string name = snaps.front().components.front().first;

  // Row carrying the most weight (the only row without a transverse axis).
  const ComplexField& first = snaps.front().component(name);
  std::size_t row = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < first.rows(); ++r) {
    double w = 0.0;
    for (const cplx& v : first.row(r)) w += std::norm(v);
    if (w > best) {
      best = w;
      row = r;
    }
  }
  auto spectrum = [&](const Snapshot& s) {
    const auto src = s.component(name).row(row);
    std::vector<cplx> line(src.begin(), src.end());
    fft::forward(line, line.size());
    return line;
  };

  std::vector<std::vector<cplx>> spectra;
  spectra.reserve(snaps.size());
  for (const auto& s : snaps) spectra.push_back(spectrum(s));

  std::vector<std::size_t> bins;
  if (!c.modes.empty()) {
    for (const auto& m : c.modes) bins.push_back(grid.bin_of(m.index));
  } else {
    double peak = 0.0;
    for (const cplx& v : spectra.front()) peak = std::max(peak, std::abs(v));
    for (std::size_t j = 0; j < grid.size(); ++j)
      if (peak > 0.0 && std::abs(spectra.front()[j]) >= 1e-3 * peak) bins.push_back(j);
  }

  const double sign = c.is_p_solver() ? 1.0 : -1.0;
  std::vector<double> coord;
  for (const auto& s : snaps) coord.push_back(s.coordinate);
  std::vector<DispersionPoint> out;
  for (std::size_t bin : bins) {
    if (spectra.front()[bin] == cplx(0.0)) continue;
    std::vector<double> phase{std::arg(spectra.front()[bin])};
    for (std::size_t i = 1; i < spectra.size(); ++i) phase.push_back(unwrap_step(phase.back(), std::arg(spectra[i][bin])));
    DispersionPoint p;
    p.index = grid.signed_index(bin);
    p.wavenumber = grid.frequency(bin);
    p.measured = sign * fit_slope(coord, phase);
    p.predicted = predicted_rate(c, p.wavenumber);
    p.relative_error = std::isnan(p.predicted) ? kNaN : std::abs(p.measured - p.predicted) / std::abs(p.predicted);
    out.push_back(p);
  }
  return out;
}

ResonanceResult resonance_scan(const json& base, const std::vector<double>& omegas) {
  if (omegas.empty()) throw ConfigError("resonance scan needs at least one frequency");
  const SimConfig probe = parse_config(base);
  if (probe.solver != Solver::pair_m) throw ConfigError("resonance scan runs the pair_m solver");
  if (!std::holds_alternative<dynamic_potential::StandingWave>(probe.Xi) &&
      !std::holds_alternative<dynamic_potential::TravelingWave>(probe.Xi))
    throw ConfigError("resonance scan needs a standing_wave or traveling_wave Xi");

  std::vector<SimConfig> configs;
  for (double w : omegas) {
    json j = base;
    set_dotted(j, "potential.Xi.omega", w);
    configs.push_back(parse_config(j));
  }
  const auto runs = parallel_map<std::vector<double>>(omegas.size(), [&](std::size_t i) {
    return run(configs[i]).series.column("norm_minus");
  });

  ResonanceResult out;
  out.omegas = omegas;
  double best = -1.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const double mx = *std::max_element(runs[i].begin(), runs[i].end());
    out.max_minus.push_back(mx);
    out.growth.push_back(mx - runs[i].front());
    if (out.growth.back() > best) {
      best = out.growth.back();
      out.peak_omega = omegas[i];
    }
  }
  return out;
}

}  // namespace kgfactor::harness
