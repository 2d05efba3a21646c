// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every experiment below is the library form of a single CLI invocation on
// the configs/ directory.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "kgfactor/errors.hpp"
#include "kgfactor/factor_m.hpp"
#include "kgfactor/factor_p.hpp"
#include "kgfactor/harness/config.hpp"
#include "kgfactor/harness/experiments.hpp"
#include "kgfactor/harness/io.hpp"
#include "kgfactor/harness/run.hpp"
#include "kgfactor/wavepacket.hpp"

using namespace kgfactor;
using namespace kgfactor::harness;
namespace fs = std::filesystem;

namespace {

// Tolerances.
constexpr double kReformulationRelError = 1e-6;
constexpr double kDispersionRelError = 1e-6;
constexpr std::size_t kMinDispersionModes = 8;
constexpr double kNonrelSlope = 4.0, kNonrelSlopeTol = 0.5;
constexpr double kSplitStepNormDrift = 1e-12;
constexpr std::size_t kSplitSteps = 10000;
constexpr double kKgEnergyDrift = 1e-8;
constexpr double kLightConeRatio = 1e3;
constexpr double kLightConeKgMax = 1e-8;
constexpr double kTranslationError = 1e-8;
constexpr double kExactKzRelError = 1e-10;
constexpr double kMassSlope = 2.0, kMassSlopeTol = 0.3;
constexpr double kValiditySlope = 2.0, kValiditySlopeTol = 0.3;
constexpr double kResonanceWindow = 0.10;

// Runtime limits in seconds (0: none).
constexpr double kLimit[9] = {0, 30, 20, 60, 0, 20, 30, 60, 0};

const fs::path kConfigs = KGFACTOR_CONFIG_DIR;

json cfg(const std::string& name) { return load_json_file((kConfigs / name).string()); }

json overridden(json j, std::initializer_list<const char*> assignments) {
  for (const char* a : assignments) apply_override(j, a);
  return j;
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [FAILED]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double worst_relative(const std::vector<DispersionPoint>& points) {
  double w = 0.0;
  for (const auto& p : points) w = std::max(w, std::isfinite(p.relative_error) ? p.relative_error : INFINITY);
  return w;
}

Outcome reformulation() {
  Outcome o;
  const ErrorReport rep = compare(parse_config(cfg("reformulation_pair.json")),
                                  parse_config(cfg("reformulation_kg.json")), Alignment::none);
  o.require(rep.final_relative < kReformulationRelError,
            "pair_m vs kg relative L2 error " + fmt("%.3g", rep.final_relative));
  return o;
}

Outcome dispersion() {
  Outcome o;
  const SimConfig kg = parse_config(cfg("kg_modes.json"));
  const auto kg_points = dispersion_extract(run(kg, RunOptions{false, kg.output_every}));
  o.require(kg_points.size() >= kMinDispersionModes, std::to_string(kg_points.size()) + " kg modes");
  const double kg_err = worst_relative(kg_points);
  o.require(kg_err < kDispersionRelError, "omega(k) worst relative error " + fmt("%.3g", kg_err));

  const SimConfig fp = parse_config(cfg("forward_p_modes.json"));
  const auto p_points = dispersion_extract(run(fp, RunOptions{false, fp.output_every}));
  o.require(p_points.size() >= kMinDispersionModes, std::to_string(p_points.size()) + " forward_p modes");
  const double p_err = worst_relative(p_points);
  o.require(p_err < kDispersionRelError, "K(w) worst relative error " + fmt("%.3g", p_err));
  return o;
}

Outcome nonrelativistic() {
  Outcome o;
  ScanSpec spec;
  spec.base = cfg("nonrel_schrodinger.json");
  spec.reference = cfg("nonrel_kg.json");
  spec.alignment = Alignment::remove_rest_mass;
  spec.param = "packet.carrier";
  spec.values = {0.05, 0.1, 0.2};
  spec.metric = "error";
  const ScanResult r = convergence_scan(spec);
  o.require(std::abs(r.slope - kNonrelSlope) <= kNonrelSlopeTol,
            "error vs k0 slope " + fmt("%.4g", r.slope) + " (errors " + fmt("%.3g", r.metrics[0]) + ", " +
                fmt("%.3g", r.metrics[1]) + ", " + fmt("%.3g", r.metrics[2]) + ")");
  return o;
}

Outcome unitarity() {
  Outcome o;
  const SimConfig c = parse_config(cfg("nonrel_schrodinger.json"));
  const Grid g = c.primary_grid();
  const StaticPotential V = static_potential::GaussianWell{-0.05, 0.0, 50.0};
  const DynamicPotential Xi = dynamic_potential::StandingWave{0.01, 0.01, 0.5};
  SplitStepPropagator prop(g, V, Xi, c.constants);
  ComplexField psi = initial_field(c);
  const double n0 = l2_norm(psi);
  for (std::size_t i = 0; i < kSplitSteps; ++i) prop.step(psi, static_cast<double>(i) * c.step, c.step);
  const double drift = std::abs(l2_norm(psi) - n0) / n0;
  o.require(drift < kSplitStepNormDrift,
            "split-step norm drift " + fmt("%.3g", drift) + " over " + std::to_string(kSplitSteps) + " steps");

  const SimResult kg = run(parse_config(overridden(cfg("nonrel_kg.json"), {"duration=10"})));
  const auto e = kg.series.column("energy");
  const double edrift = std::abs(e.back() - e.front()) / e.front();
  o.require(edrift < kKgEnergyDrift, "KG energy drift " + fmt("%.3g", edrift) + " over t = 10");
  return o;
}

Outcome causality() {
  Outcome o;
  const double s = run(parse_config(cfg("light_cone_schrodinger.json"))).series.column("light_cone_mass").back();
  const double k = run(parse_config(cfg("light_cone_kg.json"))).series.column("light_cone_mass").back();
  o.require(k < kLightConeKgMax, "KG outside-cone mass " + fmt("%.3g", k));
  o.require(s >= kLightConeRatio * k, "Schroedinger outside-cone mass " + fmt("%.3g", s) + ", ratio " +
                                          fmt("%.3g", k > 0.0 ? s / k : INFINITY));
  return o;
}

Outcome p_transport() {
  Outcome o;
  // Massless pulse against Phi(0, t + z/c), checked at every snapshot.
  const SimConfig c = parse_config(cfg("p_translation.json"));
  const SimResult r = run(c, RunOptions{false, c.output_every});
  double worst = 0.0;
  for (const auto& snap : r.snapshots) {
    const double z = snap.coordinate;
    WavepacketSpec spec = c.packet;
    spec.center -= z / c.constants.c;
    ComplexField expect = make_gaussian_packet(spec, c.primary_grid());
    for (auto& v : expect.values()) v *= std::polar(1.0, c.packet.carrier * z / c.constants.c);
    worst = std::max(worst, l2_error(snap.component("plus"), expect) / l2_norm(expect));
  }
  o.require(r.snapshots.size() >= 2 && worst < kTranslationError,
            "translation error " + fmt("%.3g", worst) + " over z = " + fmt("%g", c.duration));

  const SimConfig ex = parse_config(
      overridden(cfg("forward_p_modes.json"), {"p_mode=exact_omega", "potential.V={\"kind\":\"zero\"}"}));
  const auto points = dispersion_extract(run(ex, RunOptions{false, ex.output_every}));
  double kz_err = 0.0;
  for (const auto& p : points) {
    const double w = p.wavenumber;
    const double kz = std::sqrt(w * w / (ex.constants.c * ex.constants.c) -
                                std::pow(ex.constants.m * ex.constants.c / ex.constants.hbar, 2));
    kz_err = std::max(kz_err, std::abs(p.measured - kz) / kz);
  }
  o.require(!points.empty() && kz_err < kExactKzRelError, "exact-mode kz worst relative error " + fmt("%.3g", kz_err));

  ScanSpec spec;
  spec.base = cfg("p_translation.json");
  spec.reference = cfg("p_translation_exact.json");
  spec.param = "constants.m";
  spec.values = {0.01, 0.02, 0.04};
  spec.metric = "error";
  const ScanResult s = convergence_scan(spec);
  o.require(std::abs(s.slope - kMassSlope) <= kMassSlopeTol, "literal vs exact error vs m slope " + fmt("%.4g", s.slope));
  return o;
}

Outcome validity() {
  Outcome o;
  // Zero-potential / zero-cross-component cases.
  const SimConfig base = parse_config(cfg("nonrel_schrodinger.json"));
  const ComplexField f = initial_field(base);
  const ComplexField none(f.grid());
  const double m_zero = validity_margin_m(PairStateM{f, none, 0.0}, static_potential::Zero{},
                                          dynamic_potential::Zero{}, base.constants)
                            .ratio;
  const SimConfig pc = parse_config(cfg("p_translation.json"));
  const ComplexField pf = initial_field(pc);
  const double p_zero = validity_margin_p(PairStateP{pf, pf, 0.0}, PPotentials{}, pc.constants).ratio;
  const SimResult pair_p = run(parse_config(overridden(cfg("p_translation.json"), {"solver=pair_p"})));
  double p_run = 0.0;
  for (double v : pair_p.series.column("validity_ratio")) p_run = std::max(p_run, v);
  o.require(m_zero == 0.0 && p_zero == 0.0 && p_run == 0.0, "zero cases " + fmt("%g", m_zero) + ", " +
                                                                 fmt("%g", p_zero) + ", " + fmt("%g", p_run));

  ScanSpec spec;
  spec.base = cfg("nonrel_schrodinger.json");
  spec.param = "packet.carrier";
  spec.values = {0.05, 0.1, 0.2};
  spec.metric = "validity_ratio";
  const ScanResult s = convergence_scan(spec);
  o.require(std::abs(s.slope - kValiditySlope) <= kValiditySlopeTol, "ratio vs k0 slope " + fmt("%.4g", s.slope));

  const json res = cfg("resonance.json");
  const SimConfig rc = parse_config(res);
  const double target = 2.0 * rc.constants.rest_energy() / rc.constants.hbar;
  std::vector<double> omegas;
  for (double x = 0.5; x <= 1.5 + 1e-9; x += 0.05) omegas.push_back(x * target);
  const ResonanceResult rr = resonance_scan(res, omegas);
  o.require(std::abs(rr.peak_omega - target) <= kResonanceWindow * target,
            "resonance peak at omega_xi = " + fmt("%.4g", rr.peak_omega) + " (2 m c^2 / hbar = " + fmt("%g", target) + ")");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "kgfactor_acceptance";
  fs::remove_all(root);
  json j = overridden(cfg("reformulation_pair.json"), {"snapshot_every=250"});
  const SimConfig c = parse_config(j);
  const auto files_a = write_run(root / "a", run(c), "simulate");
  const auto files_b = write_run(root / "b", run(c), "simulate");

  bool identical = files_a == files_b;
  std::size_t csv_count = 0;
  bool round_trip = true;
  for (const auto& name : files_a) {
    if (fs::path(name).extension() != ".csv") continue;
    ++csv_count;
    const std::string a = slurp(root / "a" / name);
    identical = identical && a == slurp(root / "b" / name);
    const CsvTable t = parse_csv(a);
    if (name == "series.csv") {
      check_schema(t, CsvSchema::series);
      round_trip = round_trip && series_csv(series_from_csv(t)) == a;
    } else {
      check_schema(t, CsvSchema::field);
      round_trip = round_trip && field_csv(field_from_csv(t, c.primary_grid(), std::nullopt)) == a;
    }
  }
  o.require(identical && csv_count >= 3, std::to_string(csv_count) + " run CSVs byte-identical across two runs");

  // Experiment tables: re-emit from the parsed cells.
  ScanSpec spec;
  spec.base = cfg("nonrel_schrodinger.json");
  spec.param = "packet.carrier";
  spec.values = {0.05, 0.1, 0.2};
  const ScanResult sr = convergence_scan(spec);
  const std::string scan_text = scan_csv(sr);
  CsvTable st = parse_csv(scan_text);
  check_schema(st, CsvSchema::scan);
  ScanResult back;
  for (const auto& row : st.rows) {
    back.values.push_back(row[1]);
    back.metrics.push_back(row[2]);
  }
  round_trip = round_trip && scan_csv(back) == scan_text && scan_text == scan_csv(convergence_scan(spec));

  const SimConfig kg = parse_config(cfg("kg_modes.json"));
  const auto points = dispersion_extract(run(kg, RunOptions{false, kg.output_every}));
  const std::string disp_text = dispersion_csv(points);
  const CsvTable dt = parse_csv(disp_text);
  check_schema(dt, CsvSchema::dispersion);
  std::vector<DispersionPoint> dback;
  for (const auto& row : dt.rows)
    dback.push_back({static_cast<long>(row[0]), row[1], row[2], row[3], row[4]});
  round_trip = round_trip && dispersion_csv(dback) == disp_text;

  const ResonanceResult rr = resonance_scan(overridden(cfg("resonance.json"), {"duration=5"}), {1.0, 2.0, 3.0});
  const std::string res_text = resonance_csv(rr);
  const CsvTable rt = parse_csv(res_text);
  check_schema(rt, CsvSchema::resonance);
  ResonanceResult rback;
  for (const auto& row : rt.rows) {
    rback.omegas.push_back(row[1]);
    rback.max_minus.push_back(row[2]);
    rback.growth.push_back(row[3]);
  }
  round_trip = round_trip && resonance_csv(rback) == res_text;
  o.require(round_trip, "series, field, scan, dispersion and resonance CSVs round-trip through their schemas");
  fs::remove_all(root);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exact reformulation", reformulation},   {"dispersion fidelity", dispersion},
      {"non-relativistic convergence", nonrelativistic}, {"unitarity", unitarity},
      {"causality artifact", causality},        {"p-equation free transport", p_transport},
      {"validity monitors", validity},          {"determinism and format", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double limit = kLimit[i + 1];
    if (limit > 0.0) o.require(secs < limit, "runtime " + fmt("%.2f", secs) + " s < " + fmt("%g", limit) + " s");
    std::printf("Criterion %zu (%s): %s  %s  [%.2f s]\n", i + 1, criteria[i].first, o.pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
