// kgfactor command line: simulate / compare / scan / dispersion / resonance.
//
// Exit codes: 0 ok, 2 configuration error, 3 solver divergence,
// 4 validity threshold breached under --enforce-validity.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kgfactor/errors.hpp"
#include "kgfactor/harness/config.hpp"
#include "kgfactor/harness/experiments.hpp"
#include "kgfactor/harness/io.hpp"
#include "kgfactor/harness/run.hpp"

namespace fs = std::filesystem;
using namespace kgfactor;
using namespace kgfactor::harness;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kDivergence = 3, kValidity = 4 };

struct Common {
  std::string config;
  std::string out = "out";
  std::vector<std::string> overrides;
  bool enforce_validity = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory");
  cmd->add_option("--override", c.overrides, "dotted.key=value (value parsed as JSON), repeatable");
  cmd->add_flag("--enforce-validity", c.enforce_validity, "exit with code 4 when a validity ratio breaches");
}

json load(const std::string& path, const std::vector<std::string>& overrides) {
  json j = load_json_file(path);
  for (const auto& o : overrides) apply_override(j, o);
  return j;
}

void finish(const fs::path& dir, const json& echo, const std::string& command, double wall,
            std::vector<std::string> files) {
  json meta = metadata(echo, command, wall);
  meta["files"] = files;
  write_text(dir / "metadata.json", meta.dump(2) + "\n");
}

int cmd_simulate(const Common& c) {
  const SimConfig cfg = parse_config(load(c.config, c.overrides));
  const SimResult r = run(cfg, RunOptions{c.enforce_validity, 0});
  const auto files = write_run(c.out, r, "simulate");
  std::printf("simulate: %zu samples, worst validity ratio %.6g, %zu files in %s\n", r.series.size(),
              r.worst_validity.ratio, files.size(), c.out.c_str());
  return kOk;
}

int cmd_compare(const Common& c, const std::string& reference, const std::string& alignment) {
  const SimConfig a = parse_config(load(c.config, c.overrides));
  const SimConfig b = parse_config(load(reference, c.overrides));
  const auto t0 = std::chrono::steady_clock::now();
  const ErrorReport rep = compare(a, b, parse_alignment(alignment));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(c.out);
  write_text(fs::path(c.out) / "compare.csv", series_csv(rep.series));
  json echo{{"config", to_json(a)}, {"reference", to_json(b)}, {"alignment", to_string(parse_alignment(alignment))}};
  finish(c.out, echo, "compare", wall, {"compare.csv"});
  std::printf("compare: final l2 error %.17g, relative %.17g\n", rep.final_error, rep.final_relative);
  return kOk;
}

int cmd_scan(const Common& c, const std::string& param, const std::vector<double>& values,
             const std::string& reference, const std::string& alignment, const std::string& metric) {
  ScanSpec spec;
  spec.base = load(c.config, c.overrides);
  if (!reference.empty()) spec.reference = load(reference, c.overrides);
  spec.alignment = parse_alignment(alignment);
  spec.param = param;
  spec.values = values;
  spec.metric = metric;
  const auto t0 = std::chrono::steady_clock::now();
  const ScanResult r = convergence_scan(spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(c.out);
  write_text(fs::path(c.out) / "scan.csv", scan_csv(r));
  json echo{{"config", spec.base}, {"param", param}, {"values", values}, {"metric", r.metric},
            {"alignment", to_string(spec.alignment)}, {"slope", r.slope}};
  if (spec.reference) echo["reference"] = *spec.reference;
  finish(c.out, echo, "scan", wall, {"scan.csv"});
  std::printf("scan: %s vs %s, log-log slope %.6g\n", r.metric.c_str(), param.c_str(), r.slope);
  return kOk;
}

int cmd_dispersion(const Common& c) {
  const SimConfig cfg = parse_config(load(c.config, c.overrides));
  const SimResult r = run(cfg, RunOptions{c.enforce_validity, cfg.output_every});
  const auto points = dispersion_extract(r);
  fs::create_directories(c.out);
  write_text(fs::path(c.out) / "dispersion.csv", dispersion_csv(points));
  write_text(fs::path(c.out) / "series.csv", series_csv(r.series));
  finish(c.out, to_json(cfg), "dispersion", r.wall_time, {"dispersion.csv", "series.csv"});
  double worst = 0.0;
  for (const auto& p : points) worst = std::max(worst, p.relative_error);
  std::printf("dispersion: %zu modes, worst relative error %.6g\n", points.size(), worst);
  return kOk;
}

int cmd_resonance(const Common& c, const std::vector<double>& omegas) {
  const json base = load(c.config, c.overrides);
  const auto t0 = std::chrono::steady_clock::now();
  const ResonanceResult r = resonance_scan(base, omegas);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  fs::create_directories(c.out);
  write_text(fs::path(c.out) / "resonance.csv", resonance_csv(r));
  finish(c.out, json{{"config", base}, {"omegas", omegas}, {"peak_omega", r.peak_omega}}, "resonance", wall,
         {"resonance.csv"});
  std::printf("resonance: peak growth at omega_xi = %.6g\n", r.peak_omega);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Klein-Gordon factorization experiments"};
  app.require_subcommand(1);

  Common common;
  auto* simulate = app.add_subcommand("simulate", "run one configuration");
  add_common(simulate, common);

  std::string reference, alignment = "none";
  auto* cmp = app.add_subcommand("compare", "L2 distance between two runs");
  add_common(cmp, common);
  cmp->add_option("--reference", reference, "reference configuration")->required()->check(CLI::ExistingFile);
  cmp->add_option("--alignment", alignment, "none | remove_rest_mass | remove_rest_mass_and_V");

  std::string param, metric, scan_reference, scan_alignment = "none";
  std::vector<double> values;
  auto* scan = app.add_subcommand("scan", "sweep one parameter and fit a log-log slope");
  add_common(scan, common);
  scan->add_option("--param", param, "dotted config key to sweep")->required();
  scan->add_option("--values", values, "comma separated values")->required()->delimiter(',');
  scan->add_option("--reference", scan_reference, "reference configuration; metric becomes the compare error")
      ->check(CLI::ExistingFile);
  scan->add_option("--alignment", scan_alignment, "alignment for the compare error");
  scan->add_option("--metric", metric, "error | relative_error, or a series column");

  auto* disp = app.add_subcommand("dispersion", "per-mode phase rates of a run");
  add_common(disp, common);

  std::vector<double> omegas;
  auto* res = app.add_subcommand("resonance", "scan the Xi frequency under the coupled m-pair");
  add_common(res, common);
  res->add_option("--values", omegas, "comma separated omega_xi values")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) return cmd_simulate(common);
    if (*cmp) return cmd_compare(common, reference, alignment);
    if (*scan) return cmd_scan(common, param, values, scan_reference, scan_alignment, metric);
    if (*disp) return cmd_dispersion(common);
    if (*res) return cmd_resonance(common, omegas);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    const char* kind = code == kValidity ? "validity" : code == kDivergence ? "divergence" : code == kConfig ? "config" : "error";
    std::fprintf(stderr, "%s: %s\n", kind, e.what());
    return code;
  }
  return kFailure;
}
