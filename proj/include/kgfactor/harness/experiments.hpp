#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "kgfactor/harness/config.hpp"
#include "kgfactor/harness/run.hpp"

namespace kgfactor::harness {

enum class Alignment {
  none,
  remove_rest_mass,        ///< forward component times exp(+i m c^2 t / hbar)
  remove_rest_mass_and_V,  ///< additionally times exp(+i V0 t / hbar) for constant V0
};

Alignment parse_alignment(const std::string& s);
std::string_view to_string(Alignment a);

struct ErrorReport {
  Series series;  ///< l2_error, relative_error, norm_a, norm_b
  double final_error = 0.0;
  double final_relative = 0.0;
};

/// Field of a snapshot used for comparisons, after alignment at coordinate t.
ComplexField aligned_field(const Snapshot& snap, const SimConfig& c, Alignment alignment);

/// Run a and b (b is the reference) and record the L2 distance of their
/// aligned fields at every output sample. Both must share grid, initial
/// packet and output coordinates.
ErrorReport compare(const SimConfig& a, const SimConfig& b, Alignment alignment);

struct ScanSpec {
  json base;
  std::optional<json> reference;  ///< when set, the metric is the compare error against it
  Alignment alignment = Alignment::none;
  std::string param;              ///< dotted config key, applied to base and reference
  std::vector<double> values;
  /// "error" / "relative_error" with a reference, otherwise a series column
  /// whose final value is recorded (default validity_ratio).
  std::string metric;
};

struct ScanResult {
  std::string param;
  std::string metric;
  std::vector<double> values;
  std::vector<double> metrics;
  double slope = 0.0;  ///< least-squares d log(metric) / d log(value); NaN if undefined
};

/// Least-squares slope of log|y| against log|x| over points with x != 0, y > 0.
/// NaN when fewer than two such points remain.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Runs every scan point (in parallel) and fits the log-log slope.
/// Throws ConfigError for fewer than 3 points or all-identical values.
ScanResult convergence_scan(const ScanSpec& spec);

struct DispersionPoint {
  long index = 0;           ///< signed DFT index
  double wavenumber = 0.0;  ///< k (m-solvers) or w (p-solvers)
  double measured = 0.0;    ///< omega = -d(phase)/dt, or kz = +d(phase)/dz
  double predicted = 0.0;   ///< closed form for constant potentials, NaN otherwise
  double relative_error = 0.0;
};

/// Per-mode phase rates from the snapshots of a run (needs >= 4 snapshots).
std::vector<DispersionPoint> dispersion_extract(const SimResult& result);

struct ResonanceResult {
  std::vector<double> omegas;
  std::vector<double> max_minus;  ///< max over the run of ||Phi-||
  std::vector<double> growth;     ///< max ||Phi-|| minus its initial value
  double peak_omega = 0.0;
};

/// Scans the frequency of a standing or traveling Xi under the coupled m-pair.
ResonanceResult resonance_scan(const json& base, const std::vector<double>& omegas);

/// Thread count for scans: OpenMP maximum, capped by KGFACTOR_THREADS if set.
int scan_threads();

}  // namespace kgfactor::harness
