#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <utility>
#include <vector>

#include "kgfactor/field.hpp"
#include "kgfactor/factor_m.hpp"
#include "kgfactor/factor_p.hpp"
#include "kgfactor/harness/config.hpp"
#include "kgfactor/kg_exact.hpp"

namespace kgfactor::harness {

/// A sampled time (or z) series: one row per recorded step.
struct Series {
  std::vector<std::string> names;  ///< value columns after step_index and t_or_z
  std::vector<std::size_t> step_index;
  std::vector<double> coordinate;
  std::vector<std::vector<double>> rows;

  void push(std::size_t step, double coord, std::vector<double> row);
  std::size_t size() const { return step_index.size(); }
  /// Column by name; throws std::out_of_range if absent.
  std::vector<double> column(const std::string& name) const;
};

/// Named field components at one recorded step.
struct Snapshot {
  std::size_t step = 0;
  double coordinate = 0.0;
  std::vector<std::pair<std::string, ComplexField>> components;

  const ComplexField& component(const std::string& name) const;
};

struct SimResult {
  SimConfig config;
  Series series;
  std::vector<Snapshot> snapshots;
  ValidityReport worst_validity;  ///< largest ratio seen
  double wall_time = 0.0;         ///< seconds; reported in metadata only
};

struct RunOptions {
  bool enforce_validity = false;
  /// Overrides config.snapshot_every when non-zero.
  std::size_t snapshot_every = 0;
};

/// Initial KG data for a config on a space grid.
KGState initial_kg_state(const SimConfig& c);
/// Initial primary-axis field (packet or mode superposition) for any solver.
ComplexField initial_field(const SimConfig& c);

/// Run one simulation. Deterministic for a fixed config.
/// Throws ConfigError, DivergenceError, EvanescentContentError, or
/// ValidityAbort when options.enforce_validity is set and a ratio breaches.
SimResult run(const SimConfig& c, const RunOptions& options = {});

/// CLI exit code for an error: 2 configuration, 3 divergence, 4 validity abort, 1 otherwise.
int exit_code_for(const std::exception& e);

}  // namespace kgfactor::harness
