#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgfactor/constants.hpp"
#include "kgfactor/factor_p.hpp"
#include "kgfactor/potentials.hpp"
#include "kgfactor/wavepacket.hpp"

namespace kgfactor::harness {

using json = nlohmann::ordered_json;

enum class Solver { kg, pair_m, schrodinger, m_with_mass, pair_p, forward_p };

/// How the first-order KG data (and from it every m-solver's state) is built.
enum class InitMode {
  forward_projection,  ///< chi_hat = hbar omega(k) phi_hat, free positive-frequency data
  pure_plus,           ///< chi = m c^2 phi, i.e. Phi- = 0 exactly; local in x
};

struct GridSpec {
  std::size_t n = 0;
  double length = 0.0;
};

struct ModeSpec {
  long index = 0;
  cplx amplitude{1.0, 0.0};
};

struct SimConfig {
  Solver solver = Solver::kg;
  Constants constants;
  GridSpec grid;
  std::optional<GridSpec> transverse;                 // p-solvers only
  WavepacketSpec packet;                              // along the primary axis
  std::optional<WavepacketSpec> transverse_packet;    // profile across the transverse axis
  std::vector<ModeSpec> modes;                        // replaces the packet when non-empty
  bool random_phases = false;                         // draw mode phases from `seed`
  InitMode init = InitMode::forward_projection;
  StaticPotential V = static_potential::Zero{};
  DynamicPotential Xi = dynamic_potential::Zero{};
  DynamicPotential V_time = dynamic_potential::Zero{};  // p-solvers: V(z, t) on top of V
  double duration = 0.0;                              // t for m-solvers, z for p-solvers
  double step = 0.0;
  std::size_t output_every = 1;
  std::size_t snapshot_every = 0;                     // 0 disables field snapshots
  double validity_threshold = kDefaultValidityThreshold;
  PMode p_mode = PMode::literal;
  std::uint64_t seed = 0;

  bool is_p_solver() const { return solver == Solver::pair_p || solver == Solver::forward_p; }
  Grid primary_grid() const;
  std::optional<Grid> transverse_grid() const;
  std::size_t step_count() const;
};

std::string_view to_string(Solver s);
std::string_view to_string(InitMode m);
std::string_view to_string(PMode m);

/// Parse and validate. Throws ConfigError with the offending key.
SimConfig parse_config(const json& j);
/// Canonical JSON form; parse_config(to_json(c)) reproduces c.
json to_json(const SimConfig& c);

json load_json_file(const std::string& path);
/// Apply "dotted.key=value" to j; value is parsed as JSON, falling back to a string.
void apply_override(json& j, std::string_view assignment);
/// Set a dotted key to a value, creating intermediate objects.
void set_dotted(json& j, std::string_view key, json value);

/// Checks the packet-fit rule, the explicit-stepper stability bound and
/// solver/axis compatibility. Called by parse_config.
void validate(const SimConfig& c);

}  // namespace kgfactor::harness
