#include "kgfactor/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "kgfactor/errors.hpp"
#include "kgfactor/factor_m.hpp"
#include "kgfactor/kg_exact.hpp"

namespace kgfactor::harness {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void fail(std::string_view where, std::string_view what) {
  throw ConfigError(std::string(where) + ": " + std::string(what));
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end())
      fail(where, "unknown key '" + item.key() + "'");
  }
}

double number(const json& obj, const char* key, std::string_view where, std::optional<double> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, std::string("missing '") + key + "'");
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) fail(where, std::string("'") + key + "' must be finite");
  return d;
}

std::size_t count(const json& obj, const char* key, std::string_view where, std::optional<std::size_t> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, std::string("missing '") + key + "'");
  }
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    fail(where, std::string("'") + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string text(const json& obj, const char* key, std::string_view where, std::optional<std::string> fallback = {}) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, std::string("missing '") + key + "'");
  }
  if (!obj.at(key).is_string()) fail(where, std::string("'") + key + "' must be a string");
  return obj.at(key).get<std::string>();
}

std::vector<double> numbers(const json& v, std::string_view where) {
  if (!v.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!x.is_number()) fail(where, "expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

Solver parse_solver(const std::string& s) {
  for (Solver v : {Solver::kg, Solver::pair_m, Solver::schrodinger, Solver::m_with_mass, Solver::pair_p,
                   Solver::forward_p})
    if (s == to_string(v)) return v;
  fail("solver", "unknown solver '" + s + "'");
}

GridSpec parse_grid(const json& j, std::string_view where) {
  check_keys(j, {"n", "length"}, where);
  return GridSpec{count(j, "n", where), number(j, "length", where)};
}

WavepacketSpec parse_packet(const json& j, std::string_view where) {
  check_keys(j, {"center", "width", "carrier", "amplitude"}, where);
  WavepacketSpec p;
  p.center = number(j, "center", where, 0.0);
  p.width = number(j, "width", where);
  p.carrier = number(j, "carrier", where, 0.0);
  const auto norm = text(j, "amplitude", where, "unit_l2");
  if (norm == "unit_l2")
    p.amplitude = Normalization::unit_l2;
  else if (norm == "unit_peak")
    p.amplitude = Normalization::unit_peak;
  else
    fail(where, "amplitude must be unit_l2 or unit_peak");
  return p;
}

json packet_json(const WavepacketSpec& p) {
  return json{{"center", p.center},
              {"width", p.width},
              {"carrier", p.carrier},
              {"amplitude", p.amplitude == Normalization::unit_l2 ? "unit_l2" : "unit_peak"}};
}

StaticPotential parse_static(const json& j) {
  constexpr std::string_view where = "potential.V";
  const auto kind = text(j, "kind", where);
  if (kind == "zero") {
    check_keys(j, {"kind"}, where);
    return static_potential::Zero{};
  }
  if (kind == "constant") {
    check_keys(j, {"kind", "value"}, where);
    return static_potential::Constant{number(j, "value", where)};
  }
  if (kind == "gaussian_well") {
    check_keys(j, {"kind", "depth", "center", "width"}, where);
    const double width = number(j, "width", where);
    if (!(width > 0.0)) fail(where, "width must be positive");
    return static_potential::GaussianWell{number(j, "depth", where), number(j, "center", where, 0.0), width};
  }
  if (kind == "harmonic") {
    check_keys(j, {"kind", "strength", "center"}, where);
    return static_potential::Harmonic{number(j, "strength", where), number(j, "center", where, 0.0)};
  }
  if (kind == "tabulated") {
    check_keys(j, {"kind", "samples"}, where);
    if (!j.contains("samples")) fail(where, "missing 'samples'");
    return static_potential::Tabulated{numbers(j.at("samples"), where)};
  }
  fail(where, "unknown kind '" + kind + "'");
}

DynamicPotential parse_dynamic(const json& j, std::string_view where) {
  const auto kind = text(j, "kind", where);
  if (kind == "zero") {
    check_keys(j, {"kind"}, where);
    return dynamic_potential::Zero{};
  }
  if (kind == "constant") {
    check_keys(j, {"kind", "value"}, where);
    return dynamic_potential::Constant{number(j, "value", where)};
  }
  if (kind == "standing_wave" || kind == "traveling_wave") {
    check_keys(j, {"kind", "amplitude", "k", "omega"}, where);
    const double a = number(j, "amplitude", where);
    const double k = number(j, "k", where, 0.0);
    const double w = number(j, "omega", where, 0.0);
    if (kind == "standing_wave") return dynamic_potential::StandingWave{a, k, w};
    return dynamic_potential::TravelingWave{a, k, w};
  }
  if (kind == "tabulated") {
    check_keys(j, {"kind", "t0", "dt", "frames"}, where);
    dynamic_potential::Tabulated tab;
    tab.t0 = number(j, "t0", where, 0.0);
    tab.dt = number(j, "dt", where);
    if (!j.contains("frames") || !j.at("frames").is_array()) fail(where, "'frames' must be an array");
    for (const auto& frame : j.at("frames")) tab.frames.push_back(numbers(frame, where));
    if (tab.frames.empty()) fail(where, "'frames' is empty");
    return tab;
  }
  fail(where, "unknown kind '" + kind + "'");
}

json static_json(const StaticPotential& V) {
  return std::visit(overloaded{
                        [](const static_potential::Zero&) { return json{{"kind", "zero"}}; },
                        [](const static_potential::Constant& p) { return json{{"kind", "constant"}, {"value", p.value}}; },
                        [](const static_potential::GaussianWell& p) {
                          return json{{"kind", "gaussian_well"}, {"depth", p.depth}, {"center", p.center}, {"width", p.width}};
                        },
                        [](const static_potential::Harmonic& p) {
                          return json{{"kind", "harmonic"}, {"strength", p.strength}, {"center", p.center}};
                        },
                        [](const static_potential::Tabulated& p) { return json{{"kind", "tabulated"}, {"samples", p.samples}}; },
                    },
                    V);
}

json dynamic_json(const DynamicPotential& Xi) {
  return std::visit(
      overloaded{
          [](const dynamic_potential::Zero&) { return json{{"kind", "zero"}}; },
          [](const dynamic_potential::Constant& p) { return json{{"kind", "constant"}, {"value", p.value}}; },
          [](const dynamic_potential::StandingWave& p) {
            return json{{"kind", "standing_wave"}, {"amplitude", p.amplitude}, {"k", p.k}, {"omega", p.omega}};
          },
          [](const dynamic_potential::TravelingWave& p) {
            return json{{"kind", "traveling_wave"}, {"amplitude", p.amplitude}, {"k", p.k}, {"omega", p.omega}};
          },
          [](const dynamic_potential::Tabulated& p) {
            return json{{"kind", "tabulated"}, {"t0", p.t0}, {"dt", p.dt}, {"frames", p.frames}};
          },
      },
      Xi);
}

}  // namespace

std::string_view to_string(Solver s) {
  switch (s) {
    case Solver::kg: return "kg";
    case Solver::pair_m: return "pair_m";
    case Solver::schrodinger: return "schrodinger";
    case Solver::m_with_mass: return "m_with_mass";
    case Solver::pair_p: return "pair_p";
    case Solver::forward_p: return "forward_p";
  }
  return "?";
}

std::string_view to_string(InitMode m) {
  return m == InitMode::forward_projection ? "forward_projection" : "pure_plus";
}

std::string_view to_string(PMode m) { return m == PMode::literal ? "literal" : "exact_omega"; }

Grid SimConfig::primary_grid() const {
  return Grid(grid.n, grid.length, is_p_solver() ? AxisKind::time : AxisKind::space);
}

std::optional<Grid> SimConfig::transverse_grid() const {
  if (!transverse) return std::nullopt;
  return Grid(transverse->n, transverse->length, AxisKind::space);
}

std::size_t SimConfig::step_count() const {
  const double ratio = duration / step;
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  if (std::abs(static_cast<double>(n) * step - duration) > 1e-9 * std::max(1.0, std::abs(duration)))
    throw ConfigError("duration " + std::to_string(duration) + " is not a whole number of steps of " +
                      std::to_string(step));
  return n;
}

SimConfig parse_config(const json& j) {
  SimConfig c;
  try {
    check_keys(j,
               {"solver", "constants", "grid", "transverse", "packet", "transverse_packet", "modes", "random_phases",
                "init", "potential", "duration", "distance", "step", "output_every", "snapshot_every",
                "validity_threshold", "p_mode", "seed"},
               "config");
    c.solver = parse_solver(text(j, "solver", "config"));
    if (j.contains("constants")) {
      const auto& k = j.at("constants");
      check_keys(k, {"hbar", "c", "m"}, "constants");
      c.constants.hbar = number(k, "hbar", "constants", 1.0);
      c.constants.c = number(k, "c", "constants", 1.0);
      c.constants.m = number(k, "m", "constants", 1.0);
    }
    if (!j.contains("grid")) fail("config", "missing 'grid'");
    c.grid = parse_grid(j.at("grid"), "grid");
    if (j.contains("transverse") && !j.at("transverse").is_null())
      c.transverse = parse_grid(j.at("transverse"), "transverse");
    if (j.contains("modes")) {
      if (!j.at("modes").is_array()) fail("modes", "expected an array");
      for (const auto& m : j.at("modes")) {
        check_keys(m, {"index", "re", "im"}, "modes[]");
        if (!m.contains("index") || !m.at("index").is_number_integer()) fail("modes[]", "'index' must be an integer");
        c.modes.push_back(ModeSpec{m.at("index").get<long>(), cplx(number(m, "re", "modes[]", 1.0),
                                                                    number(m, "im", "modes[]", 0.0))});
      }
    }
    if (j.contains("random_phases")) {
      if (!j.at("random_phases").is_boolean()) fail("random_phases", "expected a boolean");
      c.random_phases = j.at("random_phases").get<bool>();
    }
    if (j.contains("packet"))
      c.packet = parse_packet(j.at("packet"), "packet");
    else if (c.modes.empty())
      fail("config", "either 'packet' or 'modes' is required");
    if (j.contains("transverse_packet") && !j.at("transverse_packet").is_null())
      c.transverse_packet = parse_packet(j.at("transverse_packet"), "transverse_packet");
    const auto init = text(j, "init", "config", "forward_projection");
    if (init == "forward_projection")
      c.init = InitMode::forward_projection;
    else if (init == "pure_plus")
      c.init = InitMode::pure_plus;
    else
      fail("init", "must be forward_projection or pure_plus");
    if (j.contains("potential")) {
      const auto& p = j.at("potential");
      check_keys(p, {"V", "Xi", "V_time"}, "potential");
      if (p.contains("V")) c.V = parse_static(p.at("V"));
      if (p.contains("Xi")) c.Xi = parse_dynamic(p.at("Xi"), "potential.Xi");
      if (p.contains("V_time")) c.V_time = parse_dynamic(p.at("V_time"), "potential.V_time");
    }
    if (j.contains("duration") && j.contains("distance")) fail("config", "give either 'duration' or 'distance'");
    c.duration = number(j, j.contains("distance") ? "distance" : "duration", "config");
    c.step = number(j, "step", "config");
    c.output_every = count(j, "output_every", "config", 1);
    c.snapshot_every = count(j, "snapshot_every", "config", 0);
    c.validity_threshold = number(j, "validity_threshold", "config", kDefaultValidityThreshold);
    const auto mode = text(j, "p_mode", "config", "literal");
    if (mode == "literal")
      c.p_mode = PMode::literal;
    else if (mode == "exact_omega")
      c.p_mode = PMode::exact_omega;
    else
      fail("p_mode", "must be literal or exact_omega");
    c.seed = j.contains("seed") ? static_cast<std::uint64_t>(count(j, "seed", "config")) : 0;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

json to_json(const SimConfig& c) {
  json j;
  j["solver"] = to_string(c.solver);
  j["constants"] = json{{"hbar", c.constants.hbar}, {"c", c.constants.c}, {"m", c.constants.m}};
  j["grid"] = json{{"n", c.grid.n}, {"length", c.grid.length}};
  if (c.transverse) j["transverse"] = json{{"n", c.transverse->n}, {"length", c.transverse->length}};
  if (c.modes.empty()) j["packet"] = packet_json(c.packet);
  if (c.transverse_packet) j["transverse_packet"] = packet_json(*c.transverse_packet);
  if (!c.modes.empty()) {
    json modes = json::array();
    for (const auto& m : c.modes) modes.push_back(json{{"index", m.index}, {"re", m.amplitude.real()}, {"im", m.amplitude.imag()}});
    j["modes"] = modes;
    j["random_phases"] = c.random_phases;
  }
  j["init"] = to_string(c.init);
  j["potential"] = json{{"V", static_json(c.V)}, {"Xi", dynamic_json(c.Xi)}, {"V_time", dynamic_json(c.V_time)}};
  j["duration"] = c.duration;
  j["step"] = c.step;
  j["output_every"] = c.output_every;
  j["snapshot_every"] = c.snapshot_every;
  j["validity_threshold"] = c.validity_threshold;
  j["p_mode"] = to_string(c.p_mode);
  j["seed"] = c.seed;
  return j;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void set_dotted(json& j, std::string_view key, json value) {
  if (key.empty()) throw ConfigError("empty override key");
  json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part(key.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
    if (part.empty()) throw ConfigError("malformed override key '" + std::string(key) + "'");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override key '" + std::string(key) + "' descends into a non-object");
      *node = json::object();
    }
    if (dot == std::string_view::npos) {
      (*node)[part] = std::move(value);
      return;
    }
    node = &(*node)[part];
    start = dot + 1;
  }
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  const std::string raw(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(raw);
  } catch (const nlohmann::json::exception&) {
    value = raw;
  }
  set_dotted(j, assignment.substr(0, eq), std::move(value));
}

void validate(const SimConfig& c) {
  try {
    c.constants.validate();
    const Grid grid = c.primary_grid();
    const auto transverse = c.transverse_grid();
    if (!c.is_p_solver() && c.solver != Solver::kg) c.constants.require_massive(to_string(c.solver).data());
    if (c.transverse && !c.is_p_solver()) fail("transverse", "only the p-solvers take a transverse axis");
    if (c.transverse_packet && !c.transverse) fail("transverse_packet", "needs a transverse axis");
    if (!(c.step > 0.0)) fail("step", "must be positive");
    if (c.duration < 0.0) fail("duration", "must be non-negative");
    if (c.output_every == 0) fail("output_every", "must be at least 1");
    if (!(c.validity_threshold > 0.0)) fail("validity_threshold", "must be positive");
    c.step_count();

    if (c.modes.empty()) {
      validate_packet(c.packet, grid);
    } else {
      const long half = static_cast<long>(grid.size() / 2);
      for (const auto& m : c.modes)
        if (m.index < -half || m.index >= half) fail("modes[]", "index " + std::to_string(m.index) + " outside the grid");
    }
    if (c.transverse_packet) validate_packet(*c.transverse_packet, *transverse);
    if (!c.is_p_solver() && !is_zero(c.V_time)) fail("potential.V_time", "only the p-solvers take V_time");

    if (c.solver == Solver::kg || c.solver == Solver::pair_m) {
      const double limit = c.solver == Solver::kg ? KgOperator(grid, c.V, c.Xi, c.constants).stable_dt()
                                                  : PairMOperator(grid, c.V, c.Xi, c.constants).stable_dt();
      if (c.step > limit * (1.0 + 1e-12))
        fail("step", "dt = " + std::to_string(c.step) + " exceeds the RK4 stability bound " + std::to_string(limit));
    } else if (c.solver == Solver::schrodinger || c.solver == Solver::m_with_mass) {
      eval_static(c.V, grid);
    } else {
      PPropagator prop(grid, transverse, PPotentials{c.V, c.V_time, c.Xi}, c.constants, c.p_mode);
      if (c.step > prop.stable_dz() * (1.0 + 1e-12))
        fail("step", "dz = " + std::to_string(c.step) + " exceeds the coupling stability bound " +
                         std::to_string(prop.stable_dz()));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace kgfactor::harness
