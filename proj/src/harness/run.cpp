#include "kgfactor/harness/run.hpp"

#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kgfactor/errors.hpp"
#include "kgfactor/kernels.hpp"
#include "kgfactor/wavepacket.hpp"

namespace kgfactor::harness {
namespace {

ComplexField sum_of(const ComplexField& a, const ComplexField& b) {
  ComplexField out = a;
  kernels::axpy(1.0, b.values(), out.values());
  return out;
}

ValidityReport safe_m_validity(const PairStateM& p, const SimConfig& c) {
  try {
    return validity_margin_m(p, c.V, c.Xi, c.constants, c.validity_threshold);
  } catch (const UndefinedRatioError&) {
    ValidityReport r;  // an all-zero state has no drive
    r.threshold = c.validity_threshold;
    return r;
  }
}

ValidityReport safe_p_validity(PPropagator& prop, const PairStateP& p, double threshold) {
  try {
    return prop.validity(p, threshold);
  } catch (const UndefinedRatioError&) {
    ValidityReport r;
    r.threshold = threshold;
    return r;
  }
}

// The decoupled solvers have no second component. They report the drive the
// kept component would exert on the dropped one, relative to its own kept term.
ValidityReport self_drive(ValidityReport r) {
  r.ratio = r.ratio_plus;
  r.ratio_minus = 0.0;
  r.ok = r.ratio < r.threshold;
  return r;
}

class Driver {
 public:
  virtual ~Driver() = default;
  virtual void advance(double t, double dt) = 0;
  virtual std::vector<std::string> names() const = 0;
  /// Observables at time/position t; the last entry is the validity ratio.
  virtual std::vector<double> observe(double t, ValidityReport& validity) = 0;
  virtual std::vector<std::pair<std::string, ComplexField>> components() const = 0;
};

// Light-cone bookkeeping shared by the m-solvers.
struct LightCone {
  double x0 = 0.0;
  double margin = 0.0;

  LightCone(const SimConfig& c, const ComplexField& initial) {
    x0 = c.modes.empty() ? c.packet.center : 0.0;
    margin = l2_norm(initial) > 0.0 ? containment_radius(initial, x0) : 0.5 * c.grid.length;
  }
  double operator()(const ComplexField& f, double t, const Constants& consts) const {
    return light_cone_mass(f, x0, t, consts, margin);
  }
};

class KgDriver final : public Driver {
 public:
  explicit KgDriver(const SimConfig& c)
      : c_(c),
        state_(initial_kg_state(c)),
        stepper_(KgOperator(c.primary_grid(), c.V, c.Xi, c.constants)),
        cone_(c, state_.phi) {}

  void advance(double t, double dt) override {
    stepper_.step(state_, dt);
    state_.t = t + dt;
  }
  std::vector<std::string> names() const override {
    if (c_.constants.m == 0.0) return {"norm_phi", "norm_chi", "energy", "light_cone_mass"};
    return {"norm_phi", "norm_chi", "energy", "light_cone_mass", "norm_plus", "norm_minus", "validity_ratio"};
  }
  std::vector<double> observe(double t, ValidityReport& validity) override {
    std::vector<double> row{l2_norm(state_.phi), l2_norm(state_.chi), kg_energy(state_, c_.constants),
                            cone_(state_.phi, t, c_.constants)};
    if (c_.constants.m > 0.0) {
      const PairStateM p = pair_from_kg(state_, c_.constants);
      validity = safe_m_validity(p, c_);
      row.insert(row.end(), {l2_norm(p.plus), l2_norm(p.minus), validity.ratio});
    }
    return row;
  }
  std::vector<std::pair<std::string, ComplexField>> components() const override {
    return {{"phi", state_.phi}, {"chi", state_.chi}};
  }

 private:
  SimConfig c_;
  KGState state_;
  KgStepper stepper_;
  LightCone cone_;
};

class PairMDriver final : public Driver {
 public:
  explicit PairMDriver(const SimConfig& c)
      : c_(c),
        state_(pair_from_kg(initial_kg_state(c), c.constants)),
        stepper_(PairMOperator(c.primary_grid(), c.V, c.Xi, c.constants)),
        cone_(c, sum_of(state_.plus, state_.minus)) {}

  void advance(double t, double dt) override {
    stepper_.step(state_, dt);
    state_.t = t + dt;
  }
  std::vector<std::string> names() const override {
    return {"norm_plus", "norm_minus", "norm_phi", "light_cone_mass", "validity_ratio"};
  }
  std::vector<double> observe(double t, ValidityReport& validity) override {
    const ComplexField phi = sum_of(state_.plus, state_.minus);
    validity = safe_m_validity(state_, c_);
    return {l2_norm(state_.plus), l2_norm(state_.minus), l2_norm(phi), cone_(phi, t, c_.constants), validity.ratio};
  }
  std::vector<std::pair<std::string, ComplexField>> components() const override {
    return {{"plus", state_.plus}, {"minus", state_.minus}};
  }

 private:
  SimConfig c_;
  PairStateM state_;
  PairMStepper stepper_;
  LightCone cone_;
};

class SchrodingerDriver final : public Driver {
 public:
  explicit SchrodingerDriver(const SimConfig& c)
      : c_(c),
        psi_(pair_from_kg(initial_kg_state(c), c.constants).plus),
        prop_(c.primary_grid(), c.V, c.Xi, c.constants, +1, false),
        cone_(c, psi_) {}

  void advance(double t, double dt) override {
    prop_.step(psi_, t, dt);
    ++steps_;
    if (!psi_.all_finite()) throw DivergenceError(steps_, "Schroedinger split-step");
  }
  std::vector<std::string> names() const override { return {"norm_psi", "light_cone_mass", "validity_ratio"}; }
  std::vector<double> observe(double t, ValidityReport& validity) override {
    validity = self_drive(safe_m_validity(PairStateM{psi_, psi_, t}, c_));
    return {l2_norm(psi_), cone_(psi_, t, c_.constants), validity.ratio};
  }
  std::vector<std::pair<std::string, ComplexField>> components() const override { return {{"psi", psi_}}; }

 private:
  SimConfig c_;
  ComplexField psi_;
  SplitStepPropagator prop_;
  LightCone cone_;
  std::size_t steps_ = 0;
};

class MassDriver final : public Driver {
 public:
  explicit MassDriver(const SimConfig& c)
      : c_(c),
        state_(pair_from_kg(initial_kg_state(c), c.constants)),
        forward_(c.primary_grid(), c.V, c.Xi, c.constants, +1, true),
        backward_(c.primary_grid(), c.V, c.Xi, c.constants, -1, true),
        cone_(c, sum_of(state_.plus, state_.minus)) {}

  void advance(double t, double dt) override {
    forward_.step(state_.plus, t, dt);
    backward_.step(state_.minus, t, dt);
    state_.t = t + dt;
    ++steps_;
    if (!state_.plus.all_finite() || !state_.minus.all_finite())
      throw DivergenceError(steps_, "decoupled pair with rest mass");
  }
  std::vector<std::string> names() const override {
    return {"norm_plus", "norm_minus", "norm_phi", "light_cone_mass", "validity_ratio"};
  }
  std::vector<double> observe(double t, ValidityReport& validity) override {
    const ComplexField phi = sum_of(state_.plus, state_.minus);
    validity = safe_m_validity(state_, c_);
    return {l2_norm(state_.plus), l2_norm(state_.minus), l2_norm(phi), cone_(phi, t, c_.constants), validity.ratio};
  }
  std::vector<std::pair<std::string, ComplexField>> components() const override {
    return {{"plus", state_.plus}, {"minus", state_.minus}};
  }

 private:
  SimConfig c_;
  PairStateM state_;
  SplitStepPropagator forward_;
  SplitStepPropagator backward_;
  LightCone cone_;
  std::size_t steps_ = 0;
};

class PDriver final : public Driver {
 public:
  PDriver(const SimConfig& c, bool coupled)
      : c_(c),
        coupled_(coupled),
        prop_(c.primary_grid(), c.transverse_grid(), PPotentials{c.V, c.V_time, c.Xi}, c.constants, c.p_mode),
        state_{initial_field(c), initial_field(c), 0.0} {
    state_.minus.fill(0.0);
  }

  void advance(double z, double dz) override {
    if (coupled_)
      prop_.step_pair(state_, dz);
    else
      prop_.step_forward(state_, dz);
    state_.z = z + dz;
  }
  std::vector<std::string> names() const override {
    if (coupled_) return {"norm_plus", "norm_minus", "validity_ratio"};
    return {"norm_plus", "validity_ratio"};
  }
  std::vector<double> observe(double z, ValidityReport& validity) override {
    state_.z = z;
    if (coupled_) {
      validity = safe_p_validity(prop_, state_, c_.validity_threshold);
      return {l2_norm(state_.plus), l2_norm(state_.minus), validity.ratio};
    }
    validity = self_drive(safe_p_validity(prop_, PairStateP{state_.plus, state_.plus, z}, c_.validity_threshold));
    return {l2_norm(state_.plus), validity.ratio};
  }
  std::vector<std::pair<std::string, ComplexField>> components() const override {
    if (coupled_) return {{"plus", state_.plus}, {"minus", state_.minus}};
    return {{"plus", state_.plus}};
  }

 private:
  SimConfig c_;
  bool coupled_;
  PPropagator prop_;
  PairStateP state_;
};

std::unique_ptr<Driver> make_driver(const SimConfig& c) {
  switch (c.solver) {
    case Solver::kg: return std::make_unique<KgDriver>(c);
    case Solver::pair_m: return std::make_unique<PairMDriver>(c);
    case Solver::schrodinger: return std::make_unique<SchrodingerDriver>(c);
    case Solver::m_with_mass: return std::make_unique<MassDriver>(c);
    case Solver::pair_p: return std::make_unique<PDriver>(c, true);
    case Solver::forward_p: return std::make_unique<PDriver>(c, false);
  }
  throw ConfigError("unknown solver");
}

}  // namespace

void Series::push(std::size_t step, double coord, std::vector<double> row) {
  if (row.size() != names.size()) throw std::logic_error("series row width differs from its header");
  step_index.push_back(step);
  coordinate.push_back(coord);
  rows.push_back(std::move(row));
}

std::vector<double> Series::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] != name) continue;
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[i]);
    return out;
  }
  throw std::out_of_range("no series column '" + name + "'");
}

const ComplexField& Snapshot::component(const std::string& name) const {
  for (const auto& [n, f] : components)
    if (n == name) return f;
  throw std::out_of_range("no snapshot component '" + name + "'");
}

ComplexField initial_field(const SimConfig& c) {
  const Grid grid = c.primary_grid();
  ComplexField line(grid);
  if (!c.modes.empty()) {
    std::vector<GridMode> modes;
    std::mt19937_64 rng(c.seed);
    for (const auto& m : c.modes) {
      cplx a = m.amplitude;
      if (c.random_phases) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        a *= std::polar(1.0, 2.0 * std::numbers::pi * u);
      }
      modes.push_back(GridMode{m.index, a});
    }
    line = make_mode_superposition(grid, modes);
  } else {
    line = make_gaussian_packet(c.packet, grid);
  }
  const auto transverse = c.transverse_grid();
  if (!transverse) return line;

  std::vector<cplx> profile(transverse->size(), cplx(1.0 / std::sqrt(transverse->length()), 0.0));
  if (c.transverse_packet) {
    const ComplexField p = make_gaussian_packet(*c.transverse_packet, *transverse);
    profile.assign(p.values().begin(), p.values().end());
  }
  ComplexField out(grid, *transverse);
  for (std::size_t r = 0; r < transverse->size(); ++r) {
    auto row = out.row(r);
    for (std::size_t j = 0; j < grid.size(); ++j) row[j] = profile[r] * line[j];
  }
  return out;
}

KGState initial_kg_state(const SimConfig& c) {
  if (c.is_p_solver()) throw ConfigError("the p-solvers have no Klein-Gordon initial state");
  const ComplexField field = initial_field(c);
  if (c.init == InitMode::forward_projection) return kg_init_forward(field, c.constants);
  if (c.constants.m == 0.0) throw ConfigError("init pure_plus needs m > 0");
  ComplexField zero = field;
  zero.fill(0.0);
  return kg_from_pair(PairStateM{field, zero, 0.0}, c.constants);
}

SimResult run(const SimConfig& c, const RunOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(c);
  SimResult result;
  result.config = c;
  auto driver = make_driver(c);
  result.series.names = driver->names();

  const std::size_t steps = c.step_count();
  const std::size_t snap_every = options.snapshot_every ? options.snapshot_every : c.snapshot_every;
  double worst = -1.0;

  auto record = [&](std::size_t i) {
    const double coord = static_cast<double>(i) * c.step;
    ValidityReport v;
    v.threshold = c.validity_threshold;
    result.series.push(i, coord, driver->observe(coord, v));
    if (v.ratio > worst) {
      worst = v.ratio;
      result.worst_validity = v;
    }
    if (options.enforce_validity && !v.ok)
      throw ValidityAbort("validity ratio " + std::to_string(v.ratio) + " reached threshold " +
                          std::to_string(c.validity_threshold) + " at step " + std::to_string(i));
  };
  auto snapshot = [&](std::size_t i) {
    if (snap_every == 0 || (i % snap_every != 0 && i != steps)) return;
    result.snapshots.push_back(Snapshot{i, static_cast<double>(i) * c.step, driver->components()});
  };

  record(0);
  snapshot(0);
  for (std::size_t i = 1; i <= steps; ++i) {
    driver->advance(static_cast<double>(i - 1) * c.step, c.step);
    if (i % c.output_every == 0 || i == steps) record(i);
    snapshot(i);
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ValidityAbort*>(&e)) return 4;
  if (dynamic_cast<const DivergenceError*>(&e) || dynamic_cast<const NonFiniteError*>(&e)) return 3;
  if (dynamic_cast<const Error*>(&e)) return 2;
  return 1;
}

}  // namespace kgfactor::harness
