#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kgfactor/constants.hpp"
#include "kgfactor/field.hpp"
#include "kgfactor/potentials.hpp"
#include "kgfactor/rk4.hpp"

namespace kgfactor {

/// Klein-Gordon state reduced to first order in time: chi = (i hbar d_t - V) phi.
struct KGState {
  ComplexField phi;
  ComplexField chi;
  double t = 0.0;

  ComplexField& part(std::size_t i) { return i == 0 ? phi : chi; }
  const ComplexField& part(std::size_t i) const { return i == 0 ? phi : chi; }
};

/// Right-hand side of
///   i hbar d_t phi = V phi + chi
///   i hbar d_t chi = V chi + [m^2 c^4 (1 + 2 Xi) - hbar^2 c^2 d_x^2] phi
/// with potentials pre-sampled on the grid.
class KgOperator {
 public:
  KgOperator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi, const Constants& consts);

  void rhs(const KGState& s, double t, KGState& ds);

  /// omega_max = omega(k_nyquist) + max|V|/hbar + m c^2 max|2 Xi| / hbar.
  double max_frequency() const { return omega_max_; }
  /// Largest dt allowed by the RK4 stability rule dt <= 0.5 / omega_max.
  double stable_dt() const { return 0.5 / omega_max_; }

  const Grid& grid() const { return grid_; }
  std::span<const double> potential() const { return v_; }
  const Constants& constants() const { return consts_; }

 private:
  Grid grid_;
  DynamicPotential xi_;
  Constants consts_;
  std::vector<double> v_;
  std::vector<double> xi_cache_;
  double xi_cache_t_;
  bool xi_static_;
  std::vector<cplx> laplacian_;
  ComplexField work_;
  double omega_max_;
};

KGState kg_rhs(const KGState& s, const StaticPotential& V, const DynamicPotential& Xi, const Constants& consts);

/// RK4 stepping over KgOperator with divergence detection.
class KgStepper {
 public:
  explicit KgStepper(KgOperator op) : op_(std::move(op)) {}

  /// Advances by dt (dt = 0 is the identity); throws DivergenceError on non-finite output.
  void step(KGState& s, double dt);

  KgOperator& op() { return op_; }
  std::size_t steps_taken() const { return steps_; }

 private:
  KgOperator op_;
  Rk4<KGState> rk4_;
  std::size_t steps_ = 0;
};

KGState kg_step(const KGState& s, double dt, const StaticPotential& V, const DynamicPotential& Xi,
                const Constants& consts);

/// Pure-forward data from a packet: chi_hat(k) = hbar omega(k) phi_hat(k), potentials ignored.
KGState kg_init_forward(const ComplexField& packet, const Constants& consts);

/// sum [ |chi|^2 + m^2 c^4 |phi|^2 + hbar^2 c^2 |d_x phi|^2 ] dx, conserved for V = Xi = 0.
double kg_energy(const KGState& s, const Constants& consts);

/// Smallest radius about x0 (periodic distance) enclosing `fraction` of sum |f|^2.
double containment_radius(const ComplexField& f, double x0, double fraction = 1.0 - 1e-10);

/// Fraction of sum |f|^2 at periodic distance |x - x0| > c t + margin.
double light_cone_mass(const ComplexField& f, double x0, double t, const Constants& consts, double margin);

}  // namespace kgfactor
