#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kgfactor/constants.hpp"
#include "kgfactor/field.hpp"
#include "kgfactor/kg_exact.hpp"
#include "kgfactor/potentials.hpp"
#include "kgfactor/rk4.hpp"
#include "kgfactor/validity.hpp"

namespace kgfactor {

/// Temporal forward/backward split, Phi = Phi+ + Phi-.
struct PairStateM {
  ComplexField plus;
  ComplexField minus;
  double t = 0.0;

  ComplexField& part(std::size_t i) { return i == 0 ? plus : minus; }
  const ComplexField& part(std::size_t i) const { return i == 0 ? plus : minus; }
};

/// Phi+- = (phi +- chi / m c^2) / 2. Requires m > 0.
PairStateM pair_from_kg(const KGState& s, const Constants& consts);
/// phi = Phi+ + Phi-, chi = m c^2 (Phi+ - Phi-).
KGState kg_from_pair(const PairStateM& p, const Constants& consts);

/// Exact coupled pair
///   i hbar d_t Phi+- = +-m c^2 Phi+- + V Phi+- +- (m c^2 Xi - hbar^2 d_x^2 / 2m)(Phi+ + Phi-)
class PairMOperator {
 public:
  PairMOperator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi, const Constants& consts);

  void rhs(const PairStateM& p, double t, PairStateM& dp);
  double stable_dt() const { return 0.5 / omega_max_; }

 private:
  Grid grid_;
  DynamicPotential xi_;
  Constants consts_;
  std::vector<double> v_;
  std::vector<double> xi_now_;
  std::vector<cplx> kinetic_;  // hbar^2 k^2 / 2m
  ComplexField sum_;
  double omega_max_;
};

PairStateM pair_rhs_m(const PairStateM& p, const StaticPotential& V, const DynamicPotential& Xi,
                      const Constants& consts);

class PairMStepper {
 public:
  explicit PairMStepper(PairMOperator op) : op_(std::move(op)) {}
  void step(PairStateM& p, double dt);
  PairMOperator& op() { return op_; }

 private:
  PairMOperator op_;
  Rk4<PairStateM> rk4_;
  std::size_t steps_ = 0;
};

/// Smallness criterion, per direction s:
///   || (Xi - hbar^2 d_x^2 / 2 m^2 c^2) Phi_{-s} || / || (1 + s V / m c^2) Phi_s ||
/// Throws UndefinedRatioError when both components vanish.
ValidityReport validity_margin_m(const PairStateM& p, const StaticPotential& V, const DynamicPotential& Xi,
                                 const Constants& consts, double threshold = kDefaultValidityThreshold);

/// psi+- = Phi+- exp(+-i m c^2 t / hbar), using p.t.
PairStateM remove_rest_mass_phase(const PairStateM& p, const Constants& consts);
/// Inverse of remove_rest_mass_phase.
PairStateM restore_rest_mass_phase(const PairStateM& p, const Constants& consts);
/// Multiply f by exp(i * sign * m c^2 t / hbar).
void rotate_rest_mass(ComplexField& f, double sign, double t, const Constants& consts);

/// Strang split-step for one decoupled direction:
///   i hbar d_t f = s [ (m c^2 if with_rest_mass) + m c^2 Xi ] f + V f - s (hbar^2 / 2m) d_x^2 f
/// with s = +1 (forward) or -1 (backward). Xi is sampled at the step midpoint.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, const StaticPotential& V, const DynamicPotential& Xi,
                      const Constants& consts, int direction = +1, bool with_rest_mass = false);

  void step(ComplexField& f, double t, double dt);

 private:
  void potential_phase(ComplexField& f, double t_mid, double half_dt);

  Grid grid_;
  DynamicPotential xi_;
  Constants consts_;
  int direction_;
  bool rest_mass_;
  std::vector<double> v_;
  std::vector<double> angle_;
  std::vector<double> k2_;
  std::vector<cplx> kinetic_;
  double kinetic_dt_ = -1.0;
};

/// One Strang step of the Schroedinger m-equation (rest mass removed).
ComplexField schrodinger_step(const ComplexField& psi, double t, double dt, const StaticPotential& V,
                              const DynamicPotential& Xi, const Constants& consts);

/// One step of the decoupled pair with rest mass retained; Phi- is advanced by its own equation.
PairStateM m_equation_with_mass_step(const PairStateM& p, double dt, const StaticPotential& V,
                                     const DynamicPotential& Xi, const Constants& consts);

}  // namespace kgfactor
