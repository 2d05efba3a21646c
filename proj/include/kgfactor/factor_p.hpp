#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kgfactor/constants.hpp"
#include "kgfactor/field.hpp"
#include "kgfactor/potentials.hpp"
#include "kgfactor/validity.hpp"

namespace kgfactor {

// Spatial (z-marched) factorization. Fields live on a time grid, optionally
// extended by one transverse spatial axis, and are advanced in z.
//
// Frequencies on the time axis follow Grid: bin w carries exp(+i w t), so
// d_t <-> +i w and the leading term +(1/c) d_t of Phi+ gives kz = +w/c.

/// How the leading (diagonal) term of the p-equation is treated.
enum class PMode {
  literal,      ///< +-(1/c) d_t, the equation as written (Ebar -> hbar w)
  exact_omega,  ///< +-sgn(w) Ebar(w) / hbar c, exact free propagation
};

inline constexpr double kEvanescentGuard = 1e-6;
inline constexpr double kMaskedEnergyTolerance = 1e-10;

struct PairStateP {
  ComplexField plus;
  ComplexField minus;
  double z = 0.0;

  ComplexField& part(std::size_t i) { return i == 0 ? plus : minus; }
  const ComplexField& part(std::size_t i) const { return i == 0 ? plus : minus; }
};

/// Ebar = sqrt(hbar^2 w^2 - m^2 c^4), or nullopt when |hbar w| <= m c^2 (1 + eps).
std::optional<double> ebar(double omega, const Constants& consts, double eps = kEvanescentGuard);

/// K(w) = (w / c) [1 + V / Ebar(w)], nullopt on a masked bin.
std::optional<double> reference_wavevector(double omega, double V, const Constants& consts,
                                           double eps = kEvanescentGuard);

/// Per-bin Ebar on a time grid, with evanescent bins masked out.
struct EbarSpectrum {
  std::vector<double> ebar;     ///< 0 on masked bins
  std::vector<double> inverse;  ///< 1/Ebar, 0 on masked bins
  std::vector<bool> masked;

  static EbarSpectrum build(const Grid& time_grid, const Constants& consts, double eps = kEvanescentGuard);
  /// Fraction of the field's spectral energy lying in masked bins.
  double masked_fraction(const ComplexField& f) const;
};

/// Potentials seen by the z-march, all evaluated at the current z:
///   V(x_T, z, t) = V profile + V_time(z, t)   (energy)
///   Xi(z, t)                                  (dimensionless)
/// The static profile is taken across the transverse axis when there is one,
/// otherwise along z.
struct PPotentials {
  StaticPotential V = static_potential::Zero{};
  DynamicPotential V_time = dynamic_potential::Zero{};
  DynamicPotential Xi = dynamic_potential::Zero{};
};

class PPropagator {
 public:
  PPropagator(const Grid& time_grid, std::optional<Grid> transverse, PPotentials potentials,
              const Constants& consts, PMode mode, double eps = kEvanescentGuard);

  /// W f = hbar^2 c^2 d_T^2 f + V^2 f - i hbar d_t(V f) - i hbar V d_t f - 2 m^2 c^4 Xi f.
  ComplexField apply_W(const ComplexField& f, double z);
  /// Coupling drive (i / 2 hbar c) Ebar^-1 [W f], Ebar^-1 applied last in the w domain.
  ComplexField coupling(const ComplexField& f, double z);
  /// Leading diagonal term applied to f (+ direction).
  ComplexField leading(const ComplexField& f) const;

  /// Full z-derivative of the coupled pair.
  PairStateP pair_rhs(const PairStateP& p);
  /// z-derivative of Phi+ for the decoupled forward equation (Phi- ignored).
  ComplexField forward_rhs(const PairStateP& p);

  /// One integrating-factor RK4 step of the coupled pair / the forward equation.
  void step_pair(PairStateP& p, double dz);
  void step_forward(PairStateP& p, double dz);

  /// Exact diagonal propagation only: Phi+- *= exp(+-i kappa(w) dz).
  void free_march(PairStateP& p, double dz) const;

  ValidityReport validity(const PairStateP& p, double threshold = kDefaultValidityThreshold);

  /// Throws EvanescentContentError when masked bins hold >= 1e-10 of the energy.
  void check_evanescent(const PairStateP& p) const;

  /// Largest dz keeping |coupling| dz <= 0.5, from the potentials at z = 0.
  double stable_dz() const { return stable_dz_; }

  const EbarSpectrum& spectrum() const { return spectrum_; }
  /// Diagonal propagation constant kappa(w) of the + direction.
  const std::vector<double>& kappa() const { return kappa_; }
  PMode mode() const { return mode_; }

 private:
  void load_potentials(double z);
  void diagonal_phase(ComplexField& f, double sign, double dz) const;
  void coupling_into(const ComplexField& f, double z, ComplexField& out);

  Grid time_;
  std::optional<Grid> transverse_;
  PPotentials pot_;
  Constants consts_;
  PMode mode_;
  EbarSpectrum spectrum_;
  std::vector<double> kappa_;
  std::vector<cplx> dt_mult_;
  std::vector<cplx> transverse_mult_;
  std::vector<double> static_profile_;  // per row (transverse) or empty
  std::vector<double> v_;               // field-shaped
  std::vector<double> xi_;              // field-shaped
  double loaded_z_;
  bool loaded_ = false;
  double stable_dz_;
  std::size_t steps_ = 0;
};

ComplexField apply_W(const ComplexField& f, const PPotentials& pot, const Constants& consts, double z);
PairStateP p_pair_rhs(const PairStateP& p, const PPotentials& pot, const Constants& consts,
                      PMode mode = PMode::literal);
ComplexField p_forward_rhs(const PairStateP& p, const PPotentials& pot, const Constants& consts,
                           PMode mode = PMode::literal);
/// Free exact march: Phi+-_hat(w) *= exp(+-i sgn(w) Ebar(w) dz / hbar c).
PairStateP p_exact_free_march(const PairStateP& p, double dz, const Constants& consts);
ValidityReport validity_margin_p(const PairStateP& p, const PPotentials& pot, const Constants& consts,
                                 double threshold = kDefaultValidityThreshold);

}  // namespace kgfactor
