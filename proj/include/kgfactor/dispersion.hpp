#pragma once

#include "kgfactor/constants.hpp"

namespace kgfactor {

/// Positive-branch Klein-Gordon frequency sqrt(c^2 k^2 + m^2 c^4 / hbar^2).
double kg_dispersion_omega(double k, const Constants& consts);

/// Mass-dominated energy m c^2 + V0 + m c^2 Xi0 + hbar^2 k^2 / 2m. Requires m > 0.
double schrodinger_dispersion_E(double k, double V0, double Xi0, const Constants& consts);

}  // namespace kgfactor
