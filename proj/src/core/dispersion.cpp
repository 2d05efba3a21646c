#include "kgfactor/dispersion.hpp"

#include <cmath>

namespace kgfactor {

double kg_dispersion_omega(double k, const Constants& consts) {
  const double rest = consts.m * consts.c * consts.c / consts.hbar;
  return std::sqrt(consts.c * consts.c * k * k + rest * rest);
}

double schrodinger_dispersion_E(double k, double V0, double Xi0, const Constants& consts) {
  consts.require_massive("schrodinger_dispersion_E");
  const double mc2 = consts.rest_energy();
  return mc2 + V0 + mc2 * Xi0 + consts.hbar * consts.hbar * k * k / (2.0 * consts.m);
}

}  // namespace kgfactor
