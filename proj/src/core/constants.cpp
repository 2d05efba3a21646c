#include "kgfactor/constants.hpp"

#include <cmath>
#include <string>

#include "kgfactor/errors.hpp"

namespace kgfactor {

void Constants::validate() const {
  if (!(std::isfinite(hbar) && hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (!(std::isfinite(c) && c > 0.0)) throw ConfigError("c must be positive");
  if (!(std::isfinite(m) && m >= 0.0)) throw ConfigError("m must be non-negative");
}

void Constants::require_massive(const char* what) const {
  validate();
  if (m <= 0.0) throw ConfigError(std::string(what) + " requires m > 0");
}

}  // namespace kgfactor
