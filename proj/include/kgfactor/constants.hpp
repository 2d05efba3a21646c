#pragma once

namespace kgfactor {

/// Physical constants; natural units by default.
struct Constants {
  double hbar = 1.0;
  double c = 1.0;
  double m = 1.0;

  double rest_energy() const { return m * c * c; }

  /// Throws ConfigError unless hbar > 0, c > 0, m >= 0 (all finite).
  void validate() const;
  /// As validate(), additionally requiring m > 0.
  void require_massive(const char* what) const;
};

}  // namespace kgfactor
