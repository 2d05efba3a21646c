#pragma once

namespace kgfactor {

/// Cross-coupling drive relative to the kept diagonal terms, per direction.
/// A direction whose kept term vanishes is not counted (its ratio is reported as 0).
struct ValidityReport {
  double ratio = 0.0;  ///< worse of the two directions
  double ratio_plus = 0.0;
  double ratio_minus = 0.0;
  double threshold = 0.1;
  bool ok = true;
};

inline constexpr double kDefaultValidityThreshold = 0.1;

}  // namespace kgfactor
