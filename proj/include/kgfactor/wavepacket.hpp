#pragma once

#include <vector>

#include "kgfactor/field.hpp"

namespace kgfactor {

enum class Normalization { unit_l2, unit_peak };

/// Gaussian envelope exp(-(x - center)^2 / 4 width^2) times exp(i carrier x).
/// On a time axis x is t and the carrier is the frequency of exp(+i w t).
struct WavepacketSpec {
  double center = 0.0;
  double width = 1.0;
  double carrier = 0.0;
  Normalization amplitude = Normalization::unit_l2;
};

/// Throws ConfigError if width <= 0, width >= L/8 or |carrier| >= nyquist/4.
void validate_packet(const WavepacketSpec& spec, const Grid& grid);

ComplexField make_gaussian_packet(const WavepacketSpec& spec, const Grid& grid);

/// One plane-wave mode exp(i k_bin x) of given amplitude.
struct GridMode {
  long index = 0;  ///< signed DFT index
  cplx amplitude{1.0, 0.0};
};

/// Sum of exact grid modes; throws ConfigError on an index outside [-n/2, n/2).
ComplexField make_mode_superposition(const Grid& grid, const std::vector<GridMode>& modes);

}  // namespace kgfactor
