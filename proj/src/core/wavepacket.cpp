#include "kgfactor/wavepacket.hpp"

#include <algorithm>
#include <cmath>

#include "kgfactor/errors.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor {

void validate_packet(const WavepacketSpec& spec, const Grid& grid) {
  if (!(std::isfinite(spec.width) && spec.width > 0.0)) throw ConfigError("packet width must be positive");
  if (spec.width >= grid.length() / 8.0) throw ConfigError("packet width must be below L/8");
  if (!std::isfinite(spec.carrier) || std::abs(spec.carrier) >= grid.nyquist() / 4.0)
    throw ConfigError("packet carrier must be below a quarter of the Nyquist frequency");
  if (!std::isfinite(spec.center)) throw ConfigError("packet center must be finite");
}

ComplexField make_gaussian_packet(const WavepacketSpec& spec, const Grid& grid) {
  validate_packet(spec, grid);
  std::vector<cplx> v(grid.size());
  const double inv4s2 = 1.0 / (4.0 * spec.width * spec.width);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.coordinate(j);
    // Nearest periodic image of the center keeps the packet smooth across the boundary.
    double d = x - spec.center;
    d -= grid.length() * std::round(d / grid.length());
    v[j] = std::exp(-d * d * inv4s2) * std::polar(1.0, spec.carrier * x);
  }
  ComplexField f(grid, std::move(v));
  double scale = 1.0;
  if (spec.amplitude == Normalization::unit_l2) {
    scale = 1.0 / l2_norm(f);
  } else {
    double peak = 0.0;
    for (const auto& s : f.values()) peak = std::max(peak, std::abs(s));
    scale = 1.0 / peak;
  }
  kernels::scale(f.values(), scale);
  return f;
}

ComplexField make_mode_superposition(const Grid& grid, const std::vector<GridMode>& modes) {
  std::vector<cplx> v(grid.size());
  for (const auto& mode : modes) {
    const double k = grid.frequency(grid.bin_of(mode.index));
    for (std::size_t j = 0; j < grid.size(); ++j) v[j] += mode.amplitude * std::polar(1.0, k * grid.coordinate(j));
  }
  return ComplexField(grid, std::move(v));
}

}  // namespace kgfactor
