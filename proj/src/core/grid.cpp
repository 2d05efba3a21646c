#include "kgfactor/grid.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "kgfactor/errors.hpp"

namespace kgfactor {

Grid::Grid(std::size_t n, double length, AxisKind kind) : n_(n), length_(length), kind_(kind) {
  if (n < 8 || !std::has_single_bit(n))
    throw ConfigError("grid size must be a power of two >= 8, got " + std::to_string(n));
  if (!(std::isfinite(length) && length > 0.0)) throw ConfigError("grid length must be positive");
}

double Grid::coordinate(std::size_t j) const { return -0.5 * length_ + static_cast<double>(j) * spacing(); }

long Grid::signed_index(std::size_t j) const {
  const auto half = static_cast<long>(n_ / 2);
  const auto s = static_cast<long>(j);
  return s < half ? s : s - static_cast<long>(n_);
}

std::size_t Grid::bin_of(long signed_index) const {
  const auto n = static_cast<long>(n_);
  if (signed_index < -n / 2 || signed_index >= n / 2)
    throw ConfigError("mode index " + std::to_string(signed_index) + " outside [-n/2, n/2)");
  return static_cast<std::size_t>(signed_index < 0 ? signed_index + n : signed_index);
}

double Grid::frequency(std::size_t j) const {
  return 2.0 * std::numbers::pi * static_cast<double>(signed_index(j)) / length_;
}

double Grid::nyquist() const { return std::numbers::pi / spacing(); }

std::vector<double> Grid::coordinates() const {
  std::vector<double> x(n_);
  for (std::size_t j = 0; j < n_; ++j) x[j] = coordinate(j);
  return x;
}

std::vector<double> Grid::frequencies() const {
  std::vector<double> k(n_);
  for (std::size_t j = 0; j < n_; ++j) k[j] = frequency(j);
  return k;
}

}  // namespace kgfactor
