#pragma once

#include <cstddef>
#include <vector>

namespace kgfactor {

enum class AxisKind { space, time };

/// Uniform periodic 1-D grid of n samples over [-L/2, L/2).
///
/// Conjugate frequencies follow the DFT index order: bin j carries the mode
/// exp(+i 2 pi s_j x / L) with s_j the signed index (j < n/2 ? j : j - n).
/// On space axes this is the wavenumber k of exp(ikx); on time axes it is the
/// frequency w of exp(+iwt).
class Grid {
 public:
  Grid(std::size_t n, double length, AxisKind kind = AxisKind::space);

  std::size_t size() const { return n_; }
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(n_); }
  AxisKind axis_kind() const { return kind_; }

  double coordinate(std::size_t j) const;
  /// Conjugate angular frequency of DFT bin j.
  double frequency(std::size_t j) const;
  double nyquist() const;
  /// Signed DFT index of bin j.
  long signed_index(std::size_t j) const;
  /// DFT bin for a signed index in [-n/2, n/2).
  std::size_t bin_of(long signed_index) const;

  std::vector<double> coordinates() const;
  std::vector<double> frequencies() const;

  bool operator==(const Grid& other) const = default;

 private:
  std::size_t n_;
  double length_;
  AxisKind kind_;
};

}  // namespace kgfactor
