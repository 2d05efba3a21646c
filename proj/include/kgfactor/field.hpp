#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "kgfactor/grid.hpp"

namespace kgfactor {

using cplx = std::complex<double>;

/// Complex samples on a primary grid, optionally extended by one transverse
/// axis. Storage is row-major with the primary axis contiguous:
/// values[row * n + j], row indexing the transverse grid.
class ComplexField {
 public:
  explicit ComplexField(Grid grid);
  ComplexField(Grid grid, Grid transverse);
  /// Throws GridMismatchError on a size mismatch, NonFiniteError on NaN/Inf.
  ComplexField(Grid grid, std::vector<cplx> values);
  ComplexField(Grid grid, std::optional<Grid> transverse, std::vector<cplx> values);

  const Grid& grid() const { return grid_; }
  const std::optional<Grid>& transverse() const { return transverse_; }
  std::size_t rows() const { return transverse_ ? transverse_->size() : 1; }
  std::size_t row_length() const { return grid_.size(); }
  std::size_t size() const { return values_.size(); }
  /// Integration weight of one sample.
  double cell() const;

  std::span<cplx> values() { return values_; }
  std::span<const cplx> values() const { return values_; }
  std::span<cplx> row(std::size_t r) { return std::span<cplx>(values_).subspan(r * grid_.size(), grid_.size()); }
  std::span<const cplx> row(std::size_t r) const {
    return std::span<const cplx>(values_).subspan(r * grid_.size(), grid_.size());
  }
  cplx& operator[](std::size_t i) { return values_[i]; }
  const cplx& operator[](std::size_t i) const { return values_[i]; }

  bool same_layout(const ComplexField& other) const;
  bool all_finite() const;
  void fill(cplx value);

 private:
  Grid grid_;
  std::optional<Grid> transverse_;
  std::vector<cplx> values_;
};

/// Throws GridMismatchError unless a and b share grids.
void require_same_layout(const ComplexField& a, const ComplexField& b, const char* what);

/// sqrt(sum |f_j|^2 * cell).
double l2_norm(const ComplexField& f);
/// l2_norm(f - g); throws GridMismatchError on differing layouts.
double l2_error(const ComplexField& f, const ComplexField& g);
/// Norm evaluated from the DFT coefficients (Parseval route).
double l2_norm_spectral(const ComplexField& f);

}  // namespace kgfactor
