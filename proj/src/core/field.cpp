#include "kgfactor/field.hpp"

#include <cmath>
#include <string>

#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor {

ComplexField::ComplexField(Grid grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(Grid grid, Grid transverse)
    : grid_(grid), transverse_(transverse), values_(grid.size() * transverse.size()) {}

ComplexField::ComplexField(Grid grid, std::vector<cplx> values)
    : ComplexField(grid, std::nullopt, std::move(values)) {}

ComplexField::ComplexField(Grid grid, std::optional<Grid> transverse, std::vector<cplx> values)
    : grid_(grid), transverse_(transverse), values_(std::move(values)) {
  const std::size_t expected = grid_.size() * rows();
  if (values_.size() != expected)
    throw GridMismatchError("field has " + std::to_string(values_.size()) + " samples, grid needs " +
                            std::to_string(expected));
  if (!all_finite()) throw NonFiniteError("field samples must be finite");
}

double ComplexField::cell() const { return grid_.spacing() * (transverse_ ? transverse_->spacing() : 1.0); }

bool ComplexField::same_layout(const ComplexField& other) const {
  return grid_ == other.grid_ && transverse_ == other.transverse_;
}

bool ComplexField::all_finite() const {
  for (const auto& v : values_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

void ComplexField::fill(cplx value) { std::fill(values_.begin(), values_.end(), value); }

void require_same_layout(const ComplexField& a, const ComplexField& b, const char* what) {
  if (!a.same_layout(b)) throw GridMismatchError(std::string(what) + ": fields live on different grids");
}

double l2_norm(const ComplexField& f) { return std::sqrt(kernels::sum_abs2(f.values()) * f.cell()); }

double l2_error(const ComplexField& f, const ComplexField& g) {
  require_same_layout(f, g, "l2_error");
  ComplexField d = f;
  kernels::axpy(-1.0, g.values(), d.values());
  return l2_norm(d);
}

double l2_norm_spectral(const ComplexField& f) {
  ComplexField spec = f;
  fft::forward_primary(spec);
  fft::forward_transverse(spec);
  // Parseval: sum |f_j|^2 = (1/N) sum |F_k|^2 with N the total sample count.
  const double total = static_cast<double>(f.size());
  return std::sqrt(kernels::sum_abs2(spec.values()) / total * f.cell());
}

}  // namespace kgfactor
