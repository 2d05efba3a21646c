#include "kgfactor/spectral.hpp"

#include "kgfactor/errors.hpp"
#include "kgfactor/fft.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor {

std::vector<cplx> derivative_multiplier(const Grid& grid, int order) {
  if (order != 1 && order != 2) throw ConfigError("spectral_derivative supports order 1 or 2");
  std::vector<cplx> mult(grid.size());
  const std::size_t nyquist_bin = grid.size() / 2;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double k = grid.frequency(j);
    mult[j] = order == 1 ? cplx(0.0, k) : cplx(-k * k, 0.0);
  }
  if (order == 1) mult[nyquist_bin] = 0.0;
  return mult;
}

void apply_spectral_multiplier(ComplexField& f, std::span<const cplx> multiplier) {
  if (multiplier.size() != f.row_length()) throw GridMismatchError("spectral multiplier length mismatch");
  fft::forward_primary(f);
  kernels::multiply_rows(f.values(), multiplier);
  fft::inverse_primary(f);
}

ComplexField spectral_derivative(const ComplexField& f, int order) {
  const auto mult = derivative_multiplier(f.grid(), order);
  ComplexField out = f;
  apply_spectral_multiplier(out, mult);
  return out;
}

ComplexField transverse_laplacian(const ComplexField& f) {
  ComplexField out = f;
  if (!f.transverse()) {
    out.fill(0.0);
    return out;
  }
  const auto mult = derivative_multiplier(*f.transverse(), 2);
  fft::forward_transverse(out);
  kernels::multiply_columns(out.values(), mult);
  fft::inverse_transverse(out);
  return out;
}

}  // namespace kgfactor
