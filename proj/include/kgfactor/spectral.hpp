#pragma once

#include <span>
#include <vector>

#include "kgfactor/field.hpp"

namespace kgfactor {

/// d^order f / dx^order along the primary axis, order in {1, 2}; periodic.
/// The Nyquist bin is dropped for odd orders.
ComplexField spectral_derivative(const ComplexField& f, int order);

/// Second derivative along the transverse axis (zero field without one).
ComplexField transverse_laplacian(const ComplexField& f);

/// Multiply the primary-axis spectrum of every row by `multiplier` (DFT order), in place.
void apply_spectral_multiplier(ComplexField& f, std::span<const cplx> multiplier);

/// (i k_j)^order for every bin of the grid, with the odd-order Nyquist bin zeroed.
std::vector<cplx> derivative_multiplier(const Grid& grid, int order);

}  // namespace kgfactor
