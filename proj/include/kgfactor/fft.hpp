#pragma once

#include <cstddef>
#include <span>

#include "kgfactor/field.hpp"

namespace kgfactor::fft {

/// Batched in-place DFT of `howmany` sequences of length n, element stride
/// `stride`, sequence distance `dist`. forward() uses exp(-2 pi i jk/n) and is
/// unnormalized; inverse() includes the 1/n factor. Safe to call concurrently.
void forward(std::span<cplx> data, std::size_t n, std::size_t howmany = 1, std::size_t stride = 1,
             std::size_t dist = 0);
void inverse(std::span<cplx> data, std::size_t n, std::size_t howmany = 1, std::size_t stride = 1,
             std::size_t dist = 0);

/// Transform every row of f along its primary axis.
void forward_primary(ComplexField& f);
void inverse_primary(ComplexField& f);
/// Transform every column of f along its transverse axis (no-op without one).
void forward_transverse(ComplexField& f);
void inverse_transverse(ComplexField& f);

}  // namespace kgfactor::fft
