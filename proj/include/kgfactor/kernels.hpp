#pragma once

// Pointwise kernels used by every solver's inner loops. The default versions
// are OpenMP-parallel; kernels::serial holds the plain reference loops that
// the parallel versions are tested and benchmarked against.

#include <complex>
#include <cstddef>
#include <span>

namespace kgfactor::kernels {

using cplx = std::complex<double>;

/// Below this length the OpenMP versions run on the calling thread.
inline constexpr std::size_t kParallelThreshold = 2048;
/// Fixed partition used by reductions; makes sums independent of thread count.
inline constexpr std::size_t kReductionChunk = 512;

void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);                             // y += a x
void combine(std::span<cplx> out, std::span<const cplx> x, cplx a, std::span<const cplx> y);  // out = x + a y
void scale(std::span<cplx> f, cplx a);
void multiply(std::span<cplx> f, std::span<const double> r);
void multiply(std::span<cplx> f, std::span<const cplx> g);
/// f[r * len + j] *= g[j] for every row r.
void multiply_rows(std::span<cplx> f, std::span<const cplx> g);
/// f[r * len + j] *= g[r] for every row r, len = f.size() / g.size().
void multiply_columns(std::span<cplx> f, std::span<const cplx> g);
/// f[j] *= exp(i * scale * angle[j]).
void apply_phase(std::span<cplx> f, std::span<const double> angle, double scale);
double sum_abs2(std::span<const cplx> f);

namespace serial {
void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y);
void combine(std::span<cplx> out, std::span<const cplx> x, cplx a, std::span<const cplx> y);
void scale(std::span<cplx> f, cplx a);
void multiply(std::span<cplx> f, std::span<const double> r);
void multiply(std::span<cplx> f, std::span<const cplx> g);
void multiply_rows(std::span<cplx> f, std::span<const cplx> g);
void multiply_columns(std::span<cplx> f, std::span<const cplx> g);
void apply_phase(std::span<cplx> f, std::span<const double> angle, double scale);
double sum_abs2(std::span<const cplx> f);
}  // namespace serial

/// Number of threads the parallel kernels may use (1 without OpenMP).
int max_threads();

}  // namespace kgfactor::kernels
