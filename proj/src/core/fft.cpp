#include "kgfactor/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>

#include "kgfactor/errors.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor::fft {
namespace {

using PlanKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t, int>;

// Plans are created once per layout under a lock; fftw_execute_dft on
// distinct arrays is thread-safe.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist, int sign) {
    const PlanKey key{n, howmany, stride, dist, sign};
    std::lock_guard lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t extent = (howmany - 1) * dist + (n - 1) * stride + 1;
    auto* scratch = fftw_alloc_complex(extent);
    int len = static_cast<int>(n);
    fftw_plan plan = fftw_plan_many_dft(1, &len, static_cast<int>(howmany), scratch, nullptr,
                                        static_cast<int>(stride), static_cast<int>(dist), scratch, nullptr,
                                        static_cast<int>(stride), static_cast<int>(dist), sign,
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(scratch);
    if (plan == nullptr) throw Error("FFTW failed to create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void execute(std::span<cplx> data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist,
             int sign) {
  if (dist == 0) dist = n * stride;
  fftw_plan plan = cache().get(n, howmany, stride, dist, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

}  // namespace

void forward(std::span<cplx> data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist) {
  execute(data, n, howmany, stride, dist, FFTW_FORWARD);
}

void inverse(std::span<cplx> data, std::size_t n, std::size_t howmany, std::size_t stride, std::size_t dist) {
  execute(data, n, howmany, stride, dist, FFTW_BACKWARD);
  kernels::scale(data, 1.0 / static_cast<double>(n));
}

void forward_primary(ComplexField& f) { forward(f.values(), f.row_length(), f.rows()); }

void inverse_primary(ComplexField& f) { inverse(f.values(), f.row_length(), f.rows()); }

void forward_transverse(ComplexField& f) {
  if (!f.transverse()) return;
  forward(f.values(), f.rows(), f.row_length(), f.row_length(), 1);
}

void inverse_transverse(ComplexField& f) {
  if (!f.transverse()) return;
  inverse(f.values(), f.rows(), f.row_length(), f.row_length(), 1);
}

}  // namespace kgfactor::fft
