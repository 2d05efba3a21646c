#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <optional>

#include "kgfactor/field.hpp"
#include "kgfactor/kernels.hpp"

namespace kgfactor {

/// Two-component states marched by the explicit integrators.
template <typename S>
concept TwoFieldState = requires(S s, const S cs, std::size_t i) {
  { s.part(i) } -> std::same_as<ComplexField&>;
  { cs.part(i) } -> std::same_as<const ComplexField&>;
};

/// Classical RK4 with reusable stage storage. The right-hand side has the
/// signature rhs(const State& s, double t, State& ds) and must overwrite
/// both parts of ds. Only the field parts are advanced; the caller owns the clock.
template <TwoFieldState State>
class Rk4 {
 public:
  template <typename Rhs>
  void advance(State& s, double t, double h, Rhs&& rhs) {
    if (!stage_) {
      stage_.emplace(s);
      k_.emplace(s);
      acc_.emplace(s);
    }
    State& stage = *stage_;
    State& k = *k_;
    State& acc = *acc_;

    rhs(s, t, k);
    for (std::size_t i = 0; i < 2; ++i) {
      copy(acc.part(i), s.part(i));
      kernels::axpy(h / 6.0, k.part(i).values(), acc.part(i).values());
      kernels::combine(stage.part(i).values(), s.part(i).values(), h / 2.0, k.part(i).values());
    }
    rhs(stage, t + h / 2.0, k);
    for (std::size_t i = 0; i < 2; ++i) {
      kernels::axpy(h / 3.0, k.part(i).values(), acc.part(i).values());
      kernels::combine(stage.part(i).values(), s.part(i).values(), h / 2.0, k.part(i).values());
    }
    rhs(stage, t + h / 2.0, k);
    for (std::size_t i = 0; i < 2; ++i) {
      kernels::axpy(h / 3.0, k.part(i).values(), acc.part(i).values());
      kernels::combine(stage.part(i).values(), s.part(i).values(), h, k.part(i).values());
    }
    rhs(stage, t + h, k);
    for (std::size_t i = 0; i < 2; ++i) {
      kernels::axpy(h / 6.0, k.part(i).values(), acc.part(i).values());
      copy(s.part(i), acc.part(i));
    }
  }

 private:
  static void copy(ComplexField& dst, const ComplexField& src) {
    auto d = dst.values();
    auto s = src.values();
    std::copy(s.begin(), s.end(), d.begin());
  }

  std::optional<State> stage_, k_, acc_;
};

}  // namespace kgfactor
