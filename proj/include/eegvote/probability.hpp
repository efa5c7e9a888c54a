#pragma once

#include <array>
#include <cstddef>

#include "eegvote/dataset.hpp"

namespace eegvote {

// Per-class probability estimate (P(Open), P(Closed)) emitted by every
// classifier.
struct ProbabilityVector {
  std::array<double, kNumClasses> p{0.5, 0.5};

  constexpr ProbabilityVector() = default;
  constexpr ProbabilityVector(double open, double closed) : p{open, closed} {}

  constexpr double operator[](std::size_t c) const noexcept { return p[c]; }
  constexpr double& operator[](std::size_t c) noexcept { return p[c]; }
  constexpr double operator[](Label l) const noexcept { return p[index_of(l)]; }
  constexpr double open() const noexcept { return p[0]; }
  constexpr double closed() const noexcept { return p[1]; }

  static constexpr ProbabilityVector hard(Label l) noexcept {
    return l == Label::Open ? ProbabilityVector{1.0, 0.0} : ProbabilityVector{0.0, 1.0};
  }

  friend constexpr bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;
};

// Entries in [0, 1] and summing to 1 within tol.
bool is_valid(const ProbabilityVector& pv, double tol = 1e-6) noexcept;

// Label of the largest entry; an exact tie goes to Open. Throws
// InvariantError on a negative entry or a sum off by more than 1e-6.
Label argmax_label(const ProbabilityVector& pv);

}  // namespace eegvote
