#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <utility>

#include "eegvote/dataset.hpp"
#include "eegvote/probability.hpp"

namespace eegvote {

// counts[actual][predicted], rows and columns ordered (Open, Closed).
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, kNumClasses>, kNumClasses> counts{};

  std::uint64_t& at(Label actual, Label predicted) noexcept {
    return counts[index_of(actual)][index_of(predicted)];
  }
  std::uint64_t at(Label actual, Label predicted) const noexcept {
    return counts[index_of(actual)][index_of(predicted)];
  }
  std::uint64_t total() const noexcept;
  std::uint64_t trace() const noexcept { return counts[0][0] + counts[1][1]; }
  std::uint64_t row_sum(Label actual) const noexcept {
    return counts[index_of(actual)][0] + counts[index_of(actual)][1];
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept;
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

using LabelPair = std::pair<Label, Label>;  // (actual, predicted)

ConfusionMatrix confusion_matrix(std::span<const LabelPair> pairs) noexcept;

// trace / total. Throws std::invalid_argument on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct ScoredPrediction {
  ProbabilityVector probabilities;
  Label actual;
};

// Mean over instances of (1/K) sum_c |p(c) - [actual == c]|, K = 2. For hard
// predictions this is the error rate; a constant (0.5, 0.5) gives 0.5.
// Throws std::invalid_argument on empty input.
double mae(std::span<const ScoredPrediction> rows);

}  // namespace eegvote
