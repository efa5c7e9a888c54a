#include "eegvote/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace eegvote {

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) noexcept {
  for (std::size_t a = 0; a < kNumClasses; ++a) {
    for (std::size_t p = 0; p < kNumClasses; ++p) counts[a][p] += o.counts[a][p];
  }
  return *this;
}

ConfusionMatrix confusion_matrix(std::span<const LabelPair> pairs) noexcept {
  ConfusionMatrix cm;
  for (const auto& [actual, predicted] : pairs) ++cm.at(actual, predicted);
  return cm;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw std::invalid_argument("accuracy of an empty confusion matrix");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double mae(std::span<const ScoredPrediction> rows) {
  if (rows.empty()) throw std::invalid_argument("mae of an empty prediction set");
  double sum = 0.0;
  for (const auto& r : rows) {
    double e = 0.0;
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double target = index_of(r.actual) == c ? 1.0 : 0.0;
      e += std::abs(r.probabilities[c] - target);
    }
    sum += e / static_cast<double>(kNumClasses);
  }
  return sum / static_cast<double>(rows.size());
}

}  // namespace eegvote
