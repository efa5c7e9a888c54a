#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eegvote/dataset.hpp"

namespace eegvote {

// An instance is an outlier when any attribute lies outside
// [median - t*IQR, median + t*IQR] of that attribute. The default t is wide
// enough to catch only gross recording artifacts.
struct OutlierPolicy {
  double iqr_multiplier = 100.0;
};

// Ascending indices of outlying instances. Quantiles use linear interpolation
// between order statistics.
std::vector<std::size_t> detect_outliers(const Dataset& ds, OutlierPolicy policy = {});

// Per-attribute z-scoring fitted on training data. Uses the population
// standard deviation, floored at kStddevFloor.
class Standardization {
 public:
  static constexpr double kStddevFloor = 1e-6;

  Standardization() = default;
  Standardization(std::vector<double> mean, std::vector<double> stddev);

  // Throws DatasetError on an empty dataset.
  static Standardization fit(const Dataset& ds);

  std::vector<double> apply(std::span<const double> features) const;
  void apply_into(std::span<const double> features, std::span<double> out) const;

  std::size_t arity() const noexcept { return mean_.size(); }
  const std::vector<double>& mean() const noexcept { return mean_; }
  const std::vector<double>& stddev() const noexcept { return stddev_; }

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

}  // namespace eegvote
