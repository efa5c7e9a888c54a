#include "eegvote/preprocess.hpp"

#include <algorithm>
#include <cmath>

#include "eegvote/errors.hpp"

namespace eegvote {

namespace {

// Linearly interpolated quantile of an already sorted sample.
double sorted_quantile(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - static_cast<double>(lo));
}

}  // namespace

std::vector<std::size_t> detect_outliers(const Dataset& ds, OutlierPolicy policy) {
  std::vector<bool> flagged(ds.size(), false);
  std::vector<double> column(ds.size());
  for (std::size_t a = 0; a < ds.num_attributes() && !ds.empty(); ++a) {
    for (std::size_t i = 0; i < ds.size(); ++i) column[i] = ds.value(i, a);
    std::sort(column.begin(), column.end());
    const double median = sorted_quantile(column, 0.5);
    const double iqr = sorted_quantile(column, 0.75) - sorted_quantile(column, 0.25);
    const double lo = median - policy.iqr_multiplier * iqr;
    const double hi = median + policy.iqr_multiplier * iqr;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double v = ds.value(i, a);
      if (v < lo || v > hi) flagged[i] = true;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (flagged[i]) out.push_back(i);
  }
  return out;
}

Standardization::Standardization(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) throw InvariantError("standardization arity mismatch");
  for (double& s : stddev_) s = std::max(s, kStddevFloor);
}

Standardization Standardization::fit(const Dataset& ds) {
  if (ds.empty()) throw DatasetError("cannot standardize an empty dataset");
  const std::size_t m = ds.num_attributes();
  const auto n = static_cast<double>(ds.size());
  std::vector<double> mean(m, 0.0);
  std::vector<double> stddev(m, 0.0);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t a = 0; a < m; ++a) mean[a] += ds.value(i, a);
  }
  for (double& v : mean) v /= n;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      const double d = ds.value(i, a) - mean[a];
      stddev[a] += d * d;
    }
  }
  for (double& v : stddev) v = std::sqrt(v / n);
  return {std::move(mean), std::move(stddev)};
}

std::vector<double> Standardization::apply(std::span<const double> features) const {
  std::vector<double> out(features.size());
  apply_into(features, out);
  return out;
}

void Standardization::apply_into(std::span<const double> features, std::span<double> out) const {
  if (features.size() != arity() || out.size() != arity()) {
    throw ModelError("standardization expects " + std::to_string(arity()) + " features, got " +
                     std::to_string(features.size()));
  }
  for (std::size_t a = 0; a < arity(); ++a) out[a] = (features[a] - mean_[a]) / stddev_[a];
}

}  // namespace eegvote
