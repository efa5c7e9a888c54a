#include "eegvote/kstar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eegvote/errors.hpp"

namespace eegvote {

namespace {

// Effective count over grouped distances. `dist` is shifted so its minimum
// is 0, which keeps at least one term at exp(0) = 1 for any x0.
double grouped_effective_count(std::span<const double> dist, std::span<const double> counts,
                               double x0) noexcept {
  double s1 = 0.0;
  double s2 = 0.0;
  const double inv = 1.0 / x0;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const double p = std::exp(-dist[k] * inv);
    s1 += counts[k] * p;
    s2 += counts[k] * p * p;
  }
  return s1 * s1 / s2;
}

ScaleSolution solve_grouped(std::span<const double> dist, std::span<const double> counts,
                            double n_total, double range, int blend) {
  const bool uniform = std::all_of(dist.begin(), dist.end(), [](double d) { return d == 0.0; });
  if (uniform) return {range > 0.0 ? range : 1.0, n_total, 0};

  const double target = 1.0 + (static_cast<double>(blend) / 100.0) * (n_total - 1.0);
  const double scale = range > 0.0 ? range : 1.0;
  double lo = kScaleBracketLow * scale;
  double hi = kScaleBracketHigh * scale;

  const double n_lo = grouped_effective_count(dist, counts, lo);
  if (target <= n_lo) return {lo, n_lo, 0};
  const double n_hi = grouped_effective_count(dist, counts, hi);
  if (target >= n_hi) return {hi, n_hi, 0};

  // n_eff is increasing in x0: below target means x0 is too small.
  ScaleSolution sol{hi, n_hi, 0};
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int it = 1; it <= kScaleMaxIterations; ++it) {
    const double mid = std::exp(0.5 * (log_lo + log_hi));
    const double n = grouped_effective_count(dist, counts, mid);
    sol = {mid, n, it};
    if (n == target) break;
    if (n < target) {
      log_lo = std::log(mid);
    } else {
      log_hi = std::log(mid);
    }
    if (log_hi - log_lo <= kScaleRelativeTolerance) break;
  }
  return sol;
}

void check_blend(int blend) {
  if (blend < 0 || blend > 100) {
    throw std::invalid_argument("kstar blend must be in [0, 100], got " + std::to_string(blend));
  }
}

}  // namespace

double target_effective_count(std::size_t n, int blend) noexcept {
  return 1.0 + (static_cast<double>(blend) / 100.0) * (static_cast<double>(n) - 1.0);
}

double effective_count(std::span<const double> values, double query, double x0) noexcept {
  double dmin = std::numeric_limits<double>::infinity();
  for (double v : values) dmin = std::min(dmin, std::abs(v - query));
  double s1 = 0.0;
  double s2 = 0.0;
  for (double v : values) {
    const double p = std::exp(-(std::abs(v - query) - dmin) / x0);
    s1 += p;
    s2 += p * p;
  }
  return s1 * s1 / s2;
}

ScaleSolution solve_scale(std::span<const double> values, double query, int blend) {
  check_blend(blend);
  if (values.empty()) return {1.0, 0.0, 0};
  std::vector<double> dist(values.size());
  std::transform(values.begin(), values.end(), dist.begin(),
                 [query](double v) { return std::abs(v - query); });
  const auto [mn, mx] = std::minmax_element(dist.begin(), dist.end());
  const double dmin = *mn;
  const double range = *mx;
  for (double& d : dist) d -= dmin;
  const std::vector<double> counts(values.size(), 1.0);
  return solve_grouped(dist, counts, static_cast<double>(values.size()), range, blend);
}

std::vector<double> attribute_weights(std::span<const double> values, double query, double x0) {
  std::vector<double> w(values.size());
  if (values.empty()) return w;
  double dmin = std::numeric_limits<double>::infinity();
  for (double v : values) dmin = std::min(dmin, std::abs(v - query));
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    w[i] = std::exp(-(std::abs(values[i] - query) - dmin) / x0);
    sum += w[i];
  }
  for (double& x : w) x /= sum;
  return w;
}

KStarModel::KStarModel(Dataset train, KStarConfig cfg) : train_(std::move(train)), cfg_(cfg) {
  check_blend(cfg_.blend);
  if (train_.empty()) throw DatasetError("kstar: empty training set");
  if (!train_.has_both_classes()) throw DatasetError("kstar: training set has a single class");
  if (train_.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw DatasetError("kstar: training set too large");
  }

  const std::size_t n = train_.size();
  tables_.resize(train_.num_attributes());
  std::vector<std::size_t> order(n);
  for (std::size_t a = 0; a < tables_.size(); ++a) {
    auto& t = tables_[a];
    t.rank.resize(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      return train_.value(i, a) < train_.value(j, a);
    });
    for (std::size_t i : order) {
      const double v = train_.value(i, a);
      if (t.values.empty() || t.values.back() != v) {
        t.values.push_back(v);
        t.counts.push_back(0.0);
      }
      t.counts.back() += 1.0;
      t.rank[i] = static_cast<std::uint32_t>(t.values.size() - 1);
    }
  }
}

ProbabilityVector KStarModel::predict(std::span<const double> features) const {
  check_arity(features);
  const std::size_t n = train_.size();
  const auto n_total = static_cast<double>(n);

  // log W(j) = sum_a -(d_a(j) - dmin_a) / x0_a. The per-attribute
  // normalizers are common to every j and cancel in the class ratio.
  std::vector<double> log_w(n, 0.0);
  std::vector<double> dist;
  std::vector<double> term;
  for (std::size_t a = 0; a < tables_.size(); ++a) {
    const auto& t = tables_[a];
    const double q = features[a];
    dist.resize(t.values.size());
    double dmin = std::numeric_limits<double>::infinity();
    double range = 0.0;
    for (std::size_t k = 0; k < t.values.size(); ++k) {
      dist[k] = std::abs(t.values[k] - q);
      dmin = std::min(dmin, dist[k]);
      range = std::max(range, dist[k]);
    }
    for (double& d : dist) d -= dmin;

    const ScaleSolution sol = solve_grouped(dist, t.counts, n_total, range, cfg_.blend);
    term.resize(dist.size());
    const double inv = 1.0 / sol.x0;
    for (std::size_t k = 0; k < dist.size(); ++k) term[k] = -dist[k] * inv;
    for (std::size_t j = 0; j < n; ++j) log_w[j] += term[t.rank[j]];
  }

  const double top = *std::max_element(log_w.begin(), log_w.end());
  std::array<double, kNumClasses> mass{};
  for (std::size_t j = 0; j < n; ++j) {
    mass[index_of(train_.label(j))] += std::exp(log_w[j] - top);
  }
  const double total = mass[0] + mass[1];
  return {mass[0] / total, mass[1] / total};
}

void KStarModel::save(BinaryWriter& out) const {
  out.u64(static_cast<std::uint64_t>(cfg_.blend));
  write_dataset(out, train_);
}

KStarModel KStarModel::load(BinaryReader& in) {
  KStarConfig cfg;
  cfg.blend = static_cast<int>(in.count(100));
  return {read_dataset(in), cfg};
}

KStarModel kstar_fit(const Dataset& ds, KStarConfig cfg) { return {ds, cfg}; }

}  // namespace eegvote
