#pragma once

// Independent reference computations for tests. Nothing here calls into the
// code under test except plain data types (Dataset, Label, ProbabilityVector).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "eegvote/dataset.hpp"
#include "eegvote/probability.hpp"

namespace eegvote::oracle {

using Real = long double;

// (sum p)^2 / sum p^2, p_i = exp(-|v_i - q| / x0), straight from the definition.
inline Real effective_count(std::span<const double> values, double query, Real x0) {
  Real dmin = std::numeric_limits<Real>::infinity();
  for (double v : values) dmin = std::min(dmin, std::fabs(static_cast<Real>(v) - query));
  Real s1 = 0;
  Real s2 = 0;
  for (double v : values) {
    const Real p = std::exp(-(std::fabs(static_cast<Real>(v) - query) - dmin) / x0);
    s1 += p;
    s2 += p * p;
  }
  return s1 * s1 / s2;
}

// Plain bisection on x0 over [1e-9, 1e9], in log space, run to exhaustion.
inline Real solve_scale(std::span<const double> values, double query, int blend) {
  const Real target = 1 + (static_cast<Real>(blend) / 100) * (static_cast<Real>(values.size()) - 1);
  Real lo = std::log(1e-9L);
  Real hi = std::log(1e9L);
  for (int i = 0; i < 200; ++i) {
    const Real mid = (lo + hi) / 2;
    if (effective_count(values, query, std::exp(mid)) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp((lo + hi) / 2);
}

// K* class probabilities written out long-hand: normalized per-attribute
// weights, multiplied across attributes (as sums of logs), summed per class.
inline std::array<Real, kNumClasses> kstar_probabilities(const Dataset& train,
                                                         std::span<const double> query,
                                                         int blend) {
  const std::size_t n = train.size();
  std::vector<Real> log_w(n, 0);
  std::vector<double> column(n);
  for (std::size_t a = 0; a < train.num_attributes(); ++a) {
    for (std::size_t j = 0; j < n; ++j) column[j] = train.value(j, a);
    const Real x0 = solve_scale(column, query[a], blend);
    std::vector<Real> log_p(n);
    Real top = -std::numeric_limits<Real>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      log_p[j] = -std::fabs(static_cast<Real>(column[j]) - query[a]) / x0;
      top = std::max(top, log_p[j]);
    }
    Real sum = 0;
    for (std::size_t j = 0; j < n; ++j) sum += std::exp(log_p[j] - top);
    const Real log_norm = top + std::log(sum);
    for (std::size_t j = 0; j < n; ++j) log_w[j] += log_p[j] - log_norm;
  }
  const Real top = *std::max_element(log_w.begin(), log_w.end());
  std::array<Real, kNumClasses> mass{};
  Real total = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Real w = std::exp(log_w[j] - top);
    mass[index_of(train.label(j))] += w;
    total += w;
  }
  return {mass[0] / total, mass[1] / total};
}

inline Real mae(std::span<const ProbabilityVector> probs, std::span<const Label> actual) {
  Real sum = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const Real open_target = actual[i] == Label::Open ? 1 : 0;
    sum += (std::fabs(probs[i].open() - open_target) +
            std::fabs(probs[i].closed() - (1 - open_target))) /
           2;
  }
  return sum / static_cast<Real>(probs.size());
}

// ---------------------------------------------------------------------------
// Decision tree by exhaustive enumeration.

struct OracleNode {
  bool leaf = true;
  std::size_t attribute = 0;
  double threshold = 0.0;
  std::array<std::size_t, kNumClasses> counts{};
  int left = -1;
  int right = -1;
};

inline Real entropy_bits(Real a, Real b) {
  Real h = 0;
  const Real n = a + b;
  for (Real c : {a, b}) {
    if (c > 0) h -= (c / n) * std::log2(c / n);
  }
  return h;
}

// Information gain of splitting rows at (attribute, threshold), counted by
// scanning every row.
inline Real split_gain(const Dataset& ds, std::span<const std::size_t> rows, std::size_t attribute,
                       double threshold) {
  std::array<Real, 2> left{};
  std::array<Real, 2> right{};
  for (std::size_t r : rows) {
    auto& side = ds.value(r, attribute) < threshold ? left : right;
    side[index_of(ds.label(r))] += 1;
  }
  const Real nl = left[0] + left[1];
  const Real nr = right[0] + right[1];
  const Real n = nl + nr;
  return entropy_bits(left[0] + right[0], left[1] + right[1]) -
         (nl / n) * entropy_bits(left[0], left[1]) - (nr / n) * entropy_bits(right[0], right[1]);
}

// Grows a tree over `rows`. `choose_attributes(node_index)` returns the
// attribute subset considered at that (preorder) node. Every candidate
// (attribute, midpoint) is scored by split_gain; the first maximum in
// (attribute, threshold) order wins.
template <class Chooser>
int grow_tree(const Dataset& ds, std::vector<std::size_t> rows, std::size_t min_leaf,
              Chooser& choose_attributes, std::vector<OracleNode>& out) {
  const int id = static_cast<int>(out.size());
  out.emplace_back();
  OracleNode node;
  for (std::size_t r : rows) ++node.counts[index_of(ds.label(r))];
  if (node.counts[0] == 0 || node.counts[1] == 0 || rows.size() < 2 * min_leaf) {
    out[id] = node;
    return id;
  }
  std::vector<std::size_t> attrs = choose_attributes(static_cast<std::size_t>(id));
  std::sort(attrs.begin(), attrs.end());

  Real best_gain = 0;
  std::optional<std::pair<std::size_t, double>> best;
  for (std::size_t a : attrs) {
    std::vector<double> vals;
    for (std::size_t r : rows) vals.push_back(ds.value(r, a));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
      const double thr = 0.5 * (vals[i] + vals[i + 1]);
      std::size_t nl = 0;
      for (std::size_t r : rows) nl += ds.value(r, a) < thr ? 1 : 0;
      if (nl < min_leaf || rows.size() - nl < min_leaf) continue;
      const Real g = split_gain(ds, rows, a, thr);
      if (g > best_gain + 1e-12L) {
        best_gain = g;
        best = {a, thr};
      }
    }
  }
  if (!best) {
    out[id] = node;
    return id;
  }
  node.leaf = false;
  node.attribute = best->first;
  node.threshold = best->second;
  std::vector<std::size_t> l;
  std::vector<std::size_t> r;
  for (std::size_t row : rows) (ds.value(row, node.attribute) < node.threshold ? l : r).push_back(row);
  node.left = grow_tree(ds, std::move(l), min_leaf, choose_attributes, out);
  node.right = grow_tree(ds, std::move(r), min_leaf, choose_attributes, out);
  out[id] = node;
  return id;
}

// ---------------------------------------------------------------------------
// Scripted word source for replaying randomness transcripts.

class ScriptedWords {
 public:
  explicit ScriptedWords(std::vector<std::uint64_t> words) : words_(std::move(words)) {}

  std::uint64_t operator()() {
    if (pos_ >= words_.size()) throw std::out_of_range("scripted word source exhausted");
    return words_[pos_++];
  }
  std::size_t consumed() const noexcept { return pos_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t pos_ = 0;
};

// Smallest 64-bit word w with floor(w * n / 2^64) == k.
inline std::uint64_t word_selecting(std::uint64_t k, std::uint64_t n) {
  const unsigned __int128 num = (static_cast<unsigned __int128>(k) << 64) + n - 1;
  return static_cast<std::uint64_t>(num / n);
}

// Forward partial Fisher-Yates over [0, m) replayed from a word list, one
// word per draw: draw i swaps slot i with slot i + floor(w * (m - i) / 2^64).
class ScriptedChooser {
 public:
  ScriptedChooser(std::vector<std::uint64_t> words, std::size_t m, std::size_t k)
      : words_(std::move(words)), m_(m), k_(k) {}

  std::vector<std::size_t> operator()(std::size_t /*node*/) {
    std::vector<std::size_t> attrs(m_);
    std::iota(attrs.begin(), attrs.end(), std::size_t{0});
    for (std::size_t i = 0; i < k_; ++i) {
      const std::uint64_t w = words_.at(pos_++);
      const auto j = i + static_cast<std::size_t>(
                             (static_cast<unsigned __int128>(w) * (m_ - i)) >> 64);
      std::swap(attrs[i], attrs[j]);
    }
    return {attrs.begin(), attrs.begin() + static_cast<std::ptrdiff_t>(k_)};
  }
  std::size_t consumed() const { return pos_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t m_;
  std::size_t k_;
  std::size_t pos_ = 0;
};

}  // namespace eegvote::oracle
