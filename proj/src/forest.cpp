#include "eegvote/forest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "eegvote/errors.hpp"
#include "eegvote/parallel.hpp"

namespace eegvote {

namespace {

// Splits must beat the incumbent by this much; keeps exact ties (which can
// differ in the last bit between equivalent computations) on the lower
// attribute/threshold.
constexpr double kGainEpsilon = 1e-12;

double entropy(double a, double b) noexcept {
  const double n = a + b;
  double h = 0.0;
  if (a > 0.0) h -= (a / n) * std::log2(a / n);
  if (b > 0.0) h -= (b / n) * std::log2(b / n);
  return h;
}

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& ds, const std::function<std::uint64_t()>& draw,
              const ForestConfig& cfg)
      : ds_(ds),
        draw_(draw),
        min_leaf_(std::max<std::size_t>(cfg.min_leaf, 1)),
        max_depth_(cfg.max_depth),
        subset_(resolved_subset_size(cfg, ds.num_attributes())),
        attrs_(ds.num_attributes()) {}

  std::vector<TreeNode> build(std::span<const std::size_t> sample) {
    rows_.assign(sample.begin(), sample.end());
    if (!rows_.empty()) grow(0, rows_.size(), 0);
    return std::move(nodes_);
  }

 private:
  struct Split {
    std::uint32_t attribute = TreeNode::kLeaf;
    double threshold = 0.0;
    double gain = 0.0;
  };

  std::uint32_t grow(std::size_t begin, std::size_t end, std::size_t depth) {
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.emplace_back();
    TreeNode node;
    for (std::size_t r = begin; r < end; ++r) ++node.counts[index_of(ds_.label(rows_[r]))];

    const std::size_t n = end - begin;
    const bool pure = node.counts[0] == 0 || node.counts[1] == 0;
    const bool too_small = n < 2 * min_leaf_;
    const bool too_deep = max_depth_ && depth >= *max_depth_;
    if (pure || too_small || too_deep) {
      nodes_[id] = node;
      return id;
    }

    const Split split = best_split(begin, end, node.counts);
    if (split.attribute == TreeNode::kLeaf) {
      nodes_[id] = node;
      return id;
    }
    if (!(split.gain > 0.0)) throw InvariantError("tree split with non-positive gain");

    auto mid_it = std::partition(rows_.begin() + static_cast<std::ptrdiff_t>(begin),
                                 rows_.begin() + static_cast<std::ptrdiff_t>(end),
                                 [&](std::size_t r) {
                                   return ds_.value(r, split.attribute) < split.threshold;
                                 });
    const auto mid = static_cast<std::size_t>(mid_it - rows_.begin());
    node.attribute = split.attribute;
    node.threshold = split.threshold;
    node.gain = split.gain;
    node.left = grow(begin, mid, depth + 1);
    node.right = grow(mid, end, depth + 1);
    nodes_[id] = node;
    return id;
  }

  Split best_split(std::size_t begin, std::size_t end,
                   const std::array<std::uint32_t, kNumClasses>& counts) {
    const std::size_t m = attrs_.size();
    std::iota(attrs_.begin(), attrs_.end(), std::uint32_t{0});
    for (std::size_t i = 0; i < subset_; ++i) {
      const std::uint64_t w = draw_();
      const auto j = i + static_cast<std::size_t>(
                             (static_cast<unsigned __int128>(w) * (m - i)) >> 64);
      std::swap(attrs_[i], attrs_[j]);
    }
    std::sort(attrs_.begin(), attrs_.begin() + static_cast<std::ptrdiff_t>(subset_));

    const double total = static_cast<double>(end - begin);
    const double parent = entropy(counts[0], counts[1]);
    Split best;
    for (std::size_t s = 0; s < subset_; ++s) {
      const std::uint32_t a = attrs_[s];
      pairs_.clear();
      for (std::size_t r = begin; r < end; ++r) {
        pairs_.emplace_back(ds_.value(rows_[r], a), index_of(ds_.label(rows_[r])));
      }
      std::sort(pairs_.begin(), pairs_.end());
      std::array<double, kNumClasses> left{};
      for (std::size_t i = 0; i + 1 < pairs_.size(); ++i) {
        left[pairs_[i].second] += 1.0;
        if (pairs_[i].first == pairs_[i + 1].first) continue;
        const std::size_t n_left = i + 1;
        const std::size_t n_right = pairs_.size() - n_left;
        if (n_left < min_leaf_ || n_right < min_leaf_) continue;
        const double r0 = counts[0] - left[0];
        const double r1 = counts[1] - left[1];
        const double gain = parent - (static_cast<double>(n_left) / total) * entropy(left[0], left[1]) -
                            (static_cast<double>(n_right) / total) * entropy(r0, r1);
        if (gain > best.gain + kGainEpsilon) {
          best = {a, 0.5 * (pairs_[i].first + pairs_[i + 1].first), gain};
        }
      }
    }
    return best;
  }

  const Dataset& ds_;
  const std::function<std::uint64_t()>& draw_;
  std::size_t min_leaf_;
  std::optional<std::size_t> max_depth_;
  std::size_t subset_;
  std::vector<std::uint32_t> attrs_;
  std::vector<std::size_t> rows_;
  std::vector<std::pair<double, std::size_t>> pairs_;
  std::vector<TreeNode> nodes_;
};

void write_node(BinaryWriter& out, const TreeNode& n) {
  out.u64(n.attribute);
  out.f64(n.threshold);
  out.u64(n.left);
  out.u64(n.right);
  out.u64(n.counts[0]);
  out.u64(n.counts[1]);
  out.f64(n.gain);
}

TreeNode read_node(BinaryReader& in) {
  TreeNode n;
  n.attribute = static_cast<std::uint32_t>(in.u64());
  n.threshold = in.f64();
  n.left = static_cast<std::uint32_t>(in.u64());
  n.right = static_cast<std::uint32_t>(in.u64());
  n.counts[0] = static_cast<std::uint32_t>(in.u64());
  n.counts[1] = static_cast<std::uint32_t>(in.u64());
  n.gain = in.f64();
  return n;
}

}  // namespace

std::size_t resolved_subset_size(const ForestConfig& cfg, std::size_t num_attributes) {
  if (num_attributes == 0) return 0;
  const std::size_t k = cfg.feature_subset_size == 0
                            ? static_cast<std::size_t>(std::bit_width(num_attributes))
                            : cfg.feature_subset_size;
  if (k > num_attributes) {
    throw std::invalid_argument("forest feature subset size " + std::to_string(k) +
                                " exceeds attribute count " + std::to_string(num_attributes));
  }
  return k;
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw InvariantError("decision tree without nodes");
  for (const auto& n : nodes_) {
    if (!n.is_leaf() && (n.left >= nodes_.size() || n.right >= nodes_.size())) {
      throw ModelError("decision tree child index out of range");
    }
  }
}

ProbabilityVector DecisionTree::predict(std::span<const double> features) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    if (node->attribute >= features.size()) throw ModelError("feature vector too short for tree");
    node = &nodes_[features[node->attribute] < node->threshold ? node->left : node->right];
  }
  const double total = static_cast<double>(node->counts[0]) + node->counts[1] + 2.0;
  return {(node->counts[0] + 1.0) / total, (node->counts[1] + 1.0) / total};
}

std::size_t DecisionTree::depth() const noexcept {
  // Preorder layout: children always have larger indices than their parent.
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

DecisionTree tree_fit(const Dataset& ds, std::span<const std::size_t> sample,
                      const std::function<std::uint64_t()>& draw, const ForestConfig& cfg) {
  if (sample.empty()) throw DatasetError("tree: empty sample");
  TreeBuilder builder(ds, draw, cfg);
  return DecisionTree(builder.build(sample));
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& gen) {
  std::vector<std::size_t> out(n);
  for (auto& i : out) i = static_cast<std::size_t>(uniform_below(gen, n));
  return out;
}

ForestModel::ForestModel(std::vector<DecisionTree> trees, ForestConfig cfg,
                         std::size_t num_attributes, std::size_t training_size)
    : trees_(std::move(trees)),
      cfg_(cfg),
      num_attributes_(num_attributes),
      training_size_(training_size) {
  if (trees_.empty()) throw InvariantError("forest without trees");
}

ProbabilityVector ForestModel::predict(std::span<const double> features) const {
  check_arity(features);
  double open = 0.0;
  double closed = 0.0;
  for (const auto& t : trees_) {
    const auto p = t.predict(features);
    open += p.open();
    closed += p.closed();
  }
  const auto n = static_cast<double>(trees_.size());
  return {open / n, closed / n};
}

void ForestModel::save(BinaryWriter& out) const {
  out.u64(cfg_.n_trees);
  out.u64(cfg_.feature_subset_size);
  out.u64(cfg_.min_leaf);
  out.u64(cfg_.max_depth ? *cfg_.max_depth + 1 : 0);
  out.u64(cfg_.seed);
  out.u64(num_attributes_);
  out.u64(training_size_);
  out.u64(trees_.size());
  for (const auto& t : trees_) {
    out.u64(t.nodes().size());
    for (const auto& n : t.nodes()) write_node(out, n);
  }
}

ForestModel ForestModel::load(BinaryReader& in) {
  ForestConfig cfg;
  cfg.n_trees = in.u64();
  cfg.feature_subset_size = in.u64();
  cfg.min_leaf = in.u64();
  if (const auto d = in.u64(); d > 0) cfg.max_depth = d - 1;
  cfg.seed = in.u64();
  const auto m = in.u64();
  const auto n = in.u64();
  std::vector<DecisionTree> trees(in.count());
  for (auto& t : trees) {
    std::vector<TreeNode> nodes(in.count());
    for (auto& node : nodes) node = read_node(in);
    t = DecisionTree(std::move(nodes));
  }
  return {std::move(trees), cfg, m, n};
}

ForestModel forest_fit(const Dataset& ds, const ForestConfig& cfg, unsigned threads) {
  if (ds.empty()) throw DatasetError("forest: empty training set");
  if (cfg.n_trees == 0) throw std::invalid_argument("forest needs at least one tree");
  if (cfg.min_leaf == 0) throw std::invalid_argument("forest min_leaf must be at least 1");
  resolved_subset_size(cfg, ds.num_attributes());

  std::vector<DecisionTree> trees(cfg.n_trees);
  parallel_for(cfg.n_trees, threads, [&](std::size_t i) {
    Rng gen(derive_stream(cfg.seed, i));
    const auto sample = bootstrap_sample(ds.size(), gen);
    trees[i] = tree_fit(ds, sample, gen, cfg);
  });
  return {std::move(trees), cfg, ds.num_attributes(), ds.size()};
}

}  // namespace eegvote
