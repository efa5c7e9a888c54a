#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "eegvote/dataset.hpp"
#include "eegvote/model.hpp"
#include "eegvote/rng.hpp"

namespace eegvote {

struct ForestConfig {
  std::size_t n_trees = 180;
  // Attributes drawn per node; 0 selects floor(log2(M)) + 1.
  std::size_t feature_subset_size = 0;
  std::size_t min_leaf = 1;
  std::optional<std::size_t> max_depth;
  std::uint64_t seed = 1;
};

// Resolves the 0 default and validates against the attribute count M.
// Throws std::invalid_argument on an impossible setting.
std::size_t resolved_subset_size(const ForestConfig& cfg, std::size_t num_attributes);

// Flat tree node. Leaves carry the (bootstrap multiset) class counts of the
// training samples that reached them; splits send feature < threshold left.
struct TreeNode {
  static constexpr std::uint32_t kLeaf = ~std::uint32_t{0};

  std::uint32_t attribute = kLeaf;
  double threshold = 0.0;
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::array<std::uint32_t, kNumClasses> counts{};
  double gain = 0.0;  // information gain of the split, 0 for leaves

  bool is_leaf() const noexcept { return attribute == kLeaf; }

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes);

  // Laplace-smoothed distribution (count_c + 1) / (total + 2) of the leaf
  // reached by features. Throws ModelError when features is shorter than a
  // split attribute requires; callers check full arity.
  ProbabilityVector predict(std::span<const double> features) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const noexcept { return nodes_.front(); }
  std::size_t depth() const noexcept;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

// Randomized tree induction on the multiset `sample` of row indices.
//
// Nodes are built in preorder. A node becomes a leaf without consuming
// randomness if it is pure, has fewer than 2*min_leaf samples, or sits at
// max_depth. Otherwise exactly k words are drawn to pick k attributes by a
// partial Fisher-Yates shuffle over [0, M); the split maximizing information
// gain (Shannon, bits) over midpoints between consecutive distinct values is
// taken, ties going to the lower attribute index and then the lower
// threshold. No split with positive gain makes the node a leaf.
DecisionTree tree_fit(const Dataset& ds, std::span<const std::size_t> sample,
                      const std::function<std::uint64_t()>& draw, const ForestConfig& cfg);

template <WordSource G>
DecisionTree tree_fit(const Dataset& ds, std::span<const std::size_t> sample, G& gen,
                      const ForestConfig& cfg) {
  return tree_fit(ds, sample, std::function<std::uint64_t()>([&gen] { return gen(); }), cfg);
}

// Bootstrap sample of size n, one word per draw.
std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& gen);

class ForestModel final : public Model {
 public:
  ForestModel(std::vector<DecisionTree> trees, ForestConfig cfg, std::size_t num_attributes,
              std::size_t training_size);

  std::size_t arity() const noexcept override { return num_attributes_; }
  // Arithmetic mean of the tree distributions, accumulated in tree order.
  ProbabilityVector predict(std::span<const double> features) const override;
  void save(BinaryWriter& out) const override;
  static ForestModel load(BinaryReader& in);

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestConfig& config() const noexcept { return cfg_; }
  std::size_t training_size() const noexcept { return training_size_; }

 private:
  std::vector<DecisionTree> trees_;
  ForestConfig cfg_;
  std::size_t num_attributes_;
  std::size_t training_size_;
};

// Tree i is grown from Rng(derive_stream(cfg.seed, i)): first N bootstrap
// draws, then its induction draws. Trees are trained on up to `threads`
// workers; the result does not depend on the thread count.
// Throws DatasetError on an empty dataset.
ForestModel forest_fit(const Dataset& ds, const ForestConfig& cfg, unsigned threads = 0);

}  // namespace eegvote
