#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "eegvote/errors.hpp"
#include "eegvote/forest.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

namespace eegvote {
namespace {

std::vector<std::size_t> all_rows(const Dataset& ds) {
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

void expect_same_structure(const DecisionTree& tree, const std::vector<oracle::OracleNode>& expect) {
  ASSERT_EQ(tree.nodes().size(), expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) {
    const auto& got = tree.nodes()[i];
    EXPECT_EQ(got.is_leaf(), expect[i].leaf) << "node " << i;
    EXPECT_EQ(got.counts[0], expect[i].counts[0]) << "node " << i;
    EXPECT_EQ(got.counts[1], expect[i].counts[1]) << "node " << i;
    if (!expect[i].leaf && !got.is_leaf()) {
      EXPECT_EQ(got.attribute, expect[i].attribute) << "node " << i;
      EXPECT_EQ(got.threshold, expect[i].threshold) << "node " << i;
      EXPECT_EQ(got.left, static_cast<std::uint32_t>(expect[i].left));
      EXPECT_EQ(got.right, static_cast<std::uint32_t>(expect[i].right));
    }
  }
}

TEST(TreeFit, PureSampleIsOneLeaf) {
  const auto ds = fixtures::counted_dataset(5, 0);
  oracle::ScriptedWords words({});
  const auto tree = tree_fit(ds, all_rows(ds), words, ForestConfig{});
  ASSERT_EQ(tree.nodes().size(), 1U);
  EXPECT_TRUE(tree.root().is_leaf());
  EXPECT_EQ(words.consumed(), 0U);
}

TEST(TreeFit, SingleCandidateSplit) {
  const auto ds = fixtures::counted_dataset(1, 1);  // (0, Open), (1, Closed)
  oracle::ScriptedWords words({0});
  const auto tree = tree_fit(ds, all_rows(ds), words, ForestConfig{});
  ASSERT_EQ(tree.nodes().size(), 3U);
  EXPECT_EQ(tree.root().attribute, 0U);
  EXPECT_EQ(tree.root().threshold, 0.5);
  EXPECT_DOUBLE_EQ(tree.root().gain, 1.0);
  EXPECT_EQ(tree.nodes()[tree.root().left].counts[0], 1U);
  EXPECT_EQ(tree.nodes()[tree.root().right].counts[1], 1U);
}

TEST(TreeFit, MatchesExhaustiveOracleWithScriptedWords) {
  std::mt19937_64 gen(12);
  int trees_checked = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t n = 4 + seed % 7;  // 4..10 instances
    const std::size_t m = 2 + seed % 3;
    const auto ds = seed % 2 ? fixtures::gridded_dataset(n, m, seed, 4)
                             : fixtures::random_dataset(n, m, seed);
    ForestConfig cfg;
    cfg.feature_subset_size = 1 + seed % m;
    std::vector<std::size_t> sample = all_rows(ds);
    if (seed % 3 == 0) {
      for (auto& r : sample) r = gen() % n;  // bootstrap-style multiset
    }
    std::vector<std::uint64_t> script(256);
    for (auto& w : script) w = gen();

    oracle::ScriptedWords words(script);
    const auto tree = tree_fit(ds, sample, words, cfg);

    oracle::ScriptedChooser chooser(script, m, cfg.feature_subset_size);
    std::vector<oracle::OracleNode> expect;
    oracle::grow_tree(ds, sample, 1, chooser, expect);

    expect_same_structure(tree, expect);
    EXPECT_EQ(words.consumed(), chooser.consumed()) << "seed " << seed;
    ++trees_checked;
  }
  EXPECT_EQ(trees_checked, 60);
}

TEST(TreeFit, EightInstanceFixture) {
  Dataset ds(fixtures::attribute_names(2));
  const double rows[8][2] = {{1, 5}, {2, 3}, {3, 8}, {4, 1}, {5, 7}, {6, 2}, {7, 6}, {8, 4}};
  const int closed[8] = {0, 0, 1, 0, 1, 1, 1, 0};
  for (int i = 0; i < 8; ++i) ds.add(rows[i], closed[i] ? Label::Closed : Label::Open);
  const std::vector<std::uint64_t> script = {oracle::word_selecting(1, 2), oracle::word_selecting(0, 2),
                                             oracle::word_selecting(1, 2), oracle::word_selecting(0, 2),
                                             oracle::word_selecting(1, 2), oracle::word_selecting(0, 2)};
  ForestConfig cfg;
  cfg.feature_subset_size = 1;
  oracle::ScriptedWords words(script);
  const auto tree = tree_fit(ds, all_rows(ds), words, cfg);
  oracle::ScriptedChooser chooser(script, 2, 1);
  std::vector<oracle::OracleNode> expect;
  oracle::grow_tree(ds, all_rows(ds), 1, chooser, expect);
  expect_same_structure(tree, expect);
  EXPECT_EQ(tree.root().attribute, 1U);
}

TEST(TreeFit, SplitGainsArePositiveAndChildrenRespectThreshold) {
  const auto ds = fixtures::random_dataset(300, 5, 21);
  Rng rng(3);
  ForestConfig cfg;
  const auto tree = tree_fit(ds, all_rows(ds), rng, cfg);
  std::size_t leaf_total = 0;
  for (const auto& node : tree.nodes()) {
    if (node.is_leaf()) {
      leaf_total += node.counts[0] + node.counts[1];
      EXPECT_GE(node.counts[0] + node.counts[1], cfg.min_leaf);
    } else {
      EXPECT_GT(node.gain, 0.0);
    }
  }
  EXPECT_EQ(leaf_total, ds.size());
}

TEST(TreeFit, HonorsMaxDepthAndMinLeaf) {
  const auto ds = fixtures::random_dataset(200, 4, 8);
  Rng a(1);
  ForestConfig shallow;
  shallow.max_depth = 2;
  EXPECT_LE(tree_fit(ds, all_rows(ds), a, shallow).depth(), 2U);
  Rng b(1);
  ForestConfig wide;
  wide.min_leaf = 10;
  for (const auto& node : tree_fit(ds, all_rows(ds), b, wide).nodes()) {
    if (node.is_leaf()) EXPECT_GE(node.counts[0] + node.counts[1], 10U);
  }
}

TEST(TreePredict, LaplaceLeavesAndRouting) {
  TreeNode leaf3;
  leaf3.counts = {3, 0};
  EXPECT_EQ(DecisionTree({leaf3}).predict(std::vector<double>{0.0}), ProbabilityVector(0.8, 0.2));
  TreeNode leaf11;
  leaf11.counts = {1, 1};
  EXPECT_EQ(DecisionTree({leaf11}).predict(std::vector<double>{0.0}), ProbabilityVector(0.5, 0.5));

  TreeNode root;
  root.attribute = 0;
  root.threshold = 0.5;
  root.left = 1;
  root.right = 2;
  TreeNode right;
  right.counts = {0, 4};
  const DecisionTree tree({root, leaf3, right});
  EXPECT_EQ(tree.predict(std::vector<double>{0.2}), ProbabilityVector(0.8, 0.2));
  EXPECT_EQ(tree.predict(std::vector<double>{0.5}).closed(), 5.0 / 6.0);
}

TEST(Bootstrap, UniqueFractionNearExpectation) {
  Rng rng(2024);
  double total = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto sample = bootstrap_sample(1000, rng);
    ASSERT_EQ(sample.size(), 1000U);
    total += static_cast<double>(std::set<std::size_t>(sample.begin(), sample.end()).size()) / 1000.0;
    EXPECT_NEAR(static_cast<double>(std::set<std::size_t>(sample.begin(), sample.end()).size()) / 1000.0,
                1.0 - std::exp(-1.0), 0.05);
  }
  EXPECT_NEAR(total / 20.0, 1.0 - std::exp(-1.0), 0.01);
}

TEST(ForestFit, TreeCountAndStreamLayout) {
  const auto ds = fixtures::random_dataset(40, 4, 5);
  ForestConfig cfg;
  cfg.seed = 77;
  const auto forest = forest_fit(ds, cfg, 2);
  ASSERT_EQ(forest.trees().size(), 180U);
  // Each tree replays from its own stream: bootstrap first, then induction.
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{179}}) {
    Rng rng(derive_stream(cfg.seed, i));
    const auto sample = bootstrap_sample(ds.size(), rng);
    EXPECT_EQ(tree_fit(ds, sample, rng, cfg), forest.trees()[i]) << "tree " << i;
  }
}

TEST(ForestFit, SingleInstanceGivesLeaves) {
  Dataset ds(fixtures::attribute_names(3));
  ds.add(std::vector<double>{1.0, 2.0, 3.0}, Label::Open);
  ForestConfig cfg;
  cfg.n_trees = 10;
  const auto forest = forest_fit(ds, cfg);
  for (const auto& t : forest.trees()) EXPECT_EQ(t.nodes().size(), 1U);
  EXPECT_EQ(argmax_label(forest.predict(std::vector<double>{9.0, 9.0, 9.0})), Label::Open);
  EXPECT_THROW(forest_fit(Dataset(fixtures::attribute_names(3)), cfg), DatasetError);
}

TEST(ForestFit, DeterministicAcrossThreadCounts) {
  const auto ds = fixtures::random_dataset(300, 6, 17);
  const auto probe = fixtures::random_dataset(100, 6, 18);
  ForestConfig cfg;
  cfg.n_trees = 40;
  cfg.seed = 9;
  const auto reference = forest_fit(ds, cfg, 1).predict_all(probe, 1);
  for (unsigned threads : {2U, 3U, 8U, 0U}) {
    const auto forest = forest_fit(ds, cfg, threads);
    EXPECT_EQ(forest.predict_all(probe, threads), reference) << threads << " threads";
  }
}

TEST(ForestFit, FitsSeparableTrainingSetExactly) {
  const auto ds = fixtures::gaussian_blobs(60, 3, 6.0, 4);
  ForestConfig cfg;
  cfg.n_trees = 64;
  const auto forest = forest_fit(ds, cfg);
  const auto out = forest.predict_all(ds, 0);
  for (std::size_t i = 0; i < ds.size(); ++i) EXPECT_EQ(argmax_label(out[i]), ds.label(i));
}

TEST(ForestPredict, MeanOfTreesInAnyOrder) {
  TreeNode open_leaf;
  open_leaf.counts = {1000000, 0};
  TreeNode closed_leaf;
  closed_leaf.counts = {0, 1000000};
  const ForestModel two({DecisionTree({open_leaf}), DecisionTree({closed_leaf})}, {}, 1, 2);
  const auto mid = two.predict(std::vector<double>{0.0});
  EXPECT_DOUBLE_EQ(mid.open(), 0.5);

  // Hand-summed per-tree outputs for a 5-tree forest on 12 instances.
  const auto ds = fixtures::random_dataset(12, 3, 40);
  ForestConfig cfg;
  cfg.n_trees = 5;
  cfg.seed = 3;
  const auto forest = forest_fit(ds, cfg, 1);
  auto trees = forest.trees();
  std::reverse(trees.begin(), trees.end());
  const ForestModel reversed(trees, cfg, 3, 12);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    long double sum = 0;
    for (const auto& t : forest.trees()) sum += t.predict(ds.features(i)).open();
    EXPECT_NEAR(forest.predict(ds.features(i)).open(), static_cast<double>(sum / 5), 1e-15);
    EXPECT_NEAR(reversed.predict(ds.features(i)).open(), forest.predict(ds.features(i)).open(), 1e-15);
  }
}

TEST(ForestConfigTest, SubsetSizeDefaultsAndLimits) {
  EXPECT_EQ(resolved_subset_size({}, 14), 4U);
  EXPECT_EQ(resolved_subset_size({}, 1), 1U);
  EXPECT_EQ(resolved_subset_size({}, 8), 4U);
  ForestConfig big;
  big.feature_subset_size = 5;
  EXPECT_THROW(resolved_subset_size(big, 4), std::invalid_argument);
}

}  // namespace
}  // namespace eegvote
