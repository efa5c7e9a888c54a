#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "eegvote/errors.hpp"
#include "eegvote/folds.hpp"
#include "support/fixtures.hpp"

namespace eegvote {
namespace {

// Checks partition, disjointness, train/test complement and the per-class
// balance bound for every fold.
void expect_valid_plan(const Dataset& ds, const FoldPlan& plan) {
  ASSERT_EQ(plan.folds.size(), plan.k);
  std::vector<int> seen(ds.size(), 0);
  for (const auto& fold : plan.folds) {
    EXPECT_TRUE(std::is_sorted(fold.test.begin(), fold.test.end()));
    EXPECT_EQ(fold.train.size() + fold.test.size(), ds.size());
    std::vector<bool> in_test(ds.size(), false);
    std::array<std::size_t, kNumClasses> per_class{};
    for (auto i : fold.test) {
      ++seen[i];
      in_test[i] = true;
      ++per_class[index_of(ds.label(i))];
    }
    for (auto i : fold.train) EXPECT_FALSE(in_test[i]);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double ideal = static_cast<double>(ds.class_counts()[c]) / static_cast<double>(plan.k);
      EXPECT_LE(std::abs(static_cast<double>(per_class[c]) - ideal), 1.0);
    }
  }
  for (int s : seen) EXPECT_EQ(s, 1);
}

TEST(StratifiedFolds, CorpusSizedPlan) {
  // Integer arithmetic: 8257 = 10*825 + 7 and 6723 = 10*672 + 3, dealt
  // round-robin over the concatenated classes, so every fold gets 1498 rows.
  const auto ds = fixtures::counted_dataset(8257, 6723);
  const auto plan = stratified_folds(ds, 10, 1);
  expect_valid_plan(ds, plan);
  std::size_t with_826 = 0;
  for (const auto& fold : plan.folds) {
    EXPECT_EQ(fold.test.size(), 1498U);
    std::size_t open = 0;
    for (auto i : fold.test) open += ds.label(i) == Label::Open ? 1 : 0;
    EXPECT_TRUE(open == 825 || open == 826) << open;
    with_826 += open == 826 ? 1 : 0;
  }
  EXPECT_EQ(with_826, 7U);
}

TEST(StratifiedFolds, TwoFoldsOnFourRows) {
  const auto ds = fixtures::counted_dataset(2, 2);
  const auto plan = stratified_folds(ds, 2, 5);
  for (const auto& fold : plan.folds) {
    ASSERT_EQ(fold.test.size(), 2U);
    EXPECT_NE(ds.label(fold.test[0]), ds.label(fold.test[1]));
  }
}

TEST(StratifiedFolds, DeterministicPerSeed) {
  const auto ds = fixtures::random_dataset(500, 2, 8);
  const auto a = stratified_folds(ds, 10, 42);
  const auto b = stratified_folds(ds, 10, 42);
  const auto c = stratified_folds(ds, 10, 43);
  for (std::size_t f = 0; f < 10; ++f) EXPECT_EQ(a.folds[f].test, b.folds[f].test);
  bool differs = false;
  for (std::size_t f = 0; f < 10; ++f) differs |= a.folds[f].test != c.folds[f].test;
  EXPECT_TRUE(differs);
}

TEST(StratifiedFolds, RandomizedInvariants) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> size(10, 10000);
  std::uniform_real_distribution<double> share(0.2, 0.8);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = trial == 0 ? 10 : (trial == 1 ? 10000 : size(gen));
    const auto ds = fixtures::random_dataset(n, 1, gen(), share(gen));
    const std::size_t k =
        std::min<std::size_t>({10, ds.class_counts()[0], ds.class_counts()[1]});
    if (k < 2) continue;
    expect_valid_plan(ds, stratified_folds(ds, k, gen()));
  }
}

TEST(StratifiedFolds, RejectsBadArguments) {
  const auto ds = fixtures::counted_dataset(20, 5);
  EXPECT_THROW(stratified_folds(ds, 1, 1), DatasetError);
  EXPECT_THROW(stratified_folds(ds, 6, 1), DatasetError);
  EXPECT_NO_THROW(stratified_folds(ds, 5, 1));
}

}  // namespace
}  // namespace eegvote
