#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "eegvote/errors.hpp"
#include "eegvote/preprocess.hpp"
#include "support/fixtures.hpp"

namespace eegvote {
namespace {

TEST(DetectOutliers, ConstantAttributesGiveNothing) {
  Dataset ds(fixtures::attribute_names(3));
  const std::vector<double> row = {5.0, -2.0, 7.0};
  for (int i = 0; i < 20; ++i) ds.add(row, i % 2 == 0 ? Label::Open : Label::Closed);
  EXPECT_TRUE(detect_outliers(ds).empty());
  EXPECT_TRUE(detect_outliers(Dataset(fixtures::attribute_names(2))).empty());
}

TEST(DetectOutliers, FindsAppendedExtremeRow) {
  auto ds = fixtures::random_dataset(500, 4, 3, 0.5, 4000.0, 4100.0);
  // Direct scan: the uniform band has IQR ~50, so 100*IQR ~ 5000 from the median.
  const std::vector<double> spike = {4050.0, 309231.0, 4050.0, 4050.0};
  ds.add(spike, Label::Closed);
  const auto found = detect_outliers(ds);
  ASSERT_EQ(found.size(), 1U);
  EXPECT_EQ(found[0], 500U);
}

TEST(DetectOutliers, HonorsMultiplier) {
  auto ds = fixtures::random_dataset(400, 2, 9, 0.5, 0.0, 1.0);
  const std::vector<double> mild = {3.0, 0.5};
  ds.add(mild, Label::Open);
  EXPECT_TRUE(detect_outliers(ds).empty());
  EXPECT_EQ(detect_outliers(ds, {2.0}).size(), 1U);
}

TEST(DetectOutliers, InvariantUnderPermutation) {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    auto ds = fixtures::random_dataset(300, 3, 100 + trial, 0.5, 0.0, 1.0);
    const std::vector<double> a = {50.0, 0.5, 0.5};
    const std::vector<double> b = {0.5, 0.5, -80.0};
    ds.add(a, Label::Open);
    ds.add(b, Label::Closed);

    std::vector<std::size_t> perm(ds.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    const auto shuffled = ds.subset(perm);

    auto original = detect_outliers(ds, {3.0});
    auto permuted = detect_outliers(shuffled, {3.0});
    for (auto& i : permuted) i = perm[i];
    std::sort(permuted.begin(), permuted.end());
    EXPECT_EQ(original, permuted);
    EXPECT_GE(original.size(), 2U);
  }
}

TEST(StandardizationTest, HandArithmetic) {
  Dataset ds(fixtures::attribute_names(1));
  for (double v : {1.0, 2.0, 3.0}) ds.add(std::span<const double>(&v, 1), Label::Open);
  const auto s = Standardization::fit(ds);
  EXPECT_DOUBLE_EQ(s.mean()[0], 2.0);
  EXPECT_NEAR(s.stddev()[0], std::sqrt(2.0 / 3.0), 1e-15);  // 0.8165
  const double three = 3.0;
  EXPECT_NEAR(s.apply(std::span<const double>(&three, 1))[0], 1.2247448713915890, 1e-12);
}

TEST(StandardizationTest, ConstantColumnIsFloored) {
  Dataset ds(fixtures::attribute_names(2));
  for (int i = 0; i < 4; ++i) {
    const std::vector<double> row = {7.0, static_cast<double>(i)};
    ds.add(row, Label::Open);
  }
  const auto s = Standardization::fit(ds);
  EXPECT_EQ(s.stddev()[0], Standardization::kStddevFloor);
  const std::vector<double> row = {7.0, 1.0};
  EXPECT_EQ(s.apply(row)[0], 0.0);
}

TEST(StandardizationTest, TrainingColumnsBecomeZeroMeanUnitVariance) {
  const auto ds = fixtures::random_dataset(1000, 5, 4, 0.5, 4000.0, 4600.0);
  const auto s = Standardization::fit(ds);
  for (std::size_t a = 0; a < ds.num_attributes(); ++a) {
    double sum = 0.0;
    double sq = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      const double z = s.apply(ds.features(i))[a];
      sum += z;
      sq += z * z;
    }
    const double n = static_cast<double>(ds.size());
    EXPECT_NEAR(sum / n, 0.0, 1e-9);
    EXPECT_NEAR(std::sqrt(sq / n), 1.0, 1e-9);
  }
}

TEST(StandardizationTest, EmptyDatasetThrows) {
  EXPECT_THROW(Standardization::fit(Dataset(fixtures::attribute_names(2))), DatasetError);
}

}  // namespace
}  // namespace eegvote
