#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eegvote/dataset.hpp"

namespace eegvote {

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
};

// Stratified k-fold partition. Each class is shuffled with the seeded
// generator, the classes are concatenated in label order and dealt to folds
// round-robin, so every fold's per-class test count is floor or ceil of
// count/k and fold sizes differ by at most one.
//
// Throws DatasetError if k < 2 or some present class has fewer than k members.
FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace eegvote
