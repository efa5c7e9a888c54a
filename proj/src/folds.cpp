#include "eegvote/folds.hpp"

#include <span>

#include "eegvote/errors.hpp"
#include "eegvote/rng.hpp"

namespace eegvote {

FoldPlan stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw DatasetError("fold count must be at least 2, got " + std::to_string(k));
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const auto n = ds.class_counts()[c];
    if (n > 0 && n < k) {
      throw DatasetError("class " + std::string(label_name(label_from_index(c))) + " has " +
                         std::to_string(n) + " instances, fewer than " + std::to_string(k) +
                         " folds");
    }
  }
  if (ds.size() < k) throw DatasetError("dataset smaller than fold count");

  Rng rng(seed);
  std::vector<std::size_t> order;
  order.reserve(ds.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (index_of(ds.label(i)) == c) members.push_back(i);
    }
    shuffle(std::span<std::size_t>(members), rng);
    order.insert(order.end(), members.begin(), members.end());
  }

  std::vector<std::size_t> fold_of(ds.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) fold_of[order[pos]] = pos % k;

  FoldPlan plan{k, seed, std::vector<Fold>(k)};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t f = 0; f < k; ++f) {
      (f == fold_of[i] ? plan.folds[f].test : plan.folds[f].train).push_back(i);
    }
  }
  return plan;
}

}  // namespace eegvote
