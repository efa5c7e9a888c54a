#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "eegvote/classifier.hpp"
#include "eegvote/model.hpp"

namespace eegvote {

// Average-of-probabilities vote. Member outputs are summed left to right in
// member order and divided by the member count.
class VoteModel final : public Model {
 public:
  // Throws std::invalid_argument on zero members or mixed arities.
  explicit VoteModel(std::vector<std::shared_ptr<const Model>> members);

  std::size_t arity() const noexcept override { return members_.front()->arity(); }
  ProbabilityVector predict(std::span<const double> features) const override;
  std::vector<ProbabilityVector> predict_all(const Dataset& ds, unsigned threads) const override;
  void save(BinaryWriter& out) const override;

  const std::vector<std::shared_ptr<const Model>>& members() const noexcept { return members_; }

 private:
  std::vector<std::shared_ptr<const Model>> members_;
};

// Elementwise mean of the given vectors in the declared accumulation order.
ProbabilityVector average_probabilities(std::span<const ProbabilityVector> outputs);

// Member i is fitted on the full training set with seed derive_stream(seed, i).
// Throws SpecError on zero members or a nested vote; member fit errors propagate.
VoteModel vote_fit(const Dataset& ds, const VoteConfig& cfg, std::uint64_t seed,
                   unsigned threads = 0);

}  // namespace eegvote
