#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "eegvote/binary_io.hpp"
#include "eegvote/dataset.hpp"
#include "eegvote/probability.hpp"

namespace eegvote {

// Fitted classifier. Implementations are immutable after fitting, so
// predict is reentrant and may be called from many threads at once.
class Model {
 public:
  virtual ~Model() = default;

  // Number of features the model was trained on.
  virtual std::size_t arity() const noexcept = 0;

  // Throws ModelError when features.size() != arity().
  virtual ProbabilityVector predict(std::span<const double> features) const = 0;

  // One prediction per row of ds, in row order, computed on up to `threads`
  // workers (0 = all cores).
  virtual std::vector<ProbabilityVector> predict_all(const Dataset& ds, unsigned threads) const;

  virtual void save(BinaryWriter& out) const = 0;

 protected:
  void check_arity(std::span<const double> features) const;
};

// Dataset payload used by models that keep their training data.
void write_dataset(BinaryWriter& out, const Dataset& ds);
Dataset read_dataset(BinaryReader& in);

}  // namespace eegvote
