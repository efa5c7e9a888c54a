#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eegvote/dataset.hpp"
#include "eegvote/model.hpp"

namespace eegvote {

// Blend is a percentage in [0, 100]: 0 pulls each attribute's kernel down to
// the nearest training value, 100 spreads it evenly over all N values.
struct KStarConfig {
  int blend = 20;
};

struct ScaleSolution {
  double x0 = 1.0;     // kernel scale for this (attribute, query)
  double n_eff = 1.0;  // effective instance count reached at x0
  int iterations = 0;  // bisection steps taken
};

// Scale solver settings. The bracket is relative to the largest
// |value - query|; bisection runs on log(x0).
inline constexpr double kScaleBracketLow = 1e-12;
inline constexpr double kScaleBracketHigh = 1e6;
inline constexpr int kScaleMaxIterations = 128;
inline constexpr double kScaleRelativeTolerance = 1e-12;

// Target effective count 1 + (blend/100)(N - 1).
double target_effective_count(std::size_t n, int blend) noexcept;

// (sum p)^2 / sum p^2 with p_i = exp(-|v_i - query| / x0).
double effective_count(std::span<const double> values, double query, double x0) noexcept;

// Finds x0 with effective_count(values, query, x0) equal to the blend target.
// When the target lies outside what the bracket can reach, returns the
// nearer bracket end. When every value is at the same distance from the
// query, weights are uniform for any x0 and x0 = max(distance, 1) is returned.
ScaleSolution solve_scale(std::span<const double> values, double query, int blend);

// Normalized transformation weights p_i / sum p.
std::vector<double> attribute_weights(std::span<const double> values, double query, double x0);

class KStarModel final : public Model {
 public:
  // Throws DatasetError on empty or single-class data, std::invalid_argument
  // on a blend outside [0, 100].
  KStarModel(Dataset train, KStarConfig cfg);

  std::size_t arity() const noexcept override { return train_.num_attributes(); }
  ProbabilityVector predict(std::span<const double> features) const override;
  void save(BinaryWriter& out) const override;
  static KStarModel load(BinaryReader& in);

  const KStarConfig& config() const noexcept { return cfg_; }
  std::size_t training_size() const noexcept { return train_.size(); }

 private:
  // Distinct sorted values of one attribute with multiplicities, and each
  // training instance's position in that table.
  struct AttributeTable {
    std::vector<double> values;
    std::vector<double> counts;
    std::vector<std::uint32_t> rank;
  };

  Dataset train_;
  KStarConfig cfg_;
  std::vector<AttributeTable> tables_;
};

KStarModel kstar_fit(const Dataset& ds, KStarConfig cfg = {});

}  // namespace eegvote
