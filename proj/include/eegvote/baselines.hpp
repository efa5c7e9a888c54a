#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "eegvote/dataset.hpp"
#include "eegvote/model.hpp"
#include "eegvote/preprocess.hpp"

namespace eegvote {

// ---------------------------------------------------------------------------
// Majority class

struct ZeroRConfig {
  // Emit (0.5, 0.5) instead of the class proportions. Argmax is unchanged
  // when Open is the majority (ties go to Open); only the probabilities, and
  // therefore MAE, differ.
  bool uniform = false;
};

class ZeroRModel final : public Model {
 public:
  ZeroRModel(std::size_t arity, ProbabilityVector proportions, bool uniform);

  std::size_t arity() const noexcept override { return arity_; }
  ProbabilityVector predict(std::span<const double> features) const override;
  void save(BinaryWriter& out) const override;
  static ZeroRModel load(BinaryReader& in);

  Label majority() const { return argmax_label(proportions_); }
  const ProbabilityVector& proportions() const noexcept { return proportions_; }

 private:
  std::size_t arity_;
  ProbabilityVector proportions_;
  bool uniform_;
};

// Throws DatasetError on an empty dataset.
ZeroRModel zeror_fit(const Dataset& ds, ZeroRConfig cfg = {});

// ---------------------------------------------------------------------------
// Linear SVM (stochastic subgradient descent on the L2-regularized hinge loss)

struct SvmConfig {
  double lambda = 1e-4;
  std::size_t epochs = 100;
};

// Hard classifier: emits (1, 0) or (0, 1) by the sign of the margin on
// standardized features, with a zero margin going to Open.
class SvmModel final : public Model {
 public:
  SvmModel(Standardization standardization, std::vector<double> weights, double bias,
           SvmConfig cfg);

  std::size_t arity() const noexcept override { return weights_.size(); }
  ProbabilityVector predict(std::span<const double> features) const override;
  void save(BinaryWriter& out) const override;
  static SvmModel load(BinaryReader& in);

  // w . standardize(x) + b; positive means Closed.
  double margin(std::span<const double> features) const;

  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  const Standardization& standardization() const noexcept { return standardization_; }

 private:
  Standardization standardization_;
  std::vector<double> weights_;
  double bias_;
  SvmConfig cfg_;
};

// Each epoch visits the training rows in a fresh seeded shuffle; step t uses
// learning rate 1 / (lambda * t). The bias is an extra constant-1 feature and
// is regularized with the weights. Throws DatasetError on empty or
// single-class data.
SvmModel svm_fit(const Dataset& ds, SvmConfig cfg = {}, std::uint64_t seed = 1);

// ---------------------------------------------------------------------------
// RBF network: per-class k-means centers, Gaussian basis, logistic output

struct RbfConfig {
  std::size_t clusters_per_class = 2;
  double ridge = 1e-8;
  std::size_t epochs = 500;
  double learning_rate = 0.01;
  std::size_t kmeans_iterations = 100;
};

inline constexpr double kRbfMinWidth = 0.1;

struct KMeansResult {
  std::vector<std::vector<double>> centers;
  std::vector<std::size_t> assignment;
  std::vector<double> rms_radius;  // per center, 0 for a lone member
  std::size_t iterations = 0;
};

// Lloyd iterations from k-means++ seeding. An emptied cluster is reseeded at
// the point farthest from its assigned center. Throws DatasetError when
// k == 0 or k exceeds the number of points.
KMeansResult kmeans(std::span<const std::vector<double>> points, std::size_t k,
                    std::size_t max_iterations, std::uint64_t seed);

struct LogisticFit {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> losses;  // regularized loss before each epoch, then final
};

// Full-batch gradient descent on mean log loss + (ridge/2)|w|^2 (bias not
// regularized), starting from zero. `targets` are 1 for Closed.
LogisticFit logistic_fit(std::span<const std::vector<double>> features,
                         std::span<const double> targets, double ridge, double learning_rate,
                         std::size_t epochs);

class RbfModel final : public Model {
 public:
  RbfModel(Standardization standardization, std::vector<std::vector<double>> centers,
           std::vector<double> widths, std::vector<double> weights, double bias);

  std::size_t arity() const noexcept override { return standardization_.arity(); }
  ProbabilityVector predict(std::span<const double> features) const override;
  void save(BinaryWriter& out) const override;
  static RbfModel load(BinaryReader& in);

  // exp(-|z - c|^2 / (2 sigma^2)) per center for a standardized input z.
  std::vector<double> activations(std::span<const double> standardized) const;

  const std::vector<std::vector<double>>& centers() const noexcept { return centers_; }
  const std::vector<double>& widths() const noexcept { return widths_; }

 private:
  Standardization standardization_;
  std::vector<std::vector<double>> centers_;
  std::vector<double> widths_;
  std::vector<double> weights_;
  double bias_;
};

// Throws DatasetError on empty or single-class data, or when a class has
// fewer members than clusters_per_class.
RbfModel rbf_fit(const Dataset& ds, RbfConfig cfg = {}, std::uint64_t seed = 1);

}  // namespace eegvote
