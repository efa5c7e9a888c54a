#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eegvote/classifier.hpp"
#include "eegvote/dataset.hpp"
#include "eegvote/metrics.hpp"

namespace eegvote {

inline constexpr std::string_view kToolName = "eegvote";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = all cores
};

struct FoldResult {
  std::size_t fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  ConfusionMatrix confusion;
  double accuracy = 0.0;
  double mae = 0.0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

struct EvalReport {
  std::string spec;
  std::uint64_t dataset_digest = 0;
  std::size_t instances = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;

  // Pooled over the union of all test folds.
  double accuracy = 0.0;
  double mae = 0.0;
  ConfusionMatrix confusion;
  std::vector<FoldResult> per_fold;

  // Out-of-fold probabilities indexed by dataset row.
  std::vector<ProbabilityVector> predictions;

  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
};

// Stratified k-fold cross-validation. Fold f trains a fresh model with seed
// derive_stream(options.seed, f) and predicts its test rows; metrics are
// pooled over all test predictions. Results, apart from timings, depend only
// on (spec, ds, folds, seed).
//
// Errors keep their type (DatasetError, SpecError, ...) with the fold index
// prepended; an invalid member setting surfaces as SpecError.
EvalReport cross_validate(const ClassifierSpec& spec, const Dataset& ds, const CvOptions& options);

struct ComparisonRow {
  std::string spec;
  double accuracy_pct = 0.0;
  double mae = 0.0;
  bool best = false;
};

struct ComparisonTable {
  std::uint64_t dataset_digest = 0;
  std::vector<ComparisonRow> rows;
};

// Rows in input order; the first row with the highest accuracy is flagged.
// Throws DatasetError when the reports come from different datasets.
ComparisonTable compare_report(std::span<const EvalReport> reports);

}  // namespace eegvote
