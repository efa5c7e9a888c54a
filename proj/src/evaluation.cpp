#include "eegvote/evaluation.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "eegvote/errors.hpp"
#include "eegvote/folds.hpp"
#include "eegvote/rng.hpp"

namespace eegvote {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <class E>
[[noreturn]] void rethrow_with_fold(std::size_t fold, const std::exception& e) {
  throw E("fold " + std::to_string(fold) + ": " + e.what());
}

}  // namespace

EvalReport cross_validate(const ClassifierSpec& spec, const Dataset& ds, const CvOptions& options) {
  const FoldPlan plan = stratified_folds(ds, options.folds, options.seed);

  EvalReport report;
  report.spec = to_string(spec);
  report.dataset_digest = ds.digest();
  report.instances = ds.size();
  report.folds = options.folds;
  report.seed = options.seed;
  report.predictions.resize(ds.size());

  std::vector<ScoredPrediction> pooled;
  pooled.reserve(ds.size());
  std::vector<bool> tested(ds.size(), false);

  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& fold = plan.folds[f];
    const Dataset train = ds.subset(fold.train);
    const Dataset test = ds.subset(fold.test);

    FoldResult result;
    result.fold = f;
    result.train_size = train.size();
    result.test_size = test.size();

    std::vector<ProbabilityVector> probs;
    try {
      auto start = Clock::now();
      const auto model = fit_model(spec, train, derive_stream(options.seed, f), options.threads);
      result.fit_seconds = seconds_since(start);
      start = Clock::now();
      probs = model->predict_all(test, options.threads);
      result.predict_seconds = seconds_since(start);
    } catch (const DatasetError& e) {
      rethrow_with_fold<DatasetError>(f, e);
    } catch (const SpecError& e) {
      rethrow_with_fold<SpecError>(f, e);
    } catch (const ModelError& e) {
      rethrow_with_fold<ModelError>(f, e);
    } catch (const std::invalid_argument& e) {
      rethrow_with_fold<SpecError>(f, e);
    }

    std::vector<ScoredPrediction> scored;
    std::vector<LabelPair> pairs;
    for (std::size_t t = 0; t < test.size(); ++t) {
      const std::size_t row = fold.test[t];
      if (tested[row]) throw InvariantError("instance tested twice");
      tested[row] = true;
      report.predictions[row] = probs[t];
      scored.push_back({probs[t], test.label(t)});
      pairs.emplace_back(test.label(t), argmax_label(probs[t]));
    }
    result.confusion = confusion_matrix(pairs);
    result.accuracy = accuracy(result.confusion);
    result.mae = mae(scored);
    pooled.insert(pooled.end(), scored.begin(), scored.end());
    report.confusion += result.confusion;
    report.fit_seconds += result.fit_seconds;
    report.predict_seconds += result.predict_seconds;
    report.per_fold.push_back(result);
  }

  if (!std::all_of(tested.begin(), tested.end(), [](bool b) { return b; })) {
    throw InvariantError("some instance was never tested");
  }
  std::vector<LabelPair> all_pairs;
  all_pairs.reserve(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    all_pairs.emplace_back(ds.label(i), argmax_label(report.predictions[i]));
  }
  if (confusion_matrix(all_pairs) != report.confusion) {
    throw InvariantError("pooled confusion differs from the sum of fold confusions");
  }
  report.accuracy = accuracy(report.confusion);
  report.mae = mae(pooled);
  return report;
}

ComparisonTable compare_report(std::span<const EvalReport> reports) {
  ComparisonTable table;
  if (reports.empty()) return table;
  table.dataset_digest = reports.front().dataset_digest;
  std::size_t best = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (reports[i].dataset_digest != table.dataset_digest) {
      throw DatasetError("reports were computed on different datasets");
    }
    if (reports[i].accuracy > reports[best].accuracy) best = i;
    table.rows.push_back({reports[i].spec, 100.0 * reports[i].accuracy, reports[i].mae, false});
  }
  table.rows[best].best = true;
  return table;
}

}  // namespace eegvote
