#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eegvote/classifier.hpp"
#include "eegvote/dataset_io.hpp"
#include "eegvote/errors.hpp"
#include "eegvote/evaluation.hpp"
#include "eegvote/preprocess.hpp"
#include "eegvote/report.hpp"

namespace eegvote::cli {

namespace {

constexpr const char* kCorpusHelp =
    "The EEG eye-state corpus (14980 instances, 14 features) is not bundled.\n"
    "Download 'EEG Eye State.arff' from the UCI Machine Learning Repository\n"
    "(dataset 264, https://archive.ics.uci.edu/dataset/264/eeg+eye+state),\n"
    "then pass it with --data PATH or set EEG_CORPUS=PATH.\n";

const std::vector<std::string> kReproduceSpecs = {
    "svm", "hmm-standin", "rbf", "vote(kstar:b=20,forest:trees=180)", "kstar:b=20",
    "forest:trees=180"};

struct RunConfig {
  std::string data;
  std::string spec;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  bool drop_outliers = false;
  unsigned threads = 0;
  std::string out;
  std::string format;
  std::string model;
};

std::string resolve_data_path(const RunConfig& cfg) {
  if (!cfg.data.empty()) return cfg.data;
  if (const char* env = std::getenv("EEG_CORPUS"); env != nullptr && *env != '\0') return env;
  throw DatasetError(std::string("no dataset given\n") + kCorpusHelp);
}

Dataset load(const RunConfig& cfg, std::ostream& err) {
  const auto path = resolve_data_path(cfg);
  if (!std::filesystem::exists(path)) {
    throw DatasetError("dataset '" + path + "' does not exist\n" + kCorpusHelp);
  }
  Dataset ds = load_dataset(path);
  if (cfg.drop_outliers) {
    const auto outliers = detect_outliers(ds);
    err << "dropping " << outliers.size() << " outlier instance(s)\n";
    ds = ds.without(outliers);
  }
  return ds;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os || !(os << content)) throw std::runtime_error("cannot write '" + path + "'");
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * fraction);
  return buf;
}

int cmd_inspect(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const Dataset ds = load(cfg, err);
  const auto dist = class_distribution(ds);
  const auto outliers = detect_outliers(ds);
  if (cfg.format == "json") {
    nlohmann::json j = {{"schema", kReportSchema},
                        {"instances", ds.size()},
                        {"attributes", ds.num_attributes()},
                        {"digest", hex_digest(ds.digest())},
                        {"classes",
                         {{"Open", {{"count", dist[0].count}, {"proportion", dist[0].proportion}}},
                          {"Closed", {{"count", dist[1].count}, {"proportion", dist[1].proportion}}}}},
                        {"outlier_candidates", outliers}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << ds.size() << " instances, " << ds.num_attributes() << " attributes, Open "
      << dist[0].count << " (" << percent(dist[0].proportion) << "), Closed " << dist[1].count
      << " (" << percent(dist[1].proportion) << "), " << outliers.size()
      << " outlier candidates\n";
  for (auto i : outliers) {
    out << "  outlier candidate: row " << i << " (" << label_name(ds.label(i)) << ")\n";
  }
  return kExitOk;
}

int cmd_cv(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = parse_spec(cfg.spec);
  const Dataset ds = load(cfg, err);
  const auto report = cross_validate(spec, ds, {cfg.folds, cfg.seed, cfg.threads});
  out << render_report_text(report);
  if (!cfg.out.empty()) {
    const auto format = cfg.format.empty() ? std::string("json") : cfg.format;
    if (format == "json") {
      write_file(cfg.out, report_to_json(report).dump(2) + "\n");
    } else if (format == "csv") {
      const EvalReport one[] = {report};
      write_file(cfg.out, render_table_csv(compare_report(one)));
    } else {
      write_file(cfg.out, render_report_text(report));
    }
  }
  return kExitOk;
}

int cmd_reproduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<ClassifierSpec> specs;
  for (const auto& s : kReproduceSpecs) specs.push_back(parse_spec(s));
  const Dataset ds = load(cfg, err);

  std::vector<EvalReport> reports;
  for (const auto& spec : specs) {
    err << "running " << to_string(spec) << " ...\n";
    reports.push_back(cross_validate(spec, ds, {cfg.folds, cfg.seed, cfg.threads}));
    const auto& r = reports.back();
    out << "== " << r.spec << "\n" << render_confusion(r.confusion) << "accuracy "
        << percent(r.accuracy) << ", MAE " << r.mae << "\n\n";
  }
  const auto table = compare_report(reports);
  out << render_table_text(table);

  if (!cfg.out.empty()) {
    const auto format = cfg.format.empty() ? std::string("json") : cfg.format;
    if (format == "csv") {
      write_file(cfg.out, render_table_csv(table));
    } else if (format == "text") {
      write_file(cfg.out, render_table_text(table));
    } else {
      auto j = table_to_json(table);
      j["reports"] = nlohmann::json::array();
      for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
      write_file(cfg.out, j.dump(2) + "\n");
    }
  }
  return kExitOk;
}

int cmd_train(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = parse_spec(cfg.spec);
  const Dataset ds = load(cfg, err);
  const auto model = fit_model(spec, ds, cfg.seed, cfg.threads);
  save_model_file(cfg.out, spec, cfg.seed, *model);
  out << "trained " << to_string(spec) << " on " << ds.size() << " instances -> " << cfg.out
      << "\n";
  return kExitOk;
}

int cmd_predict(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto stored = load_model_file(cfg.model);
  const Dataset ds = load(cfg, err);
  if (ds.num_attributes() != stored.model->arity()) {
    throw ModelError("dataset has " + std::to_string(ds.num_attributes()) +
                     " attributes, model expects " + std::to_string(stored.model->arity()));
  }
  const auto probs = stored.model->predict_all(ds, cfg.threads);
  std::ostringstream os;
  os << "index,p_open,p_closed,predicted_label\n";
  for (std::size_t i = 0; i < probs.size(); ++i) {
    os << i << ',' << format_double(probs[i].open()) << ',' << format_double(probs[i].closed())
       << ',' << index_of(argmax_label(probs[i])) << '\n';
  }
  if (cfg.out.empty()) {
    out << os.str();
  } else {
    write_file(cfg.out, os.str());
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"EEG eye-state classification benchmark"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_data = [&](CLI::App* sub) {
    sub->add_option("--data", cfg.data, "Dataset path (.arff or .csv); defaults to $EEG_CORPUS");
    sub->add_flag("--drop-outliers", cfg.drop_outliers, "Remove gross outliers before use");
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  };
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"text", "csv", "json"}));
  };

  auto* inspect = app.add_subcommand("inspect", "Summarize a dataset");
  add_data(inspect);
  add_format(inspect);

  auto* cv = app.add_subcommand("cv", "Stratified cross-validation of one classifier");
  add_data(cv);
  add_run(cv);
  add_format(cv);
  cv->add_option("--spec", cfg.spec, "Classifier spec, e.g. vote(kstar:b=20,forest:trees=180)")
      ->required();
  cv->add_option("--folds", cfg.folds, "Fold count")->capture_default_str();
  cv->add_option("--out", cfg.out, "Write the report here");

  auto* reproduce = app.add_subcommand("reproduce", "Run the full comparison table");
  add_data(reproduce);
  add_run(reproduce);
  add_format(reproduce);
  reproduce->add_option("--folds", cfg.folds, "Fold count")->capture_default_str();
  reproduce->add_option("--out", cfg.out, "Write the table and reports here");

  auto* train = app.add_subcommand("train", "Fit a classifier on a whole dataset and save it");
  add_data(train);
  add_run(train);
  train->add_option("--spec", cfg.spec, "Classifier spec")->required();
  train->add_option("--out", cfg.out, "Model file to write")->required();

  auto* predict = app.add_subcommand("predict", "Score a dataset with a saved model");
  add_data(predict);
  predict->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  predict->add_option("--model", cfg.model, "Model file")->required();
  predict->add_option("--out", cfg.out, "Predictions CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cfg.folds < 2) throw DatasetError("--folds must be at least 2");
    if (inspect->parsed()) return cmd_inspect(cfg, out, err);
    if (cv->parsed()) return cmd_cv(cfg, out, err);
    if (reproduce->parsed()) return cmd_reproduce(cfg, out, err);
    if (train->parsed()) return cmd_train(cfg, out, err);
    if (predict->parsed()) return cmd_predict(cfg, out, err);
  } catch (const DatasetError& e) {
    err << "dataset error: " << e.what() << "\n";
    return kExitDataset;
  } catch (const SpecError& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << "\n";
    return kExitModel;
  } catch (const InvariantError& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    err << "spec error: " << e.what() << "\n";
    return kExitSpec;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}

}  // namespace eegvote::cli
