#include "eegvote/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace eegvote {

namespace {

nlohmann::json confusion_json(const ConfusionMatrix& cm) {
  return {{cm.counts[0][0], cm.counts[0][1]}, {cm.counts[1][0], cm.counts[1][1]}};
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string hex_digest(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(digest));
  return buf;
}

std::string render_confusion(const ConfusionMatrix& cm) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%8s %8s   <- classified as\n", "Open", "Close");
  out += buf;
  std::snprintf(buf, sizeof(buf), "%8llu %8llu   Open\n",
                static_cast<unsigned long long>(cm.counts[0][0]),
                static_cast<unsigned long long>(cm.counts[0][1]));
  out += buf;
  std::snprintf(buf, sizeof(buf), "%8llu %8llu   Close\n",
                static_cast<unsigned long long>(cm.counts[1][0]),
                static_cast<unsigned long long>(cm.counts[1][1]));
  out += buf;
  return out;
}

std::string render_report_text(const EvalReport& r) {
  std::ostringstream os;
  os << "classifier: " << r.spec << "\n"
     << "instances:  " << r.instances << " (digest " << hex_digest(r.dataset_digest) << ")\n"
     << "protocol:   stratified " << r.folds << "-fold cross-validation, seed " << r.seed << "\n\n"
     << render_confusion(r.confusion) << "\n"
     << "correctly classified: " << r.confusion.trace() << " of " << r.confusion.total() << "\n"
     << "accuracy: " << fixed(100.0 * r.accuracy, 2) << "%   MAE: " << fixed(r.mae, 4) << "\n"
     << "time: fit " << fixed(r.fit_seconds, 2) << " s, predict " << fixed(r.predict_seconds, 2)
     << " s\n";
  return os.str();
}

nlohmann::json report_to_json(const EvalReport& r, bool include_timing) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.per_fold) {
    nlohmann::json jf = {{"fold", f.fold},
                         {"train", f.train_size},
                         {"test", f.test_size},
                         {"accuracy", f.accuracy},
                         {"mae", f.mae},
                         {"confusion", confusion_json(f.confusion)}};
    if (include_timing) {
      jf["fit_seconds"] = f.fit_seconds;
      jf["predict_seconds"] = f.predict_seconds;
    }
    folds.push_back(std::move(jf));
  }
  nlohmann::json j = {{"schema", kReportSchema},
                      {"tool", kToolName},
                      {"version", kToolVersion},
                      {"spec", r.spec},
                      {"dataset", {{"digest", hex_digest(r.dataset_digest)}, {"instances", r.instances}}},
                      {"folds", r.folds},
                      {"seed", r.seed},
                      {"accuracy", r.accuracy},
                      {"accuracy_pct", 100.0 * r.accuracy},
                      {"mae", r.mae},
                      {"confusion", confusion_json(r.confusion)},
                      {"per_fold", std::move(folds)}};
  if (include_timing) {
    j["timing"] = {{"fit_seconds", r.fit_seconds}, {"predict_seconds", r.predict_seconds}};
  }
  return j;
}

std::string render_table_text(const ComparisonTable& table) {
  std::size_t width = 10;
  for (const auto& row : table.rows) width = std::max(width, row.spec.size());
  std::ostringstream os;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  os << pad("Classifier") << "  Accuracy (%)     MAE\n";
  for (const auto& row : table.rows) {
    std::string acc = fixed(row.accuracy_pct, 2);
    std::string mae = fixed(row.mae, 4);
    os << pad(row.spec) << "  " << std::string(12 - std::min<std::size_t>(12, acc.size()), ' ')
       << acc << "  " << std::string(6 - std::min<std::size_t>(6, mae.size()), ' ') << mae
       << (row.best ? "  *" : "") << "\n";
  }
  return os.str();
}

std::string render_table_csv(const ComparisonTable& table) {
  std::ostringstream os;
  os << "spec,accuracy_pct,mae\n";
  for (const auto& row : table.rows) {
    os << quote_csv(row.spec) << ',' << fixed(row.accuracy_pct, 4) << ',' << fixed(row.mae, 6)
       << "\n";
  }
  return os.str();
}

nlohmann::json table_to_json(const ComparisonTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"spec", row.spec},
                    {"accuracy_pct", row.accuracy_pct},
                    {"mae", row.mae},
                    {"best", row.best}});
  }
  return {{"schema", kReportSchema},
          {"tool", kToolName},
          {"version", kToolVersion},
          {"dataset_digest", hex_digest(table.dataset_digest)},
          {"rows", std::move(rows)}};
}

}  // namespace eegvote
