#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "eegvote/evaluation.hpp"
#include "eegvote/metrics.hpp"

namespace eegvote {

std::string hex_digest(std::uint64_t digest);

// Confusion matrix in the "classified as" layout: columns are predicted
// (Open, Close), each row ends with its actual class.
std::string render_confusion(const ConfusionMatrix& cm);

std::string render_report_text(const EvalReport& report);

// Versioned report document ("schema": 1). Fields ending in "_seconds" are
// timings and the only ones allowed to differ between identical runs; with
// include_timing = false they are omitted.
nlohmann::json report_to_json(const EvalReport& report, bool include_timing = true);

std::string render_table_text(const ComparisonTable& table);
// Header "spec,accuracy_pct,mae".
std::string render_table_csv(const ComparisonTable& table);
nlohmann::json table_to_json(const ComparisonTable& table);

}  // namespace eegvote
