#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eegvote/baselines.hpp"
#include "eegvote/dataset.hpp"
#include "eegvote/forest.hpp"
#include "eegvote/kstar.hpp"
#include "eegvote/model.hpp"

namespace eegvote {

struct ClassifierSpec;

struct VoteConfig {
  std::vector<ClassifierSpec> members;
};

// Parsed classifier description. Grammar:
//
//   spec   := single | "vote(" single ("," single)* ")"
//   single := "zeror" | "hmm-standin" | name [":" key "=" value ("," key "=" value)*]
//   name   := "svm" | "rbf" | "kstar" | "forest"
//
// Keys: svm {lambda, epochs}; rbf {k, ridge, epochs, lr, iters};
// kstar {b}; forest {trees, features, min_leaf, depth}. Inside vote(...) a
// comma-separated "key=value" without a name continues the previous member.
struct ClassifierSpec {
  std::variant<ZeroRConfig, SvmConfig, RbfConfig, KStarConfig, ForestConfig, VoteConfig> config;
};

// Throws SpecError with a message naming the offending token.
ClassifierSpec parse_spec(std::string_view text);

// Canonical text; parse_spec(to_string(s)) reproduces s.
std::string to_string(const ClassifierSpec& spec);

// Fits the described classifier. Stochastic members get seeds derived from
// `seed`; `threads` bounds internal parallelism (0 = all cores).
std::unique_ptr<Model> fit_model(const ClassifierSpec& spec, const Dataset& ds,
                                 std::uint64_t seed, unsigned threads = 0);

// Reads a payload written by Model::save for a model of the given spec.
std::unique_ptr<Model> load_model(const ClassifierSpec& spec, BinaryReader& in);

// Model container: "EEGM", format version byte, spec text, seed, payload.
inline constexpr std::uint8_t kModelFormatVersion = 1;

struct StoredModel {
  ClassifierSpec spec;
  std::uint64_t seed = 0;
  std::unique_ptr<Model> model;
};

void save_model_file(const std::filesystem::path& path, const ClassifierSpec& spec,
                     std::uint64_t seed, const Model& model);
// Throws ModelError on bad magic, unsupported version, or corrupt payload.
StoredModel load_model_file(const std::filesystem::path& path);

}  // namespace eegvote
