#include "eegvote/classifier.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "eegvote/dataset_io.hpp"
#include "eegvote/ensemble.hpp"
#include "eegvote/errors.hpp"

namespace eegvote {

namespace {

std::string_view trim(std::string_view s) noexcept {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::uint64_t parse_uint(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw SpecError("value for '" + std::string(key) + "' must be a non-negative integer, got '" +
                    std::string(v) + "'");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view v) {
  double out = 0.0;
  if (!parse_double(v, out)) {
    throw SpecError("value for '" + std::string(key) + "' must be a number, got '" +
                    std::string(v) + "'");
  }
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw SpecError(message);
}

using Params = std::vector<std::pair<std::string_view, std::string_view>>;

Params parse_params(std::string_view name, const std::vector<std::string_view>& items) {
  Params out;
  for (auto item : items) {
    auto eq = item.find('=');
    require(eq != std::string_view::npos && eq > 0,
            "expected key=value in '" + std::string(name) + "' settings, got '" +
                std::string(item) + "'");
    out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return out;
}

[[noreturn]] void unknown_key(std::string_view name, std::string_view key) {
  throw SpecError("unknown key '" + std::string(key) + "' for " + std::string(name));
}

ClassifierSpec parse_single(std::string_view name, const std::vector<std::string_view>& items) {
  const auto params = parse_params(name, items);
  if (name == "zeror" || name == "hmm-standin") {
    require(params.empty(), std::string(name) + " takes no settings");
    return {ZeroRConfig{name == "hmm-standin"}};
  }
  if (name == "svm") {
    SvmConfig cfg;
    for (auto [k, v] : params) {
      if (k == "lambda") {
        cfg.lambda = parse_real(k, v);
      } else if (k == "epochs") {
        cfg.epochs = parse_uint(k, v);
      } else {
        unknown_key(name, k);
      }
    }
    require(cfg.lambda > 0.0, "svm lambda must be positive");
    require(cfg.epochs >= 1, "svm epochs must be at least 1");
    return {cfg};
  }
  if (name == "rbf") {
    RbfConfig cfg;
    for (auto [k, v] : params) {
      if (k == "k") {
        cfg.clusters_per_class = parse_uint(k, v);
      } else if (k == "ridge") {
        cfg.ridge = parse_real(k, v);
      } else if (k == "epochs") {
        cfg.epochs = parse_uint(k, v);
      } else if (k == "lr") {
        cfg.learning_rate = parse_real(k, v);
      } else if (k == "iters") {
        cfg.kmeans_iterations = parse_uint(k, v);
      } else {
        unknown_key(name, k);
      }
    }
    require(cfg.clusters_per_class >= 1, "rbf k must be at least 1");
    require(cfg.ridge >= 0.0, "rbf ridge must be non-negative");
    require(cfg.learning_rate > 0.0, "rbf lr must be positive");
    return {cfg};
  }
  if (name == "kstar") {
    KStarConfig cfg;
    for (auto [k, v] : params) {
      if (k == "b") {
        const auto b = parse_uint(k, v);
        require(b <= 100, "kstar b must be in [0, 100]");
        cfg.blend = static_cast<int>(b);
      } else {
        unknown_key(name, k);
      }
    }
    return {cfg};
  }
  if (name == "forest") {
    ForestConfig cfg;
    for (auto [k, v] : params) {
      if (k == "trees") {
        cfg.n_trees = parse_uint(k, v);
      } else if (k == "features") {
        cfg.feature_subset_size = parse_uint(k, v);
      } else if (k == "min_leaf") {
        cfg.min_leaf = parse_uint(k, v);
      } else if (k == "depth") {
        cfg.max_depth = parse_uint(k, v);
      } else {
        unknown_key(name, k);
      }
    }
    require(cfg.n_trees >= 1, "forest trees must be at least 1");
    require(cfg.min_leaf >= 1, "forest min_leaf must be at least 1");
    return {cfg};
  }
  throw SpecError("unknown classifier '" + std::string(name) + "'");
}

// "name" or "name:k=v,k=v".
ClassifierSpec parse_member(std::string_view text) {
  const auto colon = text.find(':');
  const auto name = trim(text.substr(0, colon));
  require(!name.empty(), "empty classifier name");
  std::vector<std::string_view> items;
  if (colon != std::string_view::npos) items = split(text.substr(colon + 1), ',');
  return parse_single(name, items);
}

bool starts_member(std::string_view token) {
  // A member token starts with a name and has no '=' before any ':'.
  const auto eq = token.find('=');
  const auto colon = token.find(':');
  return eq == std::string_view::npos || (colon != std::string_view::npos && colon < eq);
}

std::string fmt(double v) { return format_double(v); }

void append_param(std::string& out, bool& first, const std::string& kv) {
  out += first ? ":" : ",";
  out += kv;
  first = false;
}

struct Printer {
  std::string operator()(const ZeroRConfig& c) const { return c.uniform ? "hmm-standin" : "zeror"; }
  std::string operator()(const SvmConfig& c) const {
    const SvmConfig d;
    std::string out = "svm";
    bool first = true;
    if (c.lambda != d.lambda) append_param(out, first, "lambda=" + fmt(c.lambda));
    if (c.epochs != d.epochs) append_param(out, first, "epochs=" + std::to_string(c.epochs));
    return out;
  }
  std::string operator()(const RbfConfig& c) const {
    const RbfConfig d;
    std::string out = "rbf";
    bool first = true;
    if (c.clusters_per_class != d.clusters_per_class) {
      append_param(out, first, "k=" + std::to_string(c.clusters_per_class));
    }
    if (c.ridge != d.ridge) append_param(out, first, "ridge=" + fmt(c.ridge));
    if (c.epochs != d.epochs) append_param(out, first, "epochs=" + std::to_string(c.epochs));
    if (c.learning_rate != d.learning_rate) append_param(out, first, "lr=" + fmt(c.learning_rate));
    if (c.kmeans_iterations != d.kmeans_iterations) {
      append_param(out, first, "iters=" + std::to_string(c.kmeans_iterations));
    }
    return out;
  }
  std::string operator()(const KStarConfig& c) const { return "kstar:b=" + std::to_string(c.blend); }
  std::string operator()(const ForestConfig& c) const {
    const ForestConfig d;
    std::string out = "forest:trees=" + std::to_string(c.n_trees);
    bool first = false;
    if (c.feature_subset_size != d.feature_subset_size) {
      append_param(out, first, "features=" + std::to_string(c.feature_subset_size));
    }
    if (c.min_leaf != d.min_leaf) append_param(out, first, "min_leaf=" + std::to_string(c.min_leaf));
    if (c.max_depth) append_param(out, first, "depth=" + std::to_string(*c.max_depth));
    return out;
  }
  std::string operator()(const VoteConfig& c) const {
    std::string out = "vote(";
    for (std::size_t i = 0; i < c.members.size(); ++i) {
      if (i > 0) out += ',';
      out += std::visit(*this, c.members[i].config);
    }
    return out + ")";
  }
};

}  // namespace

ClassifierSpec parse_spec(std::string_view text) {
  text = trim(text);
  require(!text.empty(), "empty classifier spec");
  if (text.substr(0, 4) != "vote") return parse_member(text);

  auto rest = trim(text.substr(4));
  require(!rest.empty() && rest.front() == '(' && rest.back() == ')',
          "vote expects the form vote(SPEC,SPEC,...)");
  const auto inner = trim(rest.substr(1, rest.size() - 2));
  require(!inner.empty(), "vote requires at least one member");
  require(inner.find('(') == std::string_view::npos && inner.find(')') == std::string_view::npos,
          "nested vote is not supported");

  // Regroup comma-separated tokens into members: a "key=value" token
  // continues the member before it.
  std::vector<std::string> members;
  for (auto token : split(inner, ',')) {
    require(!token.empty(), "empty vote member");
    if (starts_member(token)) {
      members.emplace_back(token);
    } else {
      require(!members.empty(), "vote setting '" + std::string(token) + "' has no member");
      members.back() += (members.back().find(':') == std::string::npos ? ":" : ",");
      members.back() += token;
    }
  }
  VoteConfig cfg;
  for (const auto& m : members) cfg.members.push_back(parse_member(m));
  return {std::move(cfg)};
}

std::string to_string(const ClassifierSpec& spec) { return std::visit(Printer{}, spec.config); }

std::unique_ptr<Model> fit_model(const ClassifierSpec& spec, const Dataset& ds,
                                 std::uint64_t seed, unsigned threads) {
  struct Fitter {
    const Dataset& ds;
    std::uint64_t seed;
    unsigned threads;

    std::unique_ptr<Model> operator()(const ZeroRConfig& c) const {
      return std::make_unique<ZeroRModel>(zeror_fit(ds, c));
    }
    std::unique_ptr<Model> operator()(const SvmConfig& c) const {
      return std::make_unique<SvmModel>(svm_fit(ds, c, seed));
    }
    std::unique_ptr<Model> operator()(const RbfConfig& c) const {
      return std::make_unique<RbfModel>(rbf_fit(ds, c, seed));
    }
    std::unique_ptr<Model> operator()(const KStarConfig& c) const {
      return std::make_unique<KStarModel>(kstar_fit(ds, c));
    }
    std::unique_ptr<Model> operator()(ForestConfig c) const {
      c.seed = seed;
      return std::make_unique<ForestModel>(forest_fit(ds, c, threads));
    }
    std::unique_ptr<Model> operator()(const VoteConfig& c) const {
      return std::make_unique<VoteModel>(vote_fit(ds, c, seed, threads));
    }
  };
  return std::visit(Fitter{ds, seed, threads}, spec.config);
}

std::unique_ptr<Model> load_model(const ClassifierSpec& spec, BinaryReader& in) {
  struct Loader {
    BinaryReader& in;

    std::unique_ptr<Model> operator()(const ZeroRConfig&) const {
      return std::make_unique<ZeroRModel>(ZeroRModel::load(in));
    }
    std::unique_ptr<Model> operator()(const SvmConfig&) const {
      return std::make_unique<SvmModel>(SvmModel::load(in));
    }
    std::unique_ptr<Model> operator()(const RbfConfig&) const {
      return std::make_unique<RbfModel>(RbfModel::load(in));
    }
    std::unique_ptr<Model> operator()(const KStarConfig&) const {
      return std::make_unique<KStarModel>(KStarModel::load(in));
    }
    std::unique_ptr<Model> operator()(const ForestConfig&) const {
      return std::make_unique<ForestModel>(ForestModel::load(in));
    }
    std::unique_ptr<Model> operator()(const VoteConfig& c) const {
      const auto n = in.count();
      if (n != c.members.size()) throw ModelError("vote payload member count mismatch");
      std::vector<std::shared_ptr<const Model>> members;
      for (const auto& m : c.members) members.push_back(load_model(m, in));
      return std::make_unique<VoteModel>(std::move(members));
    }
  };
  return std::visit(Loader{in}, spec.config);
}

namespace {
constexpr char kMagic[4] = {'E', 'E', 'G', 'M'};
}

void save_model_file(const std::filesystem::path& path, const ClassifierSpec& spec,
                     std::uint64_t seed, const Model& model) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw ModelError("cannot write model file '" + path.string() + "'");
  os.write(kMagic, sizeof(kMagic));
  BinaryWriter out(os);
  out.u8(kModelFormatVersion);
  out.str(to_string(spec));
  out.u64(seed);
  model.save(out);
  if (!os) throw ModelError("failed writing model file '" + path.string() + "'");
}

StoredModel load_model_file(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ModelError("cannot open model file '" + path.string() + "'");
  char magic[4] = {};
  is.read(magic, sizeof(magic));
  if (!is || !std::equal(std::begin(magic), std::end(magic), std::begin(kMagic))) {
    throw ModelError("'" + path.string() + "' is not a model file");
  }
  BinaryReader in(is);
  const auto version = in.u8();
  if (version != kModelFormatVersion) {
    throw ModelError("unsupported model format version " + std::to_string(version));
  }
  StoredModel out;
  const auto text = in.str();
  try {
    out.spec = parse_spec(text);
  } catch (const SpecError& e) {
    throw ModelError(std::string("model file has an invalid spec: ") + e.what());
  }
  out.seed = in.u64();
  out.model = load_model(out.spec, in);
  return out;
}

}  // namespace eegvote
