#include "eegvote/dataset_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "eegvote/errors.hpp"

namespace eegvote {

namespace {

std::string_view trim(std::string_view s) noexcept {
  auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view unquote(std::string_view s) noexcept {
  s = trim(s);
  if (s.size() >= 2 && (s.front() == '\'' || s.front() == '"') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

// Splits on commas outside single or double quotes. Doubled quotes inside a
// quoted field are an escaped quote.
std::vector<std::string> split_fields(std::string_view line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote != 0) {
      if (c == quote) {
        if (i + 1 < line.size() && line[i + 1] == quote) {
          cur.push_back(c);
          ++i;
        } else {
          quote = 0;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == ',') {
      fields.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quote != 0) throw DatasetError("unterminated quoted field", line_no);
  fields.emplace_back(trim(cur));
  return fields;
}

// Iterates lines while tracking 1-based line numbers.
class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  std::optional<std::string_view> next() {
    if (pos_ >= text_.size()) return std::nullopt;
    auto end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    auto line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    ++line_no_;
    return line;
  }
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
};

// Reads the next whitespace-delimited (or quoted) word from s.
std::string_view take_word(std::string_view& s) {
  s = trim(s);
  if (s.empty()) return {};
  std::size_t end = 0;
  if (s.front() == '\'' || s.front() == '"') {
    end = s.find(s.front(), 1);
    end = end == std::string_view::npos ? s.size() : end + 1;
  } else {
    while (end < s.size() && s[end] != ' ' && s[end] != '\t' && s[end] != '{') ++end;
  }
  auto word = s.substr(0, end);
  s.remove_prefix(end);
  return word;
}

double parse_feature(std::string_view token, std::size_t line_no) {
  if (token == "?") throw DatasetError("missing value '?' is not supported", line_no);
  double v = 0.0;
  if (!parse_double(token, v)) {
    throw DatasetError("non-numeric feature token '" + std::string(token) + "'", line_no);
  }
  return v;
}

}  // namespace

bool parse_double(std::string_view token, double& out) noexcept {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, ptr};
}

Dataset parse_arff(std::string_view text) {
  LineReader reader(text);
  std::string relation = "dataset";
  std::vector<std::string> names;
  std::vector<std::string> class_values;
  bool have_class = false;
  bool in_data = false;
  std::optional<Dataset> ds;
  std::vector<double> row;

  while (auto raw = reader.next()) {
    const std::size_t ln = reader.line_no();
    auto line = trim(*raw);
    if (line.empty() || line.front() == '%') continue;

    if (!in_data) {
      if (line.front() != '@') throw DatasetError("expected a declaration", ln);
      auto rest = line;
      auto keyword = lower(take_word(rest));
      if (keyword == "@relation") {
        relation = std::string(unquote(rest));
      } else if (keyword == "@attribute") {
        if (have_class) throw DatasetError("class attribute must be the last attribute", ln);
        auto name = unquote(take_word(rest));
        if (name.empty()) throw DatasetError("attribute without a name", ln);
        rest = trim(rest);
        if (!rest.empty() && rest.front() == '{') {
          auto close = rest.find('}');
          if (close == std::string_view::npos) throw DatasetError("unterminated nominal list", ln);
          auto values = split_fields(rest.substr(1, close - 1), ln);
          if (values.size() != kNumClasses) {
            throw DatasetError("class attribute must have exactly two values", ln);
          }
          for (auto& v : values) v = std::string(unquote(v));
          class_values = std::move(values);
          have_class = true;
        } else {
          auto type = lower(take_word(rest));
          if (type != "numeric" && type != "real" && type != "integer") {
            throw DatasetError("unsupported attribute type '" + type + "'", ln);
          }
          names.emplace_back(name);
        }
      } else if (keyword == "@data") {
        if (!have_class) throw DatasetError("no nominal class attribute declared", ln);
        ds.emplace(names, class_values, relation);
        in_data = true;
      } else {
        throw DatasetError("unknown declaration '" + keyword + "'", ln);
      }
      continue;
    }

    if (line.front() == '{') throw DatasetError("sparse rows are not supported", ln);
    if (line.front() == '@') throw DatasetError("declaration after @data", ln);
    auto fields = split_fields(line, ln);
    if (fields.size() != names.size() + 1) {
      throw DatasetError("row has " + std::to_string(fields.size()) + " values, expected " +
                             std::to_string(names.size() + 1),
                         ln);
    }
    row.clear();
    for (std::size_t a = 0; a < names.size(); ++a) row.push_back(parse_feature(fields[a], ln));
    const auto& cls = fields.back();
    if (cls == "?") throw DatasetError("missing value '?' is not supported", ln);
    auto it = std::find(class_values.begin(), class_values.end(), cls);
    if (it == class_values.end()) throw DatasetError("unknown class token '" + cls + "'", ln);
    try {
      ds->add(row, label_from_index(static_cast<std::size_t>(it - class_values.begin())));
    } catch (const DatasetError& e) {
      throw DatasetError(e.what(), ln);
    }
  }
  if (!in_data) throw DatasetError("missing @data section", reader.line_no());
  return std::move(*ds);
}

Dataset parse_csv(std::string_view text, bool has_header) {
  LineReader reader(text);
  std::optional<Dataset> ds;
  std::vector<double> row;
  std::size_t width = 0;

  while (auto raw = reader.next()) {
    const std::size_t ln = reader.line_no();
    auto line = trim(*raw);
    if (line.empty()) continue;
    auto fields = split_fields(line, ln);

    if (!ds) {
      if (fields.size() < 2) throw DatasetError("need at least one feature and a class column", ln);
      width = fields.size();
      std::vector<std::string> names;
      for (std::size_t a = 0; a + 1 < width; ++a) {
        names.push_back(has_header ? fields[a] : "a" + std::to_string(a + 1));
      }
      ds.emplace(std::move(names));
      if (has_header) continue;
    }
    if (fields.size() != width) {
      throw DatasetError("row has " + std::to_string(fields.size()) + " columns, expected " +
                             std::to_string(width),
                         ln);
    }
    row.clear();
    for (std::size_t a = 0; a + 1 < width; ++a) row.push_back(parse_feature(fields[a], ln));
    const auto& cls = fields.back();
    Label label;
    if (cls == "0") {
      label = Label::Open;
    } else if (cls == "1") {
      label = Label::Closed;
    } else {
      throw DatasetError("class token '" + cls + "' is not 0 or 1", ln);
    }
    ds->add(row, label);
  }
  if (!ds) return Dataset(std::vector<std::string>{});
  return std::move(*ds);
}

std::string write_arff(const Dataset& ds) {
  std::ostringstream os;
  os << "@relation " << ds.relation() << "\n\n";
  for (const auto& name : ds.attribute_names()) os << "@attribute " << name << " numeric\n";
  os << "@attribute eyeDetection {" << ds.class_values()[0] << ',' << ds.class_values()[1]
     << "}\n\n@data\n";
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features(i)) os << format_double(v) << ',';
    os << ds.class_values()[index_of(ds.label(i))] << '\n';
  }
  return os.str();
}

std::string write_csv(const Dataset& ds, bool with_header) {
  std::ostringstream os;
  if (with_header) {
    for (const auto& name : ds.attribute_names()) os << name << ',';
    os << "eyeDetection\n";
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features(i)) os << format_double(v) << ',';
    os << index_of(ds.label(i)) << '\n';
  }
  return os.str();
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  auto ext = lower(path.extension().string());
  if (ext == ".arff") return parse_arff(text);

  // Header present when the first field of the first non-empty line is not a number.
  bool header = false;
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    auto t = trim(line);
    if (t.empty()) continue;
    auto first = split_fields(t, 1).front();
    double ignored = 0.0;
    header = !parse_double(first, ignored);
    break;
  }
  return parse_csv(text, header);
}

}  // namespace eegvote
