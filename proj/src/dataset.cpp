#include "eegvote/dataset.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include "eegvote/errors.hpp"

namespace eegvote {

std::string_view label_name(Label l) noexcept {
  return l == Label::Open ? "Open" : "Closed";
}

Dataset::Dataset(std::vector<std::string> attribute_names, std::vector<std::string> class_values,
                 std::string relation)
    : attribute_names_(std::move(attribute_names)),
      class_values_(std::move(class_values)),
      relation_(std::move(relation)) {
  if (class_values_.size() != kNumClasses) {
    throw DatasetError("class attribute must have exactly two values");
  }
}

void Dataset::add(std::span<const double> features, Label label) {
  if (features.size() != num_attributes()) {
    throw DatasetError("instance has " + std::to_string(features.size()) + " features, expected " +
                       std::to_string(num_attributes()));
  }
  for (double v : features) {
    if (!std::isfinite(v)) throw DatasetError("non-finite feature value");
  }
  values_.insert(values_.end(), features.begin(), features.end());
  labels_.push_back(label);
  ++class_counts_[index_of(label)];
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(attribute_names_, class_values_, relation_);
  out.values_.reserve(indices.size() * num_attributes());
  out.labels_.reserve(indices.size());
  for (std::size_t i : indices) {
    auto f = features(i);
    out.values_.insert(out.values_.end(), f.begin(), f.end());
    out.labels_.push_back(labels_[i]);
    ++out.class_counts_[index_of(labels_[i])];
  }
  return out;
}

Dataset Dataset::without(std::span<const std::size_t> indices) const {
  std::vector<bool> drop(size(), false);
  for (std::size_t i : indices) {
    if (i < size()) drop[i] = true;
  }
  std::vector<std::size_t> keep;
  keep.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) {
    if (!drop[i]) keep.push_back(i);
  }
  return subset(keep);
}

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::uint64_t word) noexcept {
  for (int b = 0; b < 8; ++b) {
    h ^= (word >> (8 * b)) & 0xffU;
    h *= kFnvPrime;
  }
}

}  // namespace

std::uint64_t Dataset::digest() const noexcept {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, num_attributes());
  fnv_mix(h, size());
  for (double v : values_) fnv_mix(h, std::bit_cast<std::uint64_t>(v));
  for (Label l : labels_) fnv_mix(h, index_of(l));
  return h;
}

bool same_instances(const Dataset& a, const Dataset& b) noexcept {
  if (a.size() != b.size() || a.num_attributes() != b.num_attributes()) return false;
  if (a.labels() != b.labels()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto fa = a.features(i);
    auto fb = b.features(i);
    if (std::memcmp(fa.data(), fb.data(), fa.size_bytes()) != 0) return false;
  }
  return true;
}

std::array<ClassShare, kNumClasses> class_distribution(const Dataset& ds) noexcept {
  std::array<ClassShare, kNumClasses> out{};
  const auto n = static_cast<double>(ds.size());
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out[c].count = ds.class_counts()[c];
    out[c].proportion = ds.empty() ? 0.0 : static_cast<double>(out[c].count) / n;
  }
  return out;
}

}  // namespace eegvote
