#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eegvote {

// Eye state. Order fixes argmax tie-breaking everywhere: Open wins ties.
enum class Label : std::uint8_t { Open = 0, Closed = 1 };

inline constexpr std::size_t kNumClasses = 2;

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }
constexpr Label label_from_index(std::size_t i) noexcept {
  return i == 0 ? Label::Open : Label::Closed;
}
std::string_view label_name(Label l) noexcept;

using ClassCounts = std::array<std::size_t, kNumClasses>;

// Read-only view of one labeled sample.
struct InstanceView {
  std::span<const double> features;
  Label label;
};

// Labeled numeric corpus. Features are stored row-major; every row has the
// same arity and only finite values.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> attribute_names,
                   std::vector<std::string> class_values = {"0", "1"},
                   std::string relation = "dataset");

  // Throws DatasetError on arity mismatch or non-finite values.
  void add(std::span<const double> features, Label label);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t num_attributes() const noexcept { return attribute_names_.size(); }

  std::span<const double> features(std::size_t i) const noexcept {
    return {values_.data() + i * num_attributes(), num_attributes()};
  }
  Label label(std::size_t i) const noexcept { return labels_[i]; }
  InstanceView operator[](std::size_t i) const noexcept { return {features(i), label(i)}; }
  double value(std::size_t i, std::size_t attr) const noexcept {
    return values_[i * num_attributes() + attr];
  }

  const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
  const std::vector<std::string>& class_values() const noexcept { return class_values_; }
  const std::string& relation() const noexcept { return relation_; }
  const ClassCounts& class_counts() const noexcept { return class_counts_; }
  const std::vector<Label>& labels() const noexcept { return labels_; }

  bool has_both_classes() const noexcept { return class_counts_[0] > 0 && class_counts_[1] > 0; }

  // New dataset with the given rows, in the given order (duplicates allowed).
  Dataset subset(std::span<const std::size_t> indices) const;
  // New dataset without the given rows.
  Dataset without(std::span<const std::size_t> indices) const;

  // 64-bit FNV-1a over arity, raw feature bits and labels. Used to check
  // that reports being compared came from the same data.
  std::uint64_t digest() const noexcept;

 private:
  std::vector<std::string> attribute_names_;
  std::vector<std::string> class_values_{"0", "1"};
  std::string relation_{"dataset"};
  std::vector<double> values_;
  std::vector<Label> labels_;
  ClassCounts class_counts_{};
};

// True when both datasets hold bit-identical feature values and labels in the
// same order. Attribute names and relation are not compared.
bool same_instances(const Dataset& a, const Dataset& b) noexcept;

struct ClassShare {
  std::size_t count = 0;
  double proportion = 0.0;
};

// Per-label counts and proportions; proportions are 0 for an empty dataset.
std::array<ClassShare, kNumClasses> class_distribution(const Dataset& ds) noexcept;

}  // namespace eegvote
