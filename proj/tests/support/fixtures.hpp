#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "eegvote/dataset.hpp"

namespace eegvote::fixtures {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(EEGVOTE_TEST_DATA_DIR) / name;
}

inline std::vector<std::string> attribute_names(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t a = 0; a < m; ++a) names.push_back("a" + std::to_string(a));
  return names;
}

// Uniform features in [lo, hi), each row Closed with probability p_closed.
// Guarantees at least one row of each class when n >= 2.
inline Dataset random_dataset(std::size_t n, std::size_t m, std::uint64_t seed,
                              double p_closed = 0.45, double lo = 0.0, double hi = 10.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> value(lo, hi);
  std::bernoulli_distribution closed(p_closed);
  Dataset ds(attribute_names(m));
  std::vector<double> row(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : row) v = value(gen);
    Label l = closed(gen) ? Label::Closed : Label::Open;
    if (n >= 2 && i == 0) l = Label::Open;
    if (n >= 2 && i == 1) l = Label::Closed;
    ds.add(row, l);
  }
  return ds;
}

// Same as random_dataset but values snapped to a grid, so ties occur.
inline Dataset gridded_dataset(std::size_t n, std::size_t m, std::uint64_t seed, int levels) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> value(0, levels - 1);
  std::bernoulli_distribution closed(0.5);
  Dataset ds(attribute_names(m));
  std::vector<double> row(m);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& v : row) v = value(gen);
    ds.add(row, i < 2 ? (i == 0 ? Label::Open : Label::Closed)
                      : (closed(gen) ? Label::Closed : Label::Open));
  }
  return ds;
}

// Two isotropic Gaussian blobs, one per class, centers `separation` apart
// along every axis.
inline Dataset gaussian_blobs(std::size_t per_class, std::size_t m, double separation,
                              std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Dataset ds(attribute_names(m));
  std::vector<double> row(m);
  for (std::size_t i = 0; i < 2 * per_class; ++i) {
    const bool is_closed = i % 2 == 1;
    for (double& v : row) v = noise(gen) + (is_closed ? separation : 0.0);
    ds.add(row, is_closed ? Label::Closed : Label::Open);
  }
  return ds;
}

// n rows with the given class counts, features are the row index.
inline Dataset counted_dataset(std::size_t open, std::size_t closed) {
  Dataset ds(attribute_names(1));
  for (std::size_t i = 0; i < open + closed; ++i) {
    const double v = static_cast<double>(i);
    ds.add(std::span<const double>(&v, 1), i < open ? Label::Open : Label::Closed);
  }
  return ds;
}

}  // namespace eegvote::fixtures
