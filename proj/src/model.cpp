#include "eegvote/model.hpp"

#include <cmath>
#include <string>

#include "eegvote/errors.hpp"
#include "eegvote/parallel.hpp"

namespace eegvote {

bool is_valid(const ProbabilityVector& pv, double tol) noexcept {
  double sum = 0.0;
  for (double v : pv.p) {
    if (!(v >= 0.0 && v <= 1.0)) return false;
    sum += v;
  }
  return std::abs(sum - 1.0) <= tol;
}

Label argmax_label(const ProbabilityVector& pv) {
  if (!is_valid(pv)) {
    throw InvariantError("malformed probability vector (" + std::to_string(pv.open()) + ", " +
                         std::to_string(pv.closed()) + ")");
  }
  return pv.closed() > pv.open() ? Label::Closed : Label::Open;
}

std::vector<ProbabilityVector> Model::predict_all(const Dataset& ds, unsigned threads) const {
  if (!ds.empty() && ds.num_attributes() != arity()) check_arity(ds.features(0));
  std::vector<ProbabilityVector> out(ds.size());
  parallel_for(ds.size(), threads, [&](std::size_t i) { out[i] = predict(ds.features(i)); });
  return out;
}

void Model::check_arity(std::span<const double> features) const {
  if (features.size() != arity()) {
    throw ModelError("model expects " + std::to_string(arity()) + " features, got " +
                     std::to_string(features.size()));
  }
}

void write_dataset(BinaryWriter& out, const Dataset& ds) {
  out.str(ds.relation());
  out.u64(ds.num_attributes());
  for (const auto& name : ds.attribute_names()) out.str(name);
  for (const auto& v : ds.class_values()) out.str(v);
  out.u64(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (double v : ds.features(i)) out.f64(v);
    out.u8(static_cast<std::uint8_t>(index_of(ds.label(i))));
  }
}

Dataset read_dataset(BinaryReader& in) {
  auto relation = in.str();
  std::vector<std::string> names(in.count(1U << 20));
  for (auto& name : names) name = in.str();
  std::vector<std::string> class_values(kNumClasses);
  for (auto& v : class_values) v = in.str();
  Dataset ds(std::move(names), std::move(class_values), std::move(relation));
  const auto n = in.count();
  std::vector<double> row(ds.num_attributes());
  for (std::uint64_t i = 0; i < n; ++i) {
    for (double& v : row) v = in.f64();
    const auto label = in.u8();
    if (label > 1) throw ModelError("corrupt model payload: bad label");
    try {
      ds.add(row, label_from_index(label));
    } catch (const DatasetError& e) {
      throw ModelError(std::string("corrupt model payload: ") + e.what());
    }
  }
  return ds;
}

}  // namespace eegvote
