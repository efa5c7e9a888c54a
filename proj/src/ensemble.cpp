#include "eegvote/ensemble.hpp"

#include <stdexcept>
#include <variant>

#include "eegvote/errors.hpp"
#include "eegvote/rng.hpp"

namespace eegvote {

ProbabilityVector average_probabilities(std::span<const ProbabilityVector> outputs) {
  if (outputs.empty()) throw std::invalid_argument("cannot average zero probability vectors");
  double open = 0.0;
  double closed = 0.0;
  for (const auto& p : outputs) {
    open += p.open();
    closed += p.closed();
  }
  const auto n = static_cast<double>(outputs.size());
  return {open / n, closed / n};
}

VoteModel::VoteModel(std::vector<std::shared_ptr<const Model>> members)
    : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("vote requires at least one member");
  for (const auto& m : members_) {
    if (!m) throw std::invalid_argument("vote member is null");
    if (m->arity() != members_.front()->arity()) {
      throw std::invalid_argument("vote members disagree on attribute count");
    }
  }
}

ProbabilityVector VoteModel::predict(std::span<const double> features) const {
  check_arity(features);
  std::vector<ProbabilityVector> outputs;
  outputs.reserve(members_.size());
  for (const auto& m : members_) outputs.push_back(m->predict(features));
  return average_probabilities(outputs);
}

std::vector<ProbabilityVector> VoteModel::predict_all(const Dataset& ds, unsigned threads) const {
  std::vector<std::vector<ProbabilityVector>> per_member;
  per_member.reserve(members_.size());
  for (const auto& m : members_) per_member.push_back(m->predict_all(ds, threads));
  std::vector<ProbabilityVector> out(ds.size());
  std::vector<ProbabilityVector> row(members_.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    for (std::size_t k = 0; k < members_.size(); ++k) row[k] = per_member[k][i];
    out[i] = average_probabilities(row);
  }
  return out;
}

void VoteModel::save(BinaryWriter& out) const {
  out.u64(members_.size());
  for (const auto& m : members_) m->save(out);
}

VoteModel vote_fit(const Dataset& ds, const VoteConfig& cfg, std::uint64_t seed,
                   unsigned threads) {
  if (cfg.members.empty()) throw SpecError("vote requires at least one member");
  std::vector<std::shared_ptr<const Model>> members;
  for (std::size_t i = 0; i < cfg.members.size(); ++i) {
    if (std::holds_alternative<VoteConfig>(cfg.members[i].config)) {
      throw SpecError("nested vote is not supported");
    }
    members.push_back(fit_model(cfg.members[i], ds, derive_stream(seed, i), threads));
  }
  return VoteModel(std::move(members));
}

}  // namespace eegvote
