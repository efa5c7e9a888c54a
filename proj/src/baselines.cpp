#include "eegvote/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eegvote/errors.hpp"
#include "eegvote/rng.hpp"

namespace eegvote {

namespace {

void require_two_classes(const Dataset& ds, const char* who) {
  if (ds.empty()) throw DatasetError(std::string(who) + ": empty training set");
  if (!ds.has_both_classes()) {
    throw DatasetError(std::string(who) + ": training set has a single class");
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(z)) without overflow.
double softplus(double z) noexcept {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

void write_standardization(BinaryWriter& out, const Standardization& s) {
  out.f64s(s.mean());
  out.f64s(s.stddev());
}

Standardization read_standardization(BinaryReader& in) {
  auto mean = in.f64s();
  auto stddev = in.f64s();
  if (mean.size() != stddev.size()) throw ModelError("corrupt standardization payload");
  return {std::move(mean), std::move(stddev)};
}

}  // namespace

// ---------------------------------------------------------------------------

ZeroRModel::ZeroRModel(std::size_t arity, ProbabilityVector proportions, bool uniform)
    : arity_(arity), proportions_(proportions), uniform_(uniform) {}

ProbabilityVector ZeroRModel::predict(std::span<const double> features) const {
  check_arity(features);
  return uniform_ ? ProbabilityVector{0.5, 0.5} : proportions_;
}

void ZeroRModel::save(BinaryWriter& out) const {
  out.u64(arity_);
  out.f64(proportions_.open());
  out.f64(proportions_.closed());
  out.u8(uniform_ ? 1 : 0);
}

ZeroRModel ZeroRModel::load(BinaryReader& in) {
  const auto arity = in.u64();
  const double open = in.f64();
  const double closed = in.f64();
  const bool uniform = in.u8() != 0;
  return {arity, {open, closed}, uniform};
}

ZeroRModel zeror_fit(const Dataset& ds, ZeroRConfig cfg) {
  if (ds.empty()) throw DatasetError("zeror: empty training set");
  const auto dist = class_distribution(ds);
  return {ds.num_attributes(), {dist[0].proportion, dist[1].proportion}, cfg.uniform};
}

// ---------------------------------------------------------------------------

SvmModel::SvmModel(Standardization standardization, std::vector<double> weights, double bias,
                   SvmConfig cfg)
    : standardization_(std::move(standardization)),
      weights_(std::move(weights)),
      bias_(bias),
      cfg_(cfg) {
  if (weights_.size() != standardization_.arity()) throw InvariantError("svm arity mismatch");
}

double SvmModel::margin(std::span<const double> features) const {
  check_arity(features);
  double m = bias_;
  for (std::size_t a = 0; a < weights_.size(); ++a) {
    m += weights_[a] * (features[a] - standardization_.mean()[a]) / standardization_.stddev()[a];
  }
  return m;
}

ProbabilityVector SvmModel::predict(std::span<const double> features) const {
  return ProbabilityVector::hard(margin(features) > 0.0 ? Label::Closed : Label::Open);
}

void SvmModel::save(BinaryWriter& out) const {
  out.f64(cfg_.lambda);
  out.u64(cfg_.epochs);
  write_standardization(out, standardization_);
  out.f64s(weights_);
  out.f64(bias_);
}

SvmModel SvmModel::load(BinaryReader& in) {
  SvmConfig cfg;
  cfg.lambda = in.f64();
  cfg.epochs = in.u64();
  auto s = read_standardization(in);
  auto w = in.f64s();
  const double b = in.f64();
  if (w.size() != s.arity()) throw ModelError("corrupt svm payload");
  return {std::move(s), std::move(w), b, cfg};
}

SvmModel svm_fit(const Dataset& ds, SvmConfig cfg, std::uint64_t seed) {
  require_two_classes(ds, "svm");
  if (!(cfg.lambda > 0.0)) throw std::invalid_argument("svm lambda must be positive");
  if (cfg.epochs == 0) throw std::invalid_argument("svm needs at least one epoch");

  auto standardization = Standardization::fit(ds);
  const std::size_t m = ds.num_attributes();
  const std::size_t n = ds.size();
  // Row i holds the standardized features followed by the constant 1.
  std::vector<double> x(n * (m + 1));
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = std::span<double>(x).subspan(i * (m + 1), m + 1);
    standardization.apply_into(ds.features(i), row.first(m));
    row[m] = 1.0;
    y[i] = ds.label(i) == Label::Closed ? 1.0 : -1.0;
  }

  Rng gen(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> w(m + 1, 0.0);
  double t = 0.0;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), gen);
    for (std::size_t i : order) {
      t += 1.0;
      const double eta = 1.0 / (cfg.lambda * t);
      const auto row = std::span<const double>(x).subspan(i * (m + 1), m + 1);
      double score = 0.0;
      for (std::size_t a = 0; a <= m; ++a) score += w[a] * row[a];
      const double shrink = 1.0 - eta * cfg.lambda;
      for (double& v : w) v *= shrink;
      if (y[i] * score < 1.0) {
        for (std::size_t a = 0; a <= m; ++a) w[a] += eta * y[i] * row[a];
      }
    }
  }
  const double bias = w.back();
  w.pop_back();
  return {std::move(standardization), std::move(w), bias, cfg};
}

// ---------------------------------------------------------------------------

KMeansResult kmeans(std::span<const std::vector<double>> points, std::size_t k,
                    std::size_t max_iterations, std::uint64_t seed) {
  if (k == 0) throw DatasetError("k-means needs at least one cluster");
  if (k > points.size()) {
    throw DatasetError("k-means: " + std::to_string(k) + " clusters requested for " +
                       std::to_string(points.size()) + " points");
  }
  const std::size_t n = points.size();
  Rng gen(seed);
  KMeansResult res;

  // k-means++ seeding.
  res.centers.push_back(points[uniform_below(gen, n)]);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  while (res.centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], squared_distance(points[i], res.centers.back()));
      total += d2[i];
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      double r = uniform_unit(gen) * total;
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        r -= d2[i];
        if (r < 0.0) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(uniform_below(gen, n));
    }
    res.centers.push_back(points[pick]);
  }

  const std::size_t dim = points.front().size();
  res.assignment.assign(n, k);
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], res.centers[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (res.assignment[i] != best) {
        res.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      ++sizes[res.assignment[i]];
      for (std::size_t a = 0; a < dim; ++a) sums[res.assignment[i]][a] += points[i][a];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(points[i], res.centers[res.assignment[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        res.centers[c] = points[far];
        res.assignment[far] = c;
        continue;
      }
      for (std::size_t a = 0; a < dim; ++a) {
        res.centers[c][a] = sums[c][a] / static_cast<double>(sizes[c]);
      }
    }
  }

  res.rms_radius.assign(k, 0.0);
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = res.assignment[i];
    res.rms_radius[c] += squared_distance(points[i], res.centers[c]);
    ++sizes[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    res.rms_radius[c] = sizes[c] == 0 ? 0.0 : std::sqrt(res.rms_radius[c] / sizes[c]);
  }
  return res;
}

LogisticFit logistic_fit(std::span<const std::vector<double>> features,
                         std::span<const double> targets, double ridge, double learning_rate,
                         std::size_t epochs) {
  const std::size_t n = features.size();
  const std::size_t k = n == 0 ? 0 : features.front().size();
  LogisticFit fit;
  fit.weights.assign(k, 0.0);
  const auto inv_n = 1.0 / static_cast<double>(n);

  std::vector<double> grad(k);
  auto pass = [&](bool accumulate) {
    double loss = 0.0;
    double grad_b = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double z = fit.bias;
      for (std::size_t c = 0; c < k; ++c) z += fit.weights[c] * features[i][c];
      // -[y log s(z) + (1-y) log(1-s(z))] = softplus(z) - y z
      loss += softplus(z) - targets[i] * z;
      if (accumulate) {
        const double r = sigmoid(z) - targets[i];
        grad_b += r;
        for (std::size_t c = 0; c < k; ++c) grad[c] += r * features[i][c];
      }
    }
    double reg = 0.0;
    for (double w : fit.weights) reg += w * w;
    loss = loss * inv_n + 0.5 * ridge * reg;
    return std::pair{loss, grad_b};
  };

  for (std::size_t e = 0; e < epochs; ++e) {
    const auto [loss, grad_b] = pass(true);
    fit.losses.push_back(loss);
    for (std::size_t c = 0; c < k; ++c) {
      fit.weights[c] -= learning_rate * (grad[c] * inv_n + ridge * fit.weights[c]);
    }
    fit.bias -= learning_rate * grad_b * inv_n;
  }
  fit.losses.push_back(pass(false).first);
  return fit;
}

RbfModel::RbfModel(Standardization standardization, std::vector<std::vector<double>> centers,
                   std::vector<double> widths, std::vector<double> weights, double bias)
    : standardization_(std::move(standardization)),
      centers_(std::move(centers)),
      widths_(std::move(widths)),
      weights_(std::move(weights)),
      bias_(bias) {
  if (centers_.size() != widths_.size() || centers_.size() != weights_.size()) {
    throw InvariantError("rbf layer size mismatch");
  }
  for (const auto& c : centers_) {
    if (c.size() != standardization_.arity()) throw InvariantError("rbf center arity mismatch");
  }
  for (double s : widths_) {
    if (!(s >= kRbfMinWidth)) throw InvariantError("rbf width below minimum");
  }
}

std::vector<double> RbfModel::activations(std::span<const double> standardized) const {
  std::vector<double> out(centers_.size());
  for (std::size_t c = 0; c < centers_.size(); ++c) {
    out[c] = std::exp(-squared_distance(standardized, centers_[c]) /
                      (2.0 * widths_[c] * widths_[c]));
  }
  return out;
}

ProbabilityVector RbfModel::predict(std::span<const double> features) const {
  check_arity(features);
  const auto phi = activations(standardization_.apply(features));
  double z = bias_;
  for (std::size_t c = 0; c < phi.size(); ++c) z += weights_[c] * phi[c];
  const double closed = sigmoid(z);
  return {1.0 - closed, closed};
}

void RbfModel::save(BinaryWriter& out) const {
  write_standardization(out, standardization_);
  out.u64(centers_.size());
  for (const auto& c : centers_) out.f64s(c);
  out.f64s(widths_);
  out.f64s(weights_);
  out.f64(bias_);
}

RbfModel RbfModel::load(BinaryReader& in) {
  auto s = read_standardization(in);
  std::vector<std::vector<double>> centers(in.count());
  for (auto& c : centers) c = in.f64s();
  auto widths = in.f64s();
  auto weights = in.f64s();
  const double bias = in.f64();
  try {
    return {std::move(s), std::move(centers), std::move(widths), std::move(weights), bias};
  } catch (const InvariantError& e) {
    throw ModelError(std::string("corrupt rbf payload: ") + e.what());
  }
}

RbfModel rbf_fit(const Dataset& ds, RbfConfig cfg, std::uint64_t seed) {
  require_two_classes(ds, "rbf");
  if (cfg.clusters_per_class == 0) throw std::invalid_argument("rbf needs at least one cluster");
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (ds.class_counts()[c] < cfg.clusters_per_class) {
      throw DatasetError("rbf: class " + std::string(label_name(label_from_index(c))) + " has " +
                         std::to_string(ds.class_counts()[c]) + " instances, fewer than " +
                         std::to_string(cfg.clusters_per_class) + " clusters");
    }
  }

  auto standardization = Standardization::fit(ds);
  std::vector<std::vector<double>> z(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) z[i] = standardization.apply(ds.features(i));

  std::vector<std::vector<double>> centers;
  std::vector<double> widths;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    std::vector<std::vector<double>> members;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      if (index_of(ds.label(i)) == c) members.push_back(z[i]);
    }
    auto km = kmeans(members, cfg.clusters_per_class, cfg.kmeans_iterations,
                     derive_stream(seed, c));
    for (std::size_t j = 0; j < km.centers.size(); ++j) {
      centers.push_back(std::move(km.centers[j]));
      widths.push_back(std::max(km.rms_radius[j], kRbfMinWidth));
    }
  }

  RbfModel layer(standardization, centers, widths, std::vector<double>(centers.size(), 0.0), 0.0);
  std::vector<std::vector<double>> phi(ds.size());
  std::vector<double> targets(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) {
    phi[i] = layer.activations(z[i]);
    targets[i] = ds.label(i) == Label::Closed ? 1.0 : 0.0;
  }
  auto fit = logistic_fit(phi, targets, cfg.ridge, cfg.learning_rate, cfg.epochs);
  return {std::move(standardization), std::move(centers), std::move(widths),
          std::move(fit.weights), fit.bias};
}

}  // namespace eegvote
