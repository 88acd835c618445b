// Copyright 2026 The TraitForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Linear predictors over sparse TF-IDF rows.
//
// The epsilon-SVR minimizes
//
//   J(w, b) = 1/2 |w|^2 + C * sum_i max(0, |y_i - (w.x_i + b)| - eps)
//
// and the binary classifier swaps in the hinge loss max(0, 1 - y_i s_i).
// Both use averaged stochastic subgradient descent on the rescaled
// per-example objective lambda/2 |w|^2 + loss_i with lambda = 1 / (C n) and
// step size eta_t = eta_0 / (1 + eta_0 lambda t). The bias is not
// regularized. Averaging starts after the first epoch (or immediately for a
// single epoch run).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "traitforge/common.hpp"
#include "traitforge/corpus.hpp"
#include "traitforge/folds.hpp"
#include "traitforge/random.hpp"
#include "traitforge/sparse.hpp"

namespace traitforge {

struct SvrConfig {
  double c = 1.0;
  double epsilon = 0.1;
  std::size_t epochs = 15;
  double learning_rate = 0.5;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(c > 0.0)) throw DataError("C must be positive");
    if (!(epsilon >= 0.0)) throw DataError("epsilon must be non-negative");
    if (epochs < 1) throw DataError("epochs must be at least 1");
    if (!(learning_rate > 0.0)) throw DataError("learning rate must be positive");
  }

  bool operator==(const SvrConfig&) const = default;
};

struct SvrModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvrConfig config;
  std::size_t feature_dimension = 0;

  double raw(const SparseVector& x) const {
    if (x.dimension != feature_dimension) {
      throw DataError("feature dimension mismatch: model has " +
                      std::to_string(feature_dimension) + ", input has " +
                      std::to_string(x.dimension));
    }
    return x.dot(weights) + bias;
  }

  double weight_norm() const {
    double s = 0.0;
    for (double w : weights) s += w * w;
    return std::sqrt(s);
  }
};

struct DummyModel {
  double mean = 0.0;
};

using TraitPredictor = std::variant<SvrModel, DummyModel>;

inline double predict(const SvrModel& model, const SparseVector& x) {
  return clamp_score(model.raw(x));
}

inline double predict(const DummyModel& model, const SparseVector&) {
  return clamp_score(model.mean);
}

inline double predict(const TraitPredictor& model, const SparseVector& x) {
  return std::visit([&](const auto& m) { return predict(m, x); }, model);
}

inline DummyModel train_dummy(std::span<const double> y) {
  if (y.empty()) throw DataError("cannot fit a dummy regressor on no targets");
  double sum = 0.0;
  for (double v : y) sum += v;
  return DummyModel{sum / static_cast<double>(y.size())};
}

enum class LossKind { kEpsilonInsensitive, kHinge };

namespace detail {

inline void check_training_data(std::span<const SparseVector> x, std::size_t n_targets) {
  if (x.empty()) throw DataError("no training examples");
  if (x.size() != n_targets) {
    throw DataError("got " + std::to_string(x.size()) + " feature rows but " +
                    std::to_string(n_targets) + " targets");
  }
  const std::size_t dim = x.front().dimension;
  for (const auto& row : x) {
    if (row.dimension != dim) throw DataError("inconsistent feature dimensions");
  }
}

// Descent direction -dL/ds for one example, where s is the prediction.
inline double loss_direction(LossKind kind, double target, double score, double epsilon) {
  if (kind == LossKind::kHinge) return target * score < 1.0 ? target : 0.0;
  const double r = target - score;
  if (r > epsilon) return 1.0;
  if (r < -epsilon) return -1.0;
  return 0.0;
}

struct LinearSolution {
  std::vector<double> weights;
  double bias = 0.0;
};

using EpochObserver = std::function<void(std::size_t epoch, const LinearSolution&)>;

// Averaged SGD with lazily scaled weights so each step costs O(nnz(x)).
//   current iterate  w = scale * v
//   running average  a = avg_a * u + avg_b * v
class AveragedSgd {
 public:
  AveragedSgd(std::size_t dim, double lambda, double eta0)
      : v_(dim, 0.0), u_(dim, 0.0), lambda_(lambda), eta0_(eta0) {}

  void step(const SparseVector& x, double target, LossKind kind, double epsilon, bool average) {
    ++t_;
    const double eta = eta0_ / (1.0 + eta0_ * lambda_ * static_cast<double>(t_));
    const double score = scale_ * x.dot(v_) + bias_;
    const double g = loss_direction(kind, target, score, epsilon);

    scale_ *= 1.0 - eta * lambda_;
    if (g != 0.0) {
      const double dv = eta * g / scale_;
      x.add_to(v_, dv);
      if (averaging_) x.add_to(u_, -dv * avg_b_ / avg_a_);
      bias_ += eta * g;
    }

    if (average) {
      ++averaged_steps_;
      if (averaged_steps_ == 1) {
        std::fill(u_.begin(), u_.end(), 0.0);
        avg_a_ = 1.0;
        avg_b_ = scale_;
        avg_bias_ = bias_;
        averaging_ = true;
      } else {
        const double mu = 1.0 / static_cast<double>(averaged_steps_);
        avg_a_ *= 1.0 - mu;
        avg_b_ = (1.0 - mu) * avg_b_ + mu * scale_;
        avg_bias_ = (1.0 - mu) * avg_bias_ + mu * bias_;
      }
    }
    if (scale_ < 1e-6 || (averaging_ && (avg_a_ < 1e-6 || std::abs(avg_b_ / avg_a_) > 1e6))) {
      renormalize();
    }
  }

  LinearSolution averaged() const {
    if (!averaging_) return current();
    LinearSolution s;
    s.weights.resize(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) s.weights[i] = avg_a_ * u_[i] + avg_b_ * v_[i];
    s.bias = avg_bias_;
    return s;
  }

  LinearSolution current() const {
    LinearSolution s;
    s.weights.resize(v_.size());
    for (std::size_t i = 0; i < v_.size(); ++i) s.weights[i] = scale_ * v_[i];
    s.bias = bias_;
    return s;
  }

 private:
  void renormalize() {
    if (averaging_) {
      const double ratio = avg_b_ / avg_a_;
      for (std::size_t i = 0; i < u_.size(); ++i) u_[i] = avg_a_ * (u_[i] + ratio * v_[i]);
      avg_a_ = 1.0;
      avg_b_ = 0.0;
    }
    for (double& w : v_) w *= scale_;
    scale_ = 1.0;
  }

  std::vector<double> v_;
  std::vector<double> u_;
  double scale_ = 1.0;
  double bias_ = 0.0;
  double avg_a_ = 1.0;
  double avg_b_ = 0.0;
  double avg_bias_ = 0.0;
  bool averaging_ = false;
  std::size_t t_ = 0;
  std::size_t averaged_steps_ = 0;
  double lambda_;
  double eta0_;
};

inline LinearSolution train_linear(std::span<const SparseVector> x, std::span<const double> y,
                                   const SvrConfig& config, LossKind kind,
                                   const EpochObserver& observer = {}) {
  config.validate();
  check_training_data(x, y.size());
  const std::size_t n = x.size();
  const double lambda = 1.0 / (config.c * static_cast<double>(n));
  AveragedSgd sgd(x.front().dimension, lambda, config.learning_rate);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.seed);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    const bool average = config.epochs == 1 || epoch >= 1;
    for (std::size_t i : order) sgd.step(x[i], y[i], kind, config.epsilon, average);
    if (observer) observer(epoch, sgd.averaged());
  }
  return sgd.averaged();
}

}  // namespace detail

inline SvrModel train_svr(std::span<const SparseVector> x, std::span<const double> y,
                          const SvrConfig& config,
                          const detail::EpochObserver& observer = {}) {
  auto solution = detail::train_linear(x, y, config, LossKind::kEpsilonInsensitive, observer);
  SvrModel m;
  m.feature_dimension = x.front().dimension;
  m.weights = std::move(solution.weights);
  m.bias = solution.bias;
  m.config = config;
  return m;
}

// Full primal objective and one subgradient of it, used by tests and by
// the training diagnostics.
inline double svr_objective(std::span<const double> w, double b, std::span<const SparseVector> x,
                            std::span<const double> y, double c, double epsilon) {
  double reg = 0.0;
  for (double wi : w) reg += wi * wi;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    loss += std::max(0.0, std::abs(y[i] - (x[i].dot(w) + b)) - epsilon);
  }
  return 0.5 * reg + c * loss;
}

inline std::pair<std::vector<double>, double> svr_subgradient(
    std::span<const double> w, double b, std::span<const SparseVector> x,
    std::span<const double> y, double c, double epsilon) {
  std::vector<double> gw(w.begin(), w.end());
  double gb = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dir = detail::loss_direction(LossKind::kEpsilonInsensitive, y[i],
                                              x[i].dot(w) + b, epsilon);
    if (dir == 0.0) continue;
    x[i].add_to(gw, -c * dir);
    gb -= c * dir;
  }
  return {std::move(gw), gb};
}

// Binary high/low classification.
enum class BinaryLabel : std::uint8_t { kLow = 0, kHigh = 1 };

inline std::string_view binary_label_name(BinaryLabel l) {
  return l == BinaryLabel::kHigh ? "high" : "low";
}

struct BinarizedExamples {
  std::vector<std::string> sample_ids;
  std::vector<std::string> texts;
  std::vector<BinaryLabel> labels;
  std::size_t dropped = 0;  // examples with label exactly 0
};

// Negative labels are low, positive labels high; zero labels are dropped.
inline BinarizedExamples binarize_labels(std::span<const LabeledExample> examples) {
  BinarizedExamples out;
  for (const auto& e : examples) {
    if (e.label == 0.0) {
      ++out.dropped;
      continue;
    }
    out.sample_ids.push_back(e.sample_id);
    out.texts.push_back(e.text);
    out.labels.push_back(e.label < 0.0 ? BinaryLabel::kLow : BinaryLabel::kHigh);
  }
  return out;
}

struct LinearClassifier {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t feature_dimension = 0;

  double decision_value(const SparseVector& x) const {
    if (x.dimension != feature_dimension) throw DataError("feature dimension mismatch");
    return x.dot(weights) + bias;
  }

  // Ties (decision value exactly 0) go to high.
  BinaryLabel classify(const SparseVector& x) const {
    return decision_value(x) >= 0.0 ? BinaryLabel::kHigh : BinaryLabel::kLow;
  }
};

inline LinearClassifier train_binary(std::span<const SparseVector> x,
                                     std::span<const BinaryLabel> labels,
                                     const SvrConfig& config) {
  const bool has_low = std::find(labels.begin(), labels.end(), BinaryLabel::kLow) != labels.end();
  const bool has_high = std::find(labels.begin(), labels.end(), BinaryLabel::kHigh) != labels.end();
  if (!has_low || !has_high) throw DataError("binary training needs both low and high examples");
  std::vector<double> y;
  y.reserve(labels.size());
  for (BinaryLabel l : labels) y.push_back(l == BinaryLabel::kHigh ? 1.0 : -1.0);
  auto solution = detail::train_linear(x, y, config, LossKind::kHinge);
  return LinearClassifier{std::move(solution.weights), solution.bias, x.front().dimension};
}

struct MajorityModel {
  BinaryLabel majority = BinaryLabel::kHigh;
};

// Ties go to high.
inline MajorityModel train_majority(std::span<const BinaryLabel> labels) {
  if (labels.empty()) throw DataError("cannot fit a majority classifier on no labels");
  const auto highs = std::count(labels.begin(), labels.end(), BinaryLabel::kHigh);
  const auto lows = static_cast<std::ptrdiff_t>(labels.size()) - highs;
  return MajorityModel{highs >= lows ? BinaryLabel::kHigh : BinaryLabel::kLow};
}

// Grid search over (C, epsilon) by k-fold mean absolute error.
struct GridRow {
  double c = 0.0;
  double epsilon = 0.0;
  double mae = 0.0;
  double mse = 0.0;
};

struct GridResult {
  SvrConfig best;
  std::vector<GridRow> table;  // sorted by (C, epsilon)
};

inline GridResult grid_search(std::span<const SparseVector> x, std::span<const double> y,
                              std::span<const double> c_values,
                              std::span<const double> epsilon_values, std::size_t k,
                              std::uint64_t seed, SvrConfig base = {}) {
  if (c_values.empty() || epsilon_values.empty()) throw DataError("grid lists must be non-empty");
  detail::check_training_data(x, y.size());
  if (k < 2) throw DataError("grid search needs at least 2 folds");
  if (y.size() < k) {
    throw DataError("grid search needs at least " + std::to_string(k) + " examples (got " +
                    std::to_string(y.size()) + ")");
  }
  std::vector<double> cs(c_values.begin(), c_values.end());
  std::vector<double> eps(epsilon_values.begin(), epsilon_values.end());
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  std::sort(eps.begin(), eps.end());
  eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

  const auto folds = kfold_split(y.size(), k, seed);
  GridResult result;
  for (double c : cs) {
    for (double e : eps) {
      SvrConfig cfg = base;
      cfg.c = c;
      cfg.epsilon = e;
      cfg.validate();
      double abs_sum = 0.0;
      double sq_sum = 0.0;
      for (std::size_t f = 0; f < folds.size(); ++f) {
        const auto train_idx = training_indices(folds, f);
        const auto train_x = gather(x, std::span<const std::size_t>(train_idx));
        const auto train_y = gather(y, std::span<const std::size_t>(train_idx));
        const SvrModel m = train_svr(train_x, train_y, cfg);
        for (std::size_t i : folds[f]) {
          const double r = y[i] - predict(m, x[i]);
          abs_sum += std::abs(r);
          sq_sum += r * r;
        }
      }
      const auto n = static_cast<double>(y.size());
      result.table.push_back({c, e, abs_sum / n, sq_sum / n});
    }
  }
  const auto best = std::min_element(result.table.begin(), result.table.end(),
                                     [](const GridRow& a, const GridRow& b) {
                                       return std::tie(a.mae, a.mse, a.c, a.epsilon) <
                                              std::tie(b.mae, b.mse, b.c, b.epsilon);
                                     });
  result.best = base;
  result.best.c = best->c;
  result.best.epsilon = best->epsilon;
  return result;
}

}  // namespace traitforge
