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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "traitforge/metrics.hpp"
#include "traitforge/models.hpp"
#include "traitforge/random.hpp"

namespace traitforge {
namespace {

using testing_fixture::linear_problem;
using testing_fixture::LinearProblem;

TEST(SvrConfig, Validation) {
  SvrConfig c;
  EXPECT_NO_THROW(c.validate());
  c.c = 0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.epsilon = -1;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.epochs = 0;
  EXPECT_THROW(c.validate(), DataError);
  c = {};
  c.learning_rate = 0;
  EXPECT_THROW(c.validate(), DataError);
}

TEST(TrainSvr, WideTubeGivesZeroWeights) {
  const LinearProblem p = linear_problem(300, 40, 1, 0.3);
  SvrConfig c;
  c.epsilon = 10.0;
  const SvrModel m = train_svr(p.x, p.y, c);
  EXPECT_LE(m.weight_norm(), 1e-6);
  EXPECT_EQ(m.bias, 0.0);
}

TEST(TrainSvr, RecoversSingleFeatureLinearMap) {
  const LinearProblem train = testing_fixture::single_feature_problem(400, 20, 3, 2.0, 1);
  const LinearProblem test = testing_fixture::single_feature_problem(200, 20, 3, 2.0, 2);
  SvrConfig c;
  c.epsilon = 0.01;
  c.c = 100.0;
  c.epochs = 30;
  const SvrModel m = train_svr(train.x, train.y, c);
  std::vector<double> pred;
  for (const auto& x : test.x) pred.push_back(m.raw(x));
  EXPECT_GE(r2(test.y, pred), 0.99);
}

TEST(TrainSvr, Deterministic) {
  const LinearProblem p = linear_problem(200, 30, 4, 0.2);
  SvrConfig c;
  c.seed = 9;
  const SvrModel a = train_svr(p.x, p.y, c);
  const SvrModel b = train_svr(p.x, p.y, c);
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.bias, b.bias);
}

TEST(TrainSvr, RejectsBadInput) {
  std::vector<SparseVector> none;
  std::vector<double> y;
  EXPECT_THROW(train_svr(none, y, {}), DataError);
  std::vector<SparseVector> x = {make_sparse(3, {{0, 1.0}}), make_sparse(4, {{0, 1.0}})};
  y = {1, 2};
  EXPECT_THROW(train_svr(x, y, {}), DataError);
  y = {1};
  EXPECT_THROW(train_svr(x, y, {}), DataError);
}

// The objective of the averaged iterate never rises from one epoch to the
// next on these fixtures. Not a theorem: with C >= 3 the average can still
// wobble upward early on, so only C up to the default is checked.
TEST(TrainSvr, AveragedObjectiveNonIncreasingOverEpochs) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const LinearProblem p = linear_problem(400, 60, seed, 0.4);
    for (double c : {0.1, 1.0}) {
      SvrConfig cfg;
      cfg.c = c;
      cfg.epochs = 20;
      cfg.seed = seed;
      std::vector<double> objective;
      train_svr(p.x, p.y, cfg, [&](std::size_t, const detail::LinearSolution& s) {
        objective.push_back(svr_objective(s.weights, s.bias, p.x, p.y, cfg.c, cfg.epsilon));
      });
      ASSERT_EQ(objective.size(), cfg.epochs);
      for (std::size_t e = 1; e < objective.size(); ++e) {
        EXPECT_LE(objective[e], objective[e - 1] + 1e-6)
            << "seed " << seed << " C " << c << " epoch " << e;
      }
    }
  }
}

TEST(Subgradient, MatchesCentralDifferencesAwayFromKinks) {
  const LinearProblem p = linear_problem(60, 8, 5, 0.5);
  const double c = 1.7;
  const double eps = 0.2;
  const double h = 1e-5;
  Rng rng(55);
  int checked = 0;
  while (checked < 20) {
    std::vector<double> w(8);
    for (auto& v : w) v = rng.normal();
    const double b = rng.normal() * 0.5;
    // Skip points where a step of h could cross |r| = eps.
    bool near_kink = false;
    for (std::size_t i = 0; i < p.x.size(); ++i) {
      const double r = p.y[i] - (p.x[i].dot(w) + b);
      near_kink |= std::abs(std::abs(r) - eps) < 1e-3;
    }
    if (near_kink) continue;
    const auto [gw, gb] = svr_subgradient(w, b, p.x, p.y, c, eps);
    for (std::size_t j = 0; j < w.size(); ++j) {
      auto plus = w;
      auto minus = w;
      plus[j] += h;
      minus[j] -= h;
      const double fd = (svr_objective(plus, b, p.x, p.y, c, eps) -
                         svr_objective(minus, b, p.x, p.y, c, eps)) /
                        (2 * h);
      EXPECT_NEAR(gw[j], fd, 1e-4 * std::max(1.0, std::abs(fd)));
    }
    const double fd_b = (svr_objective(w, b + h, p.x, p.y, c, eps) -
                         svr_objective(w, b - h, p.x, p.y, c, eps)) /
                        (2 * h);
    EXPECT_NEAR(gb, fd_b, 1e-4 * std::max(1.0, std::abs(fd_b)));
    ++checked;
  }
}

TEST(Predict, DummyReturnsMean) {
  const DummyModel d{2.0};
  EXPECT_DOUBLE_EQ(predict(d, make_sparse(5, {{1, 0.3}})), 2.0);
  const TraitPredictor any = d;
  EXPECT_DOUBLE_EQ(predict(any, SparseVector{{}, {}, 5}), 2.0);
}

TEST(Predict, ClampsToScale) {
  SvrModel m;
  m.feature_dimension = 2;
  m.weights = {4.0, 0.0};
  m.bias = 0.2;
  EXPECT_DOUBLE_EQ(m.raw(make_sparse(2, {{0, 1.0}})), 4.2);
  EXPECT_DOUBLE_EQ(predict(m, make_sparse(2, {{0, 1.0}})), 3.0);
  m.weights = {-9.0, 0.0};
  EXPECT_DOUBLE_EQ(predict(m, make_sparse(2, {{0, 1.0}})), -3.0);
}

TEST(Predict, ZeroVectorGivesBias) {
  SvrModel m;
  m.feature_dimension = 3;
  m.weights = {1, 2, 3};
  m.bias = -1.25;
  EXPECT_DOUBLE_EQ(predict(m, SparseVector{{}, {}, 3}), -1.25);
  m.bias = 7;
  EXPECT_DOUBLE_EQ(predict(m, SparseVector{{}, {}, 3}), 3.0);
}

TEST(Predict, DimensionMismatchRejected) {
  SvrModel m;
  m.feature_dimension = 3;
  m.weights = {1, 2, 3};
  EXPECT_THROW(predict(m, SparseVector{{}, {}, 4}), DataError);
}

TEST(Predict, ClampNeverFlipsSign) {
  Rng rng(1);
  SvrModel m;
  m.feature_dimension = 1;
  m.weights = {1.0};
  for (int i = 0; i < 1000; ++i) {
    m.bias = (rng.uniform() - 0.5) * 20;
    const double raw = m.raw(SparseVector{{}, {}, 1});
    const double out = predict(m, SparseVector{{}, {}, 1});
    EXPECT_EQ(std::signbit(raw), std::signbit(out));
    EXPECT_LE(std::abs(out), 3.0);
  }
}

TEST(TrainDummy, Examples) {
  EXPECT_DOUBLE_EQ(train_dummy(std::vector<double>{1, 2, 3}).mean, 2.0);
  EXPECT_DOUBLE_EQ(train_dummy(std::vector<double>{-3}).mean, -3.0);
  EXPECT_THROW(train_dummy(std::vector<double>{}), DataError);
}

TEST(GridSearch, SingleConfig) {
  const LinearProblem p = linear_problem(50, 10, 2, 0.1);
  const std::vector<double> cs = {3.0};
  const std::vector<double> es = {0.2};
  const GridResult g = grid_search(p.x, p.y, cs, es, 5, 1);
  EXPECT_DOUBLE_EQ(g.best.c, 3.0);
  EXPECT_DOUBLE_EQ(g.best.epsilon, 0.2);
  ASSERT_EQ(g.table.size(), 1u);
}

TEST(GridSearch, NarrowTubeBeatsDegenerateTube) {
  const LinearProblem p = linear_problem(300, 30, 8, 0.2);
  const std::vector<double> cs = {1.0};
  const std::vector<double> es = {10.0, 0.1};
  const GridResult g = grid_search(p.x, p.y, cs, es, 5, 3);
  EXPECT_DOUBLE_EQ(g.best.epsilon, 0.1);
  EXPECT_LT(g.table[0].mae, g.table[1].mae);  // table sorted: 0.1 first
}

TEST(GridSearch, GridOrderDoesNotMatter) {
  const LinearProblem p = linear_problem(120, 20, 4, 0.3);
  const std::vector<double> cs = {10.0, 0.1, 1.0};
  const std::vector<double> es = {1.0, 0.1, 0.5};
  std::vector<double> cs_rev(cs.rbegin(), cs.rend());
  std::vector<double> es_rev(es.rbegin(), es.rend());
  const GridResult a = grid_search(p.x, p.y, cs, es, 4, 9);
  const GridResult b = grid_search(p.x, p.y, cs_rev, es_rev, 4, 9);
  EXPECT_EQ(a.best, b.best);
  ASSERT_EQ(a.table.size(), b.table.size());
  for (std::size_t i = 0; i < a.table.size(); ++i) EXPECT_EQ(a.table[i].mae, b.table[i].mae);
}

TEST(GridSearch, Preconditions) {
  const LinearProblem p = linear_problem(4, 3, 1, 0.1);
  const std::vector<double> cs = {1.0};
  const std::vector<double> es = {0.1};
  const std::vector<double> none;
  EXPECT_THROW(grid_search(p.x, p.y, cs, es, 5, 0), DataError);
  EXPECT_THROW(grid_search(p.x, p.y, cs, es, 1, 0), DataError);
  EXPECT_THROW(grid_search(p.x, p.y, none, es, 2, 0), DataError);
}

// Scaling every feature by s and C by 1/s^2 maps the objective onto itself;
// the ranking of epsilon values must survive.
TEST(GridSearch, EpsilonRankingSurvivesFeatureScaling) {
  const LinearProblem p = linear_problem(200, 20, 6, 0.3);
  const std::vector<double> es = {0.05, 1.0, 10.0};
  const auto ranking = [&](double scale) {
    std::vector<SparseVector> x = p.x;
    for (auto& row : x) {
      for (double& v : row.values) v *= scale;
    }
    const std::vector<double> cs = {1.0 / (scale * scale)};
    const GridResult g = grid_search(x, p.y, cs, es, 4, 2);
    std::vector<std::size_t> order = {0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return g.table[a].mae < g.table[b].mae; });
    return order;
  };
  EXPECT_EQ(ranking(1.0), ranking(2.0));
  EXPECT_EQ(ranking(1.0), ranking(0.5));
}

LabeledExample labeled(double label) {
  LabeledExample e;
  e.sample_id = "s" + std::to_string(label);
  e.label = label;
  return e;
}

TEST(Binarize, SignsAndDrops) {
  const std::vector<LabeledExample> ex = {labeled(-2), labeled(1.5), labeled(0)};
  const BinarizedExamples b = binarize_labels(ex);
  EXPECT_EQ(b.labels, (std::vector<BinaryLabel>{BinaryLabel::kLow, BinaryLabel::kHigh}));
  EXPECT_EQ(b.dropped, 1u);
}

TEST(Binarize, AllZero) {
  const std::vector<LabeledExample> ex = {labeled(0), labeled(0)};
  const BinarizedExamples b = binarize_labels(ex);
  EXPECT_TRUE(b.labels.empty());
  EXPECT_EQ(b.dropped, 2u);
}

TEST(TrainBinary, SeparableSetIsLearnedExactly) {
  Rng rng(3);
  std::vector<SparseVector> x;
  std::vector<BinaryLabel> y;
  for (int i = 0; i < 200; ++i) {
    const bool high = rng.bernoulli(0.5);
    const double margin = 0.5 + rng.uniform();
    x.push_back(make_sparse(3, {{0, high ? margin : -margin}, {1 + rng.below(2), rng.normal()}}));
    y.push_back(high ? BinaryLabel::kHigh : BinaryLabel::kLow);
  }
  SvrConfig c;
  c.c = 10;
  const LinearClassifier clf = train_binary(x, y, c);
  const std::vector<BinaryLabel> pred = [&] {
    std::vector<BinaryLabel> out;
    for (const auto& v : x) out.push_back(clf.classify(v));
    return out;
  }();
  EXPECT_DOUBLE_EQ(accuracy<BinaryLabel>(y, pred), 1.0);
}

TEST(TrainBinary, SingleClassRejected) {
  std::vector<SparseVector> x = {make_sparse(1, {{0, 1}}), make_sparse(1, {{0, 2}})};
  std::vector<BinaryLabel> y = {BinaryLabel::kHigh, BinaryLabel::kHigh};
  EXPECT_THROW(train_binary(x, y, {}), DataError);
}

TEST(Majority, SixtyFortySplit) {
  std::vector<BinaryLabel> y(100, BinaryLabel::kLow);
  std::fill(y.begin(), y.begin() + 40, BinaryLabel::kHigh);
  const MajorityModel m = train_majority(y);
  EXPECT_EQ(m.majority, BinaryLabel::kLow);
  std::vector<BinaryLabel> pred(y.size(), m.majority);
  EXPECT_DOUBLE_EQ(accuracy<BinaryLabel>(y, pred), 0.6);
}

TEST(Majority, TieGoesHigh) {
  std::vector<BinaryLabel> y = {BinaryLabel::kHigh, BinaryLabel::kLow};
  EXPECT_EQ(train_majority(y).majority, BinaryLabel::kHigh);
}

}  // namespace
}  // namespace traitforge
