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

// Cross-validated and cross-domain evaluation.
//
// Cross-validation fits the featurizer, the SVR and the dummy baseline on
// each training fold only, collects out-of-fold predictions for every
// example, and computes the metrics once over the pooled predictions.

#pragma once

#include <atomic>
#include <exception>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "traitforge/corpus.hpp"
#include "traitforge/external.hpp"
#include "traitforge/features.hpp"
#include "traitforge/folds.hpp"
#include "traitforge/metrics.hpp"
#include "traitforge/models.hpp"
#include "traitforge/report.hpp"
#include "traitforge/ttest.hpp"

namespace traitforge {

struct TrainerSpec {
  FeaturizerConfig features;
  SvrConfig svr;
};

inline Json to_json(const TrainerSpec& spec) {
  Json features{{"word_ngrams", spec.features.word_ngrams},
                {"char_ngrams", spec.features.char_ngrams},
                {"min_df", spec.features.min_df}};
  features["max_features"] =
      spec.features.max_features ? Json(*spec.features.max_features) : Json(nullptr);
  return Json{{"features", features},
              {"svr",
               {{"C", spec.svr.c},
                {"epsilon", spec.svr.epsilon},
                {"epochs", spec.svr.epochs},
                {"learning_rate", spec.svr.learning_rate},
                {"seed", spec.svr.seed}}}};
}

inline constexpr std::string_view kModelSvr = "SVR";
inline constexpr std::string_view kModelDummy = "Dum";
inline constexpr std::string_view kModelExternal = "LM";

namespace detail {

inline std::vector<std::string> texts_of(std::span<const LabeledExample> examples) {
  std::vector<std::string> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.text);
  return out;
}

inline std::vector<double> labels_of(std::span<const LabeledExample> examples) {
  std::vector<double> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.label);
  return out;
}

inline std::vector<TraitId> resolve_traits(const Dataset& ds, std::span<const TraitId> requested) {
  if (!requested.empty()) return {requested.begin(), requested.end()};
  std::vector<TraitId> out;
  for (TraitId t : kAllTraits) {
    if (std::any_of(ds.examples.begin(), ds.examples.end(),
                    [&](const LabeledExample& e) { return e.trait == t; })) {
      out.push_back(t);
    }
  }
  return out;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written to per-index slots so the outcome does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline std::size_t default_threads() {
  return std::max(1u, std::min(8u, std::thread::hardware_concurrency()));
}

}  // namespace detail

struct CvReport {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::vector<std::string> models;
  std::vector<TraitId> traits;
  std::map<TraitId, std::map<std::string, EvalMetrics>> rows;

  const EvalMetrics& at(TraitId t, std::string_view model) const {
    return rows.at(t).at(std::string(model));
  }

  // Columns follow the published layout: MAE_*, then MSE_*, then R2_*.
  ReportTable table() const {
    ReportTable tbl;
    tbl.title = "cross-validation";
    for (const char* metric : {"MAE", "MSE", "R2"}) {
      for (const auto& m : models) tbl.columns.push_back(std::string(metric) + "_" + m);
    }
    for (TraitId t : traits) {
      std::vector<double> values;
      for (int metric = 0; metric < 3; ++metric) {
        for (const auto& m : models) {
          const EvalMetrics& e = rows.at(t).at(m);
          values.push_back(metric == 0 ? e.mae : metric == 1 ? e.mse : e.r2);
        }
      }
      tbl.add_row(std::string(trait_label(t)), std::move(values));
    }
    return tbl;
  }
};

struct OutOfFold {
  std::vector<double> actual;
  std::vector<double> svr;
  std::vector<double> dummy;
};

// Out-of-fold predictions for one trait's examples, in example order.
inline OutOfFold out_of_fold_predictions(std::span<const LabeledExample> examples,
                                         const TrainerSpec& spec, std::size_t k,
                                         std::uint64_t seed) {
  const auto folds = kfold_split(examples.size(), k, seed);
  const auto texts = detail::texts_of(examples);
  OutOfFold oof;
  oof.actual = detail::labels_of(examples);
  oof.svr.assign(examples.size(), 0.0);
  oof.dummy.assign(examples.size(), 0.0);
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const auto train_idx = training_indices(folds, f);
    const auto train_texts = gather(std::span<const std::string>(texts),
                                    std::span<const std::size_t>(train_idx));
    const auto train_y = gather(std::span<const double>(oof.actual),
                                std::span<const std::size_t>(train_idx));
    const FeaturizerModel featurizer = fit(train_texts, spec.features);
    const auto train_x = featurizer.transform_all(train_texts);
    const SvrModel svr = train_svr(train_x, train_y, spec.svr);
    const DummyModel dummy = train_dummy(train_y);
    for (std::size_t i : folds[f]) {
      const SparseVector x = featurizer.transform(texts[i]);
      oof.svr[i] = predict(svr, x);
      oof.dummy[i] = predict(dummy, x);
    }
  }
  return oof;
}

inline CvReport cross_validate(const Dataset& dataset, const TrainerSpec& spec, std::size_t k,
                               std::uint64_t seed, std::span<const TraitId> traits = {},
                               const ExternalPredictions* external = nullptr) {
  CvReport report;
  report.folds = k;
  report.seed = seed;
  report.traits = detail::resolve_traits(dataset, traits);
  if (report.traits.empty()) throw DataError("dataset has no labeled examples");
  if (external) report.models.emplace_back(kModelExternal);
  report.models.emplace_back(kModelSvr);
  report.models.emplace_back(kModelDummy);

  std::vector<std::vector<LabeledExample>> per_trait;
  for (TraitId t : report.traits) {
    per_trait.push_back(dataset.for_trait(t));
    if (per_trait.back().size() < k) {
      throw DataError("trait " + std::string(trait_name(t)) + " has " +
                      std::to_string(per_trait.back().size()) + " examples; " +
                      std::to_string(k) + "-fold cross-validation needs at least " +
                      std::to_string(k));
    }
  }
  std::vector<OutOfFold> results(report.traits.size());
  detail::parallel_for(report.traits.size(), detail::default_threads(), [&](std::size_t i) {
    results[i] = out_of_fold_predictions(per_trait[i], spec, k, seed);
  });
  for (std::size_t i = 0; i < report.traits.size(); ++i) {
    const TraitId t = report.traits[i];
    auto& row = report.rows[t];
    row[std::string(kModelSvr)] = evaluate(results[i].actual, results[i].svr);
    row[std::string(kModelDummy)] = evaluate(results[i].actual, results[i].dummy);
    if (external) {
      std::vector<double> ext;
      for (const auto& e : per_trait[i]) ext.push_back(external->require(e.sample_id, t));
      row[std::string(kModelExternal)] = evaluate(results[i].actual, ext);
    }
  }
  return report;
}

// Binary high/low variant: accuracy of the hinge-loss classifier against a
// majority-class baseline, both cross-validated.
struct BinaryCvReport {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  std::vector<std::string> models;
  std::vector<TraitId> traits;
  std::map<TraitId, std::map<std::string, double>> accuracy;
  std::map<TraitId, std::size_t> dropped;

  ReportTable table() const {
    ReportTable tbl;
    tbl.title = "binary cross-validation";
    for (const auto& m : models) tbl.columns.push_back("ACC_" + m);
    for (TraitId t : traits) {
      std::vector<double> values;
      for (const auto& m : models) values.push_back(accuracy.at(t).at(m));
      tbl.add_row(std::string(trait_label(t)), std::move(values));
    }
    return tbl;
  }
};

inline BinaryCvReport cross_validate_binary(const Dataset& dataset, const TrainerSpec& spec,
                                            std::size_t k, std::uint64_t seed,
                                            std::span<const TraitId> traits = {},
                                            const ExternalPredictions* external = nullptr) {
  BinaryCvReport report;
  report.folds = k;
  report.seed = seed;
  report.traits = detail::resolve_traits(dataset, traits);
  if (report.traits.empty()) throw DataError("dataset has no labeled examples");
  if (external) report.models.emplace_back(kModelExternal);
  report.models.emplace_back(kModelSvr);
  report.models.emplace_back(kModelDummy);

  std::vector<BinarizedExamples> per_trait;
  for (TraitId t : report.traits) {
    const auto examples = dataset.for_trait(t);
    per_trait.push_back(binarize_labels(examples));
    report.dropped[t] = per_trait.back().dropped;
    if (per_trait.back().labels.size() < k) {
      throw DataError("trait " + std::string(trait_name(t)) + " has too few nonzero labels for " +
                      std::to_string(k) + "-fold cross-validation");
    }
  }
  std::vector<std::pair<double, double>> results(report.traits.size());
  detail::parallel_for(report.traits.size(), detail::default_threads(), [&](std::size_t ti) {
    const BinarizedExamples& b = per_trait[ti];
    const auto folds = kfold_split(b.labels.size(), k, seed);
    std::vector<BinaryLabel> svr_pred(b.labels.size());
    std::vector<BinaryLabel> dum_pred(b.labels.size());
    for (std::size_t f = 0; f < folds.size(); ++f) {
      const auto train_idx = training_indices(folds, f);
      const auto train_texts = gather(std::span<const std::string>(b.texts),
                                      std::span<const std::size_t>(train_idx));
      const auto train_labels = gather(std::span<const BinaryLabel>(b.labels),
                                       std::span<const std::size_t>(train_idx));
      const FeaturizerModel featurizer = fit(train_texts, spec.features);
      const auto train_x = featurizer.transform_all(train_texts);
      const LinearClassifier clf = train_binary(train_x, train_labels, spec.svr);
      const MajorityModel majority = train_majority(train_labels);
      for (std::size_t i : folds[f]) {
        svr_pred[i] = clf.classify(featurizer.transform(b.texts[i]));
        dum_pred[i] = majority.majority;
      }
    }
    results[ti] = {accuracy<BinaryLabel>(b.labels, svr_pred),
                   accuracy<BinaryLabel>(b.labels, dum_pred)};
  });
  for (std::size_t i = 0; i < report.traits.size(); ++i) {
    const TraitId t = report.traits[i];
    report.accuracy[t][std::string(kModelSvr)] = results[i].first;
    report.accuracy[t][std::string(kModelDummy)] = results[i].second;
    if (external) {
      const BinarizedExamples& b = per_trait[i];
      std::vector<BinaryLabel> ext;
      for (const auto& id : b.sample_ids) {
        ext.push_back(external->require(id, t) < 0.0 ? BinaryLabel::kLow : BinaryLabel::kHigh);
      }
      report.accuracy[t][std::string(kModelExternal)] = accuracy<BinaryLabel>(b.labels, ext);
    }
  }
  return report;
}

// Cross-domain evaluation of a fixed predictor.
struct ExternalReport {
  std::vector<TraitId> traits;
  std::map<TraitId, EvalMetrics> rows;
  std::map<TraitId, Histogram> actual_histograms;
  std::map<TraitId, Histogram> predicted_histograms;

  ReportTable table() const {
    ReportTable tbl;
    tbl.title = "external evaluation";
    tbl.columns = {"MAE", "MSE", "R2"};
    for (TraitId t : traits) {
      const EvalMetrics& m = rows.at(t);
      tbl.add_row(std::string(trait_label(t)), {m.mae, m.mse, m.r2});
    }
    return tbl;
  }

  Json histograms_json() const {
    Json j = Json::object();
    for (TraitId t : traits) {
      j[std::string(trait_name(t))] = {
          {"actual", {{"centers", actual_histograms.at(t).centers},
                      {"counts", actual_histograms.at(t).counts}}},
          {"predicted", {{"centers", predicted_histograms.at(t).centers},
                         {"counts", predicted_histograms.at(t).counts}}}};
    }
    return j;
  }
};

// Evaluates fixed per-(sample, trait) predictions against a labeled set.
// Every labeled example must have a prediction.
inline ExternalReport evaluate_external(const ExternalPredictions& predictions,
                                        const Dataset& dataset,
                                        std::span<const TraitId> traits = {}) {
  ExternalReport report;
  report.traits = detail::resolve_traits(dataset, traits);
  for (TraitId t : report.traits) {
    const auto examples = dataset.for_trait(t);
    std::vector<double> y;
    std::vector<double> y_hat;
    for (const auto& e : examples) {
      y.push_back(e.label);
      y_hat.push_back(predictions.require(e.sample_id, t));
    }
    if (y.empty()) throw DataError("no examples for trait " + std::string(trait_name(t)));
    report.rows[t] = evaluate(y, y_hat);
    report.actual_histograms[t] = make_histogram(y);
    report.predicted_histograms[t] = make_histogram(y_hat);
  }
  return report;
}

}  // namespace traitforge
