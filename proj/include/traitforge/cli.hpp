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

// Command-line front end. run_cli() is the whole program; tools/traitforge.cpp
// only forwards main() to it so tests can drive it in-process.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#pragma once

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "traitforge/annotation_server.hpp"
#include "traitforge/bundle.hpp"
#include "traitforge/corpus.hpp"
#include "traitforge/corpus_io.hpp"
#include "traitforge/eval.hpp"
#include "traitforge/external.hpp"
#include "traitforge/http_api.hpp"
#include "traitforge/journal.hpp"
#include "traitforge/reliability.hpp"
#include "traitforge/report.hpp"
#include "traitforge/synth.hpp"
#include "traitforge/ttest.hpp"

namespace traitforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

namespace cli {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TrainerOptions {
  double c = 1.0;
  double epsilon = 0.1;
  std::size_t epochs = 15;
  double learning_rate = 0.5;
  std::size_t min_df = 2;
  std::size_t max_features = 200000;  // 0 = unlimited

  TrainerSpec spec(std::uint64_t seed) const {
    TrainerSpec s;
    s.features.min_df = min_df;
    s.features.max_features =
        max_features == 0 ? std::nullopt : std::optional<std::size_t>(max_features);
    s.svr.c = c;
    s.svr.epsilon = epsilon;
    s.svr.epochs = epochs;
    s.svr.learning_rate = learning_rate;
    s.svr.seed = seed;
    s.svr.validate();
    return s;
  }
};

struct Options {
  std::string data;
  std::string samples;
  std::string annotations;
  std::string bundle;
  std::string external;
  std::string out;
  std::string format = "csv";
  std::string pool = "lr";
  std::string scale;
  std::string text;
  std::string text_file;
  std::string a;
  std::string b;
  std::string journal;
  std::string samples_out;
  std::string static_dir;
  std::string host = "127.0.0.1";
  std::vector<std::string> traits;
  std::vector<double> grid_c{0.1, 1.0, 10.0};
  std::vector<double> grid_eps{0.1, 0.5, 1.0};
  std::size_t k = 5;
  std::uint64_t seed = 0;
  int port = 8080;
  double q = 0.5;
  bool dummy = false;
  std::size_t documents = 2000;
  double noise = 0.5;
  std::size_t lexicon_size = 6;
  TrainerOptions trainer;
};

inline void add_trainer_options(CLI::App* cmd, TrainerOptions& t) {
  cmd->add_option("--c", t.c, "SVR regularization constant C")->check(CLI::PositiveNumber);
  cmd->add_option("--epsilon", t.epsilon, "SVR insensitive-zone half width")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--epochs", t.epochs, "passes over the training data")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--learning-rate", t.learning_rate, "initial SGD step")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--min-df", t.min_df, "minimum document frequency of a term");
  cmd->add_option("--max-features", t.max_features, "vocabulary cap, 0 for none");
}

inline Json trainer_json(const TrainerOptions& t) {
  return Json{{"C", t.c},         {"epsilon", t.epsilon},         {"epochs", t.epochs},
              {"learning_rate", t.learning_rate}, {"min_df", t.min_df},
              {"max_features", t.max_features}};
}

inline std::vector<TraitId> parse_traits(const std::vector<std::string>& names) {
  std::vector<TraitId> out;
  for (const auto& n : names) {
    auto t = parse_trait(n);
    if (!t) throw UsageError("unknown trait '" + n + "'");
    if (std::find(out.begin(), out.end(), *t) == out.end()) out.push_back(*t);
  }
  return out;
}

inline std::pair<double, double> parse_scale(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw UsageError("--scale expects lo:hi");
  try {
    std::size_t used = 0;
    const std::string lo_s = s.substr(0, colon);
    const std::string hi_s = s.substr(colon + 1);
    const double lo = std::stod(lo_s, &used);
    if (used != lo_s.size()) throw UsageError("--scale expects lo:hi");
    const double hi = std::stod(hi_s, &used);
    if (used != hi_s.size()) throw UsageError("--scale expects lo:hi");
    if (!(lo < hi)) throw UsageError("--scale needs lo < hi");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--scale expects lo:hi");
  }
}

// "path.csv:COLUMN"; the column is after the last colon.
inline std::pair<std::string, std::string> parse_column_ref(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == s.size()) {
    throw UsageError("expected FILE:COLUMN, got '" + s + "'");
  }
  return {s.substr(0, colon), s.substr(colon + 1)};
}

// Output target: --out file or the caller's stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
      if (!*file_) throw DataError("cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw DataError("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

inline void emit_report(const Options& o, std::ostream& out, const ReportHeader& header,
                        const ReportTable& table, const Json& extra = Json::object()) {
  Sink sink(o.out, out);
  if (o.format == "json") {
    write_json(sink.get(), header, table, extra);
  } else {
    write_csv(sink.get(), header, table);
  }
  sink.finish();
}

inline Dataset load_dataset(const std::string& path) {
  Dataset ds = read_dataset(path);
  if (ds.examples.empty()) throw DataError("dataset '" + path + "' is empty");
  return ds;
}

inline Json traits_json(const std::vector<std::string>& names) {
  Json j = Json::array();
  for (const auto& n : names) j.push_back(n);
  return j;
}

// --- subcommands -----------------------------------------------------------

inline int cmd_ingest(const Options& o, std::ostream& out) {
  const auto kind = parse_pool_kind(o.pool);
  if (!kind) throw UsageError("--pool must be lr or hr");
  const auto samples = ingest_samples(o.samples);
  const auto annotations = ingest_annotations(o.annotations);
  std::set<std::string> hr;
  if (*kind == PoolKind::kHr) hr = build_hr_pool(annotations);
  Dataset ds = build_dataset(o.pool == "hr" ? "hr" : "lr", samples, annotations,
                             *kind == PoolKind::kHr ? &hr : nullptr);
  Sink sink(o.out, out);
  write_dataset(sink.get(), ds);
  sink.finish();
  log::info("ingest: ", ds.examples.size(), " labeled examples over ", ds.distinct_samples(),
            " samples");
  return kExitOk;
}

inline int cmd_stats(const Options& o, std::ostream& out) {
  const auto samples = ingest_samples(o.samples);
  const auto annotations = ingest_annotations(o.annotations);
  const StatsReport r = dataset_stats(annotations, samples);
  ReportHeader header{"stats", o.seed,
                      {{"samples", o.samples}, {"annotations", o.annotations}}};
  ReportTable table;
  table.title = "examples-per-trait";
  table.columns = {"Examples"};
  for (TraitId t : kAllTraits) {
    table.add_row(std::string(trait_label(t)),
                  {static_cast<double>(r.examples_per_trait[trait_index(t)])});
  }
  emit_report(o, out, header, table, {{"stats", to_json(r)}});
  return kExitOk;
}

inline int cmd_reliability(const Options& o, std::ostream& out) {
  const auto annotations = ingest_annotations(o.annotations);
  const FactorAlpha alphas = per_factor_alpha(annotations);
  ReportHeader header{"reliability", o.seed, {{"annotations", o.annotations}}};
  ReportTable table;
  table.title = "krippendorff-alpha";
  table.summary = false;
  table.columns = {"alpha", "pairable_values", "units"};
  for (TraitId t : kAllTraits) {
    const auto& a = alphas[trait_index(t)];
    if (!a) log::warn("alpha undefined for ", trait_name(t), ": insufficient pairable data");
    table.add_row(std::string(trait_label(t)),
                  {a ? a->alpha : std::nan(""), a ? double(a->pairable_values) : 0.0,
                   a ? double(a->units_used) : 0.0});
  }
  emit_report(o, out, header, table);
  return kExitOk;
}

inline int cmd_train(const Options& o, std::ostream&) {
  if (o.out.empty()) throw UsageError("train needs --out for the bundle");
  const Dataset ds = load_dataset(o.data);
  TraitModelBundle bundle = train_bundle(ds, o.trainer.spec(o.seed), o.dummy);
  bundle.metadata.dataset = o.data;
  save_bundle(bundle, o.out);
  log::info("train: bundle written to ", o.out);
  return kExitOk;
}

inline int cmd_cv(const Options& o, std::ostream& out, bool binary) {
  if (o.k < 2) throw UsageError("--k must be at least 2");
  const Dataset ds = load_dataset(o.data);
  const auto traits = parse_traits(o.traits);
  std::optional<ExternalPredictions> external;
  if (!o.external.empty()) external = load_external_predictions(o.external);
  const TrainerSpec spec = o.trainer.spec(o.seed);
  ReportHeader header{binary ? "cv-binary" : "cv", o.seed,
                      {{"data", o.data},
                       {"k", o.k},
                       {"traits", traits_json(o.traits)},
                       {"external", o.external},
                       {"trainer", trainer_json(o.trainer)}}};
  if (binary) {
    const auto r = cross_validate_binary(ds, spec, o.k, o.seed, traits,
                                         external ? &*external : nullptr);
    Json dropped = Json::object();
    for (const auto& [t, n] : r.dropped) dropped[std::string(trait_name(t))] = n;
    emit_report(o, out, header, r.table(), {{"dropped_zero_labels", dropped}});
  } else {
    const auto r = cross_validate(ds, spec, o.k, o.seed, traits, external ? &*external : nullptr);
    emit_report(o, out, header, r.table());
  }
  return kExitOk;
}

inline int cmd_grid(const Options& o, std::ostream& out) {
  if (o.k < 2) throw UsageError("--k must be at least 2");
  const Dataset ds = load_dataset(o.data);
  auto traits = parse_traits(o.traits);
  traits = detail::resolve_traits(ds, traits);
  const TrainerSpec spec = o.trainer.spec(o.seed);
  ReportHeader header{"grid", o.seed,
                      {{"data", o.data},
                       {"k", o.k},
                       {"traits", traits_json(o.traits)},
                       {"grid_c", o.grid_c},
                       {"grid_eps", o.grid_eps},
                       {"trainer", trainer_json(o.trainer)}}};
  ReportTable table;
  table.title = "grid-search";
  table.summary = false;
  table.columns = {"C", "epsilon", "MAE", "MSE", "best"};
  Json best = Json::object();
  for (TraitId t : traits) {
    const auto examples = ds.for_trait(t);
    const auto texts = detail::texts_of(examples);
    const auto y = detail::labels_of(examples);
    const FeaturizerModel featurizer = fit(texts, spec.features);
    const auto x = featurizer.transform_all(texts);
    const GridResult g = grid_search(x, y, o.grid_c, o.grid_eps, o.k, o.seed, spec.svr);
    for (const GridRow& row : g.table) {
      const bool is_best = row.c == g.best.c && row.epsilon == g.best.epsilon;
      table.add_row(std::string(trait_label(t)),
                    {row.c, row.epsilon, row.mae, row.mse, is_best ? 1.0 : 0.0});
    }
    best[std::string(trait_name(t))] = {{"C", g.best.c}, {"epsilon", g.best.epsilon}};
  }
  emit_report(o, out, header, table, {{"best", best}});
  return kExitOk;
}

inline int cmd_predict(const Options& o, std::ostream& out) {
  const int given = !o.text.empty() + !o.text_file.empty() + !o.data.empty();
  if (given != 1) throw UsageError("predict needs exactly one of --text, --text-file, --data");
  const TraitModelBundle bundle = load_bundle(o.bundle);
  Sink sink(o.out, out);
  if (!o.data.empty()) {
    const Dataset ds = load_dataset(o.data);
    std::map<std::string, SparseVector> cache;
    std::set<std::pair<std::string, TraitId>> seen;
    for (const auto& e : ds.examples) {
      if (!bundle.has(e.trait) || !seen.emplace(e.sample_id, e.trait).second) continue;
      auto it = cache.find(e.sample_id);
      if (it == cache.end()) it = cache.emplace(e.sample_id, bundle.featurizer.transform(e.text)).first;
      sink.get() << Json{{"sample_id", e.sample_id},
                         {"trait", trait_name(e.trait)},
                         {"prediction", bundle.predict_vector(e.trait, it->second)}}
                        .dump()
                 << '\n';
    }
  } else {
    std::string text = o.text;
    if (!o.text_file.empty()) {
      std::ifstream in(o.text_file, std::ios::binary);
      if (!in) throw DataError("cannot open '" + o.text_file + "'");
      text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (count_words(text) == 0) throw DataError("text is empty");
    Json j = Json::object();
    for (TraitId t : kAllTraits) {
      if (bundle.has(t)) j[std::string(trait_name(t))] = bundle.predict_text(t, text);
    }
    sink.get() << j.dump() << '\n';
  }
  sink.finish();
  return kExitOk;
}

inline int cmd_eval_external(const Options& o, std::ostream& out) {
  if (o.bundle.empty() == o.external.empty()) {
    throw UsageError("eval-external needs exactly one of --bundle, --external");
  }
  double lo = kScoreMin;
  double hi = kScoreMax;
  if (!o.scale.empty()) std::tie(lo, hi) = parse_scale(o.scale);
  const Dataset ds = read_dataset(o.data, lo, hi);
  if (ds.examples.empty()) throw DataError("dataset '" + o.data + "' is empty");
  const auto traits = parse_traits(o.traits);
  const ExternalPredictions predictions =
      o.bundle.empty() ? load_external_predictions(o.external)
                       : predict_dataset(load_bundle(o.bundle), ds);
  const ExternalReport r = evaluate_external(predictions, ds, traits);
  ReportHeader header{"eval-external", o.seed,
                      {{"data", o.data},
                       {"bundle", o.bundle},
                       {"external", o.external},
                       {"scale", o.scale},
                       {"traits", traits_json(o.traits)}}};
  emit_report(o, out, header, r.table(), {{"histograms", r.histograms_json()}});
  return kExitOk;
}

inline int cmd_ttest(const Options& o, std::ostream& out) {
  const auto [a_path, a_col] = parse_column_ref(o.a);
  const auto [b_path, b_col] = parse_column_ref(o.b);
  const auto a = read_csv_column(a_path, a_col);
  const auto b = read_csv_column(b_path, b_col);
  const TTestResult r = paired_ttest(a, b);
  if (o.format == "text") {
    Sink sink(o.out, out);
    char line[128];
    std::snprintf(line, sizeof line, "t=%.2f df=%zu p=%.4f\n", r.t, r.df, r.p);
    sink.get() << line;
    sink.finish();
    return kExitOk;
  }
  ReportHeader header{"ttest", o.seed, {{"a", o.a}, {"b", o.b}}};
  ReportTable table;
  table.title = "paired-t-test";
  table.row_header = "Test";
  table.summary = false;
  table.columns = {"t", "df", "p", "mean_diff"};
  table.add_row(a_col + "-" + b_col, {r.t, double(r.df), r.p, r.mean_diff});
  emit_report(o, out, header, table);
  return kExitOk;
}

inline int cmd_synth(const Options& o, std::ostream&) {
  if (o.out.empty()) throw UsageError("synth needs --out DIR");
  SynthConfig config = default_synth_config(o.lexicon_size);
  config.documents = o.documents;
  config.noise = o.noise;
  const SynthCorpus corpus = generate_synthetic(config, o.seed);
  std::filesystem::create_directories(o.out);
  for (const auto* ds : {&corpus.train, &corpus.shifted}) {
    const std::string path =
        (std::filesystem::path(o.out) / (ds == &corpus.train ? "train.jsonl" : "shifted.jsonl"))
            .string();
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write '" + path + "'");
    write_dataset(f, *ds);
    if (!f) throw DataError("failed writing '" + path + "'");
  }
  const ReportHeader header{"synth", o.seed,
                            {{"documents", o.documents},
                             {"noise", o.noise},
                             {"lexicon_size", o.lexicon_size}}};
  std::ofstream manifest(std::filesystem::path(o.out) / "manifest.json", std::ios::trunc);
  manifest << header.to_json().dump(2) << '\n';
  return kExitOk;
}

inline httplib::Server* g_server = nullptr;

inline int cmd_serve(const Options& o, std::ostream& out) {
  if (o.journal.empty()) throw UsageError("serve needs --journal");
  const auto kind = parse_pool_kind(o.pool);
  if (!kind) throw UsageError("--pool must be lr or hr");
  if (!(o.q >= 0.0 && o.q <= 1.0)) throw UsageError("--q must lie in [0, 1]");
  const auto samples = ingest_samples(o.samples);
  std::vector<Annotation> annotations;
  if (!o.annotations.empty()) annotations = ingest_annotations(o.annotations);
  if (*kind == PoolKind::kHr && o.annotations.empty()) {
    throw UsageError("--pool hr needs --annotations to select the pool");
  }
  ServiceConfig config;
  config.journal_path = o.journal;
  config.force_probability = o.q;
  config.seed = o.seed;
  AnnotationService service(config, make_pool(samples, annotations, *kind));
  httplib::Server server;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  out << "serving " << service.progress().pool_size << " samples on http://" << o.host << ':'
      << o.port << std::endl;
  const bool ok = serve_http(server, service, o.host, o.port, o.static_dir);
  g_server = nullptr;
  if (!ok) throw DataError("cannot listen on " + o.host + ":" + std::to_string(o.port));
  return kExitOk;
}

inline int cmd_export(const Options& o, std::ostream& out) {
  const auto records = read_journal(o.journal);
  Sink sink(o.out, out);
  std::unique_ptr<std::ofstream> samples;
  if (!o.samples_out.empty()) {
    samples = std::make_unique<std::ofstream>(o.samples_out, std::ios::binary | std::ios::trunc);
    if (!*samples) throw DataError("cannot write '" + o.samples_out + "'");
  }
  export_annotations(records, sink.get(), samples.get());
  sink.finish();
  return kExitOk;
}

}  // namespace cli

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  using namespace cli;
  Options o;
  CLI::App app{"traitforge: Big Five trait annotation, training and evaluation", "traitforge"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  const auto formats = CLI::IsMember({"csv", "json"});
  const auto add_format = [&](CLI::App* c) {
    c->add_option("--format", o.format, "report format")->check(formats);
  };
  const auto add_out = [&](CLI::App* c, const char* what) { c->add_option("--out", o.out, what); };
  const auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "random seed"); };
  const auto add_traits = [&](CLI::App* c) {
    c->add_option("--trait", o.traits, "restrict to these traits")->delimiter(',');
  };

  auto* ingest = app.add_subcommand("ingest", "compound annotations into a labeled dataset");
  ingest->add_option("--samples", o.samples, "samples JSONL")->required();
  ingest->add_option("--annotations", o.annotations, "annotations JSONL")->required();
  ingest->add_option("--pool", o.pool, "lr: every sample, hr: samples with an extreme score")
      ->check(CLI::IsMember({"lr", "hr"}));
  add_out(ingest, "dataset JSONL (default stdout)");

  auto* stats = app.add_subcommand("stats", "corpus statistics and label histograms");
  stats->add_option("--samples", o.samples, "samples JSONL")->required();
  stats->add_option("--annotations", o.annotations, "annotations JSONL")->required();
  add_out(stats, "report path");
  add_format(stats);

  auto* reliability = app.add_subcommand("reliability", "Krippendorff's alpha per trait");
  reliability->add_option("--annotations", o.annotations, "annotations JSONL")->required();
  add_out(reliability, "report path");
  add_format(reliability);

  auto* train = app.add_subcommand("train", "train a model bundle");
  train->add_option("--data", o.data, "dataset JSONL")->required();
  train->add_flag("--dummy", o.dummy, "train mean predictors instead of SVRs");
  add_out(train, "bundle path");
  add_seed(train);
  add_trainer_options(train, o.trainer);

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of SVR and dummy");
  auto* cvb = app.add_subcommand("cv-binary", "k-fold cross-validation of high/low classifiers");
  for (auto* c : {cv, cvb}) {
    c->add_option("--data", o.data, "dataset JSONL")->required();
    c->add_option("--k", o.k, "folds");
    c->add_option("--external", o.external, "extra predictions JSONL, reported as LM");
    add_seed(c);
    add_traits(c);
    add_out(c, "report path");
    add_format(c);
    add_trainer_options(c, o.trainer);
  }

  auto* grid = app.add_subcommand("grid", "grid search over C and epsilon");
  grid->add_option("--data", o.data, "dataset JSONL")->required();
  grid->add_option("--k", o.k, "folds");
  grid->add_option("--grid-c", o.grid_c, "C values")->delimiter(',');
  grid->add_option("--grid-eps", o.grid_eps, "epsilon values")->delimiter(',');
  add_seed(grid);
  add_traits(grid);
  add_out(grid, "report path");
  add_format(grid);
  add_trainer_options(grid, o.trainer);

  auto* predict = app.add_subcommand("predict", "score texts with a bundle");
  predict->add_option("--bundle", o.bundle, "bundle path")->required();
  predict->add_option("--text", o.text, "text to score");
  predict->add_option("--text-file", o.text_file, "file holding the text to score");
  predict->add_option("--data", o.data, "dataset JSONL; writes prediction JSONL");
  add_out(predict, "output path");

  auto* evx = app.add_subcommand("eval-external", "score predictions against labels");
  evx->add_option("--data", o.data, "labeled dataset JSONL")->required();
  evx->add_option("--bundle", o.bundle, "bundle to predict with");
  evx->add_option("--external", o.external, "predictions JSONL");
  evx->add_option("--scale", o.scale, "label scale lo:hi mapped onto -3..3");
  add_traits(evx);
  add_out(evx, "report path");
  add_format(evx);

  auto* ttest = app.add_subcommand("ttest", "paired t-test between two report columns");
  ttest->add_option("--a", o.a, "FILE.csv:COLUMN")->required();
  ttest->add_option("--b", o.b, "FILE.csv:COLUMN")->required();
  ttest->add_option("--format", o.format, "text, csv or json")
      ->check(CLI::IsMember({"text", "csv", "json"}));
  add_out(ttest, "output path");

  auto* synth = app.add_subcommand("synth", "generate the planted-signal corpus");
  synth->add_option("--documents", o.documents, "documents per domain")
      ->check(CLI::PositiveNumber);
  synth->add_option("--noise", o.noise, "label noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  synth->add_option("--lexicon-size", o.lexicon_size, "words per trait lexicon")
      ->check(CLI::PositiveNumber);
  add_seed(synth);
  add_out(synth, "output directory");

  auto* serve = app.add_subcommand("serve", "run the annotation server");
  serve->add_option("--samples", o.samples, "samples JSONL")->required();
  serve->add_option("--annotations", o.annotations, "prior annotations (for --pool hr)");
  serve->add_option("--journal", o.journal, "journal JSONL")->required();
  serve->add_option("--pool", o.pool, "lr or hr")->check(CLI::IsMember({"lr", "hr"}));
  serve->add_option("--q", o.q, "probability of forcing a trait");
  serve->add_option("--port", o.port, "TCP port");
  serve->add_option("--host", o.host, "bind address");
  serve->add_option("--static", o.static_dir, "directory of the UI bundle");
  add_seed(serve);

  auto* exp = app.add_subcommand("export", "write journal annotations as corpus JSONL");
  exp->add_option("--journal", o.journal, "journal JSONL")->required();
  exp->add_option("--samples-out", o.samples_out, "where to write annotator-authored samples");
  add_out(exp, "annotations JSONL (default stdout)");

  // ttest defaults to a one-line summary; the others to CSV.
  const bool ttest_requested = argc > 1 && std::string_view(argv[1]) == "ttest";
  if (ttest_requested) o.format = "text";

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    app.exit(e, err, err);
    return kExitUsage;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*stats) return cmd_stats(o, out);
    if (*reliability) return cmd_reliability(o, out);
    if (*train) return cmd_train(o, out);
    if (*cv) return cmd_cv(o, out, false);
    if (*cvb) return cmd_cv(o, out, true);
    if (*grid) return cmd_grid(o, out);
    if (*predict) return cmd_predict(o, out);
    if (*evx) return cmd_eval_external(o, out);
    if (*ttest) return cmd_ttest(o, out);
    if (*synth) return cmd_synth(o, out);
    if (*serve) return cmd_serve(o, out);
    if (*exp) return cmd_export(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace traitforge
