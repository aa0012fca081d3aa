// Copyright 2026 The dialectid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.h"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <new>
#include <string>
#include <string_view>
#include <utility>

#include "dialectid/error.h"
#include "dialectid/eval.h"

namespace dialectid::cli {
namespace {

// Runs fn and prefixes any error with the stage name, keeping its kind.
template <typename Fn>
auto stage(std::string_view name, Fn&& fn) -> decltype(fn()) {
  const auto prefixed = [&](const std::exception& e) {
    return std::string(name) + ": " + e.what();
  };
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(prefixed(e));
  } catch (const DataError& e) {
    throw DataError(prefixed(e));
  } catch (const std::bad_alloc&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(prefixed(e));
  }
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string round_trip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string pad(std::string_view s, std::size_t width) {
  std::string out(s);
  if (out.size() < width) out.append(width - out.size(), ' ');
  return out;
}

void write_file(const std::filesystem::path& path,
                const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw Error("failed writing " + path.string());
}

void require_labels(const Corpus& corpus, std::size_t n) {
  if (corpus.labels().size() < n) {
    throw DataError("corpus has " + std::to_string(corpus.labels().size()) +
                    " label(s), need at least " + std::to_string(n));
  }
}

struct FitResult {
  GridSearchResult grid;
  LinearModel model;
};

FitResult fit(const Corpus& train, const FeatureSpec& spec, const TrainConfig& cfg) {
  GridSearchResult grid = stage("grid search", [&] { return grid_search(train, spec, cfg); });
  LinearModel model =
      stage("training", [&] { return train_ovr(train, spec, grid.best_c, cfg); });
  return {std::move(grid), std::move(model)};
}

const GridPoint& best_point(const GridSearchResult& grid) {
  for (const auto& p : grid.points) {
    if (p.c == grid.best_c) return p;
  }
  return grid.points.front();
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) != nullptr) return kExitConfigError;
  if (dynamic_cast<const DataError*>(&e) != nullptr) return kExitDataError;
  return kExitRuntimeError;
}

void cmd_train(const RunConfig& config, std::ostream& log) {
  const Corpus corpus = stage("loading corpus", [&] { return load_corpus(config); });
  require_labels(corpus, 2);
  auto [train, test] =
      stage("splitting", [&] { return split_train_test(corpus, config.split); });
  log << "features " << config.features.name() << ": " << train.size()
      << " training and " << test.size() << " test sentences\n";

  const FitResult fitted = fit(train, config.features, config.train);
  for (const auto& p : fitted.grid.points) {
    log << "  C=" << round_trip(p.c) << "  cv accuracy "
        << fixed(100.0 * p.mean_accuracy, 3) << "%\n";
  }
  log << "best C=" << round_trip(fitted.grid.best_c) << ", "
      << fitted.model.feature_index().size() << " features\n";

  stage("writing outputs", [&] {
    const auto model_path = config.model_path();
    std::filesystem::create_directories(config.out_dir);
    if (model_path.has_parent_path()) {
      std::filesystem::create_directories(model_path.parent_path());
    }
    save_model(fitted.model, model_path);
    write_file(config.out_dir / "grid.tsv",
               [&](std::ostream& out) { write_grid_report(out, fitted.grid); });
    write_file(config.out_dir / "train.tsv",
               [&](std::ostream& out) { write_tsv_corpus(out, train); });
    write_file(config.out_dir / "test.tsv",
               [&](std::ostream& out) { write_tsv_corpus(out, test); });
    log << "model written to " << model_path.string() << '\n';
  });
}

void cmd_evaluate(const RunConfig& config, std::ostream& log) {
  const LinearModel model =
      stage("loading model", [&] { return load_model(config.model_path()); });
  const Corpus test = stage("loading corpus", [&] { return load_corpus(config); });
  const EvalReport report = stage("evaluating", [&] { return evaluate(model, test); });
  const auto errors = stage("evaluating", [&] { return error_report(model, test); });

  stage("writing outputs", [&] {
    write_file(config.out_dir / "metrics.tsv",
               [&](std::ostream& out) { write_metrics_tsv(out, report); });
    write_file(config.out_dir / "confusion.tsv",
               [&](std::ostream& out) { write_confusion_tsv(out, report.confusion); });
    write_file(config.out_dir / "errors.tsv", [&](std::ostream& out) {
      write_error_report_tsv(out, errors, model.classes());
    });
  });
  log << format_report(report);
}

void cmd_predict(const RunConfig& config, std::istream& stdin_stream,
                 std::ostream& out) {
  const LinearModel model =
      stage("loading model", [&] { return load_model(config.model_path()); });
  std::ifstream file;
  std::istream* in = &stdin_stream;
  if (config.input != "-") {
    file.open(config.input, std::ios::binary);
    if (!file) throw DataError("predicting: cannot open input " + config.input);
    in = &file;
  }

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(*in, line)) {
    ++line_no;
    const std::string text = stage("predicting", [&] {
      try {
        return normalize_text(line);
      } catch (const DataError& e) {
        throw DataError("input line " + std::to_string(line_no) + ": " + e.what());
      }
    });
    if (text.empty()) continue;
    const FeatureVector v = vectorize(text, model.feature_index(), model.feature_spec());
    const std::vector<double> scores = model.decision_values(v);
    out << model.classes()[argmax_class(scores)] << '\t' << text;
    if (config.scores) {
      for (double s : scores) out << '\t' << round_trip(s);
    }
    out << '\n';
  }
  if (in->bad()) throw Error("predicting: read error on input");
  out.flush();
  if (!out) throw Error("predicting: failed writing output");
}

void cmd_similarity(const RunConfig& config, std::ostream& log) {
  const Corpus corpus = stage("loading corpus", [&] { return load_corpus(config); });
  require_labels(corpus, 2);
  const OverlapMatrix m =
      stage("lexical overlap", [&] { return overlap_matrix(corpus, config.similarity); });
  const auto path = config.out_dir / "overlap.tsv";
  stage("writing outputs", [&] {
    write_file(path, [&](std::ostream& out) { write_overlap_tsv(out, m); });
  });
  write_overlap_tsv(log, m);
  log << "written to " << path.string() << '\n';
}

void cmd_distance(const RunConfig& config, std::ostream& log) {
  const Corpus corpus = stage("loading corpus", [&] { return load_corpus(config); });
  require_labels(corpus, 2);
  const DistanceMatrix m = stage("edit distance", [&] {
    return distance_matrix(corpus, config.similarity, config.variant);
  });
  const auto path =
      config.out_dir / ("distance-" + std::string(to_string(config.variant)) + ".tsv");
  stage("writing outputs", [&] {
    write_file(path, [&](std::ostream& out) { write_distance_tsv(out, m); });
  });
  write_distance_tsv(log, m);
  log << "written to " << path.string() << '\n';
}

void cmd_sweep(const RunConfig& config, std::ostream& log) {
  const std::vector<std::string> names =
      config.sweep_sets.empty() ? standard_feature_set_names() : config.sweep_sets;
  const Corpus corpus = stage("loading corpus", [&] { return load_corpus(config); });
  require_labels(corpus, 2);
  const auto [train, test] =
      stage("splitting", [&] { return split_train_test(corpus, config.split); });

  struct Row {
    std::string name;
    double best_c;
    double cv_accuracy;
    EvalReport report;
  };
  std::vector<Row> rows;
  for (const auto& name : names) {
    const FeatureSpec spec = feature_set_from_name(name);
    const FitResult fitted = fit(train, spec, config.train);
    EvalReport report = stage("evaluating", [&] { return evaluate(fitted.model, test); });
    log << name << ": best C=" << round_trip(fitted.grid.best_c) << ", accuracy "
        << fixed(100.0 * report.accuracy, 3) << "%\n";
    rows.push_back({name, fitted.grid.best_c, best_point(fitted.grid).mean_accuracy,
                    std::move(report)});
  }

  stage("writing outputs", [&] {
    write_file(config.out_dir / "sweep.tsv", [&](std::ostream& out) {
      out << "feature_set\tbest_c\tcv_accuracy\taccuracy\tprecision\trecall\tf1\n";
      for (const auto& r : rows) {
        out << r.name << '\t' << round_trip(r.best_c) << '\t' << round_trip(r.cv_accuracy)
            << '\t' << round_trip(r.report.accuracy) << '\t'
            << round_trip(r.report.macro.precision) << '\t'
            << round_trip(r.report.macro.recall) << '\t' << round_trip(r.report.macro.f1)
            << '\n';
      }
    });
  });

  log << '\n' << pad("Feature set", 13) << pad("Accuracy", 10) << pad("Precision", 11)
      << pad("Recall", 8) << "F1\n";
  for (const auto& r : rows) {
    log << pad(r.name, 13) << pad(fixed(100.0 * r.report.accuracy, 3), 10)
        << pad(fixed(r.report.macro.precision, 2), 11)
        << pad(fixed(r.report.macro.recall, 2), 8) << fixed(r.report.macro.f1, 2)
        << '\n';
  }
}

}  // namespace dialectid::cli
