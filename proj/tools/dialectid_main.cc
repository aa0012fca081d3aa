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

// Command-line front end: dialectid <command> [--config FILE] [flags].

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cli/commands.h"
#include "cli/run_config.h"

namespace {

using dialectid::cli::Settings;

const std::map<std::string, std::string>& key_help() {
  static const std::map<std::string, std::string> help = {
      {"tsv", "corpus file with label<TAB>sentence lines (repeatable)"},
      {"lang", "LABEL=PATH file with one sentence per line (repeatable)"},
      {"features", "feature set name: C1..C3, W1..W3 or Ci+Wj"},
      {"char-orders", "character n-gram orders, e.g. 2,3 (instead of --features)"},
      {"word-orders", "word n-gram orders, e.g. 1 (instead of --features)"},
      {"train-fraction", "share of each label used for training (default 0.8)"},
      {"seed", "seed for splitting, folds and sampling (default 0)"},
      {"stratified", "split each label separately: true or false (default true)"},
      {"c-grid", "candidate C values (default 0.01,0.1,1,10,100)"},
      {"folds", "cross-validation folds (default 5)"},
      {"tolerance", "solver stopping tolerance (default 1e-4)"},
      {"max-epochs", "solver epoch limit (default 1000)"},
      {"min-count", "drop n-grams seen fewer times in training (default 1)"},
      {"hash-buckets", "hash n-grams into this many columns; 0 keeps a vocabulary (default 0)"},
      {"sample-size", "sentences sampled per language (default 10000)"},
      {"sample-pairs", "word pairs sampled per language pair; 0 means all (default 0)"},
      {"variant", "overall or length-controlled (default overall)"},
      {"out", "output directory (default .)"},
      {"model", "model file (default <out>/model.bin)"},
      {"input", "input file, - for stdin (default -)"},
      {"sets", "feature sets to sweep (default all 15)"},
      {"threads", "worker threads (default $DIALECTID_THREADS or 1)"},
  };
  return help;
}

bool is_list_key(const std::string& key) {
  return key == "tsv" || key == "lang" || key == "c-grid" || key == "sets";
}

class Command {
 public:
  Command(CLI::App& parent, const std::string& name, const std::string& description)
      : app_(parent.add_subcommand(name, description)) {
    app_->add_option("--config", config_path_, "flat key = value config file");
  }

  Command& keys(std::initializer_list<const char*> names) {
    for (const char* name : names) {
      const std::string key = name;
      auto* opt = app_->add_option("--" + key, values_[key], key_help().at(key));
      opt->expected(1)->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    }
    return *this;
  }

  Command& scores_flag() {
    scores_ = app_->add_flag("--scores", "append one score per class");
    return *this;
  }

  bool parsed() const { return app_->parsed(); }
  const std::string& name() const { return app_->get_name(); }

  Settings settings() const {
    Settings s;
    if (!config_path_.empty()) s = dialectid::cli::load_config_file(config_path_);
    Settings flags;
    for (const auto& [key, values] : values_) {
      if (values.empty()) continue;
      if (is_list_key(key)) {
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : ",") + v;
        flags[key] = joined;
      } else {
        flags[key] = values.back();
      }
    }
    if (scores_ != nullptr && scores_->count() > 0) flags["scores"] = "true";
    return dialectid::cli::merge_settings(std::move(s), flags);
  }

 private:
  CLI::App* app_;
  std::string config_path_;
  std::map<std::string, std::vector<std::string>> values_;
  CLI::Option* scores_ = nullptr;
};

}  // namespace

int main(int argc, char** argv) {
  namespace cli = dialectid::cli;

  CLI::App app{"Language identification with n-gram features and linear SVMs"};
  app.set_version_flag("--version", "dialectid 0.1.0");
  app.require_subcommand(1);

  Command train(app, "train", "split, grid-search C, train and save a model");
  train.keys({"tsv", "lang", "features", "char-orders", "word-orders", "train-fraction",
              "seed", "stratified", "c-grid", "folds", "tolerance", "max-epochs",
              "min-count", "hash-buckets", "model", "out", "threads"});
  Command evaluate(app, "evaluate", "score a model on a labelled corpus");
  evaluate.keys({"tsv", "lang", "model", "out", "threads"});
  Command predict(app, "predict", "label sentences, one per input line");
  predict.keys({"model", "input", "out", "threads"}).scores_flag();
  Command similarity(app, "similarity", "lexical overlap matrix between languages");
  similarity.keys({"tsv", "lang", "sample-size", "seed", "out", "threads"});
  Command distance(app, "distance", "average edit distance matrix between languages");
  distance.keys({"tsv", "lang", "sample-size", "sample-pairs", "variant", "seed", "out",
                 "threads"});
  Command sweep(app, "sweep", "train and evaluate every feature set on one split");
  sweep.keys({"tsv", "lang", "sets", "train-fraction", "seed", "stratified", "c-grid",
              "folds", "tolerance", "max-epochs", "min-count", "hash-buckets", "out",
              "threads"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitConfigError;
  }

  const Command* chosen = nullptr;
  for (const Command* c : {&train, &evaluate, &predict, &similarity, &distance, &sweep}) {
    if (c->parsed()) chosen = c;
  }

  try {
    const cli::RunConfig config =
        cli::make_run_config(chosen->settings(), std::getenv(cli::kThreadsEnv));
    const std::string& name = chosen->name();
    if (name == "train") cli::cmd_train(config, std::cout);
    if (name == "evaluate") cli::cmd_evaluate(config, std::cout);
    if (name == "predict") cli::cmd_predict(config, std::cin, std::cout);
    if (name == "similarity") cli::cmd_similarity(config, std::cout);
    if (name == "distance") cli::cmd_distance(config, std::cout);
    if (name == "sweep") cli::cmd_sweep(config, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "dialectid " << chosen->name() << ": " << e.what() << '\n';
    return cli::exit_code_for(e);
  }
  return cli::kExitOk;
}
