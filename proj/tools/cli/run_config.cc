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

#include "cli/run_config.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <system_error>

#include "dialectid/error.h"

namespace dialectid::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) {
    return c != ' ' && c != '\t' && c != '\r' && c != '\n';
  };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_list(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    const std::size_t comma = s.find(',');
    const std::string_view item = trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid value '" + std::string(text) + "' for " +
                      std::string(key));
  }
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("invalid value '" + std::string(text) + "' for " +
                    std::string(key) + " (expected true or false)");
}

int parse_threads(std::string_view source, std::string_view text) {
  const int n = parse_number<int>(source, text);
  if (n < 1) throw ConfigError(std::string(source) + " must be at least 1");
  return n;
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "tsv",          "lang",         "features",    "char-orders",  "word-orders",
      "train-fraction", "seed",       "stratified",  "c-grid",       "folds",
      "tolerance",    "max-epochs",   "min-count",   "hash-buckets", "sample-size",
      "sample-pairs", "variant",      "out",         "model",        "input",
      "scores",       "sets",         "threads"};
  return keys;
}

Settings parse_config(std::istream& in, std::string_view source_name) {
  const auto& keys = known_keys();
  Settings settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
    const std::size_t eq = content.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(where + ": expected key = value");
    }
    std::string key(trim(content.substr(0, eq)));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
    if (settings.contains(key)) {
      throw ConfigError(where + ": key '" + key + "' set twice");
    }
    settings.emplace(std::move(key), std::string(trim(content.substr(eq + 1))));
  }
  return settings;
}

Settings load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

Settings merge_settings(Settings base, const Settings& overrides) {
  for (const auto& [key, value] : overrides) base.insert_or_assign(key, value);
  return base;
}

RunConfig make_run_config(const Settings& settings, const char* env_threads) {
  const auto& keys = known_keys();
  for (const auto& [key, value] : settings) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown setting '" + key + "'");
    }
  }
  const auto get = [&](std::string_view key) -> const std::string* {
    const auto it = settings.find(key);
    return it == settings.end() ? nullptr : &it->second;
  };

  RunConfig config;
  if (const auto* v = get("tsv")) {
    for (auto& p : split_list(*v)) config.tsv.emplace_back(p);
  }
  if (const auto* v = get("lang")) {
    for (const auto& item : split_list(*v)) {
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == item.size()) {
        throw ConfigError("lang entry '" + item + "' is not LABEL=PATH");
      }
      config.languages.push_back({item.substr(0, eq), item.substr(eq + 1)});
    }
  }

  const auto* char_orders = get("char-orders");
  const auto* word_orders = get("word-orders");
  if (char_orders != nullptr || word_orders != nullptr) {
    if (get("features") != nullptr) {
      throw ConfigError("set either features or char-orders/word-orders, not both");
    }
    config.features = feature_spec_from_orders(char_orders ? *char_orders : "",
                                               word_orders ? *word_orders : "");
  } else if (const auto* v = get("features")) {
    config.features = feature_set_from_name(*v);
  }

  if (const auto* v = get("seed")) {
    const auto seed = parse_number<std::uint64_t>("seed", *v);
    config.split.seed = seed;
    config.train.seed = seed;
    config.similarity.seed = seed;
  }
  if (const auto* v = get("train-fraction")) {
    config.split.train_fraction = parse_number<double>("train-fraction", *v);
  }
  if (const auto* v = get("stratified")) {
    config.split.stratified = parse_bool("stratified", *v);
  }
  if (const auto* v = get("c-grid")) {
    config.train.c_grid.clear();
    for (const auto& c : split_list(*v)) {
      config.train.c_grid.push_back(parse_number<double>("c-grid", c));
    }
  }
  if (const auto* v = get("folds")) config.train.k_folds = parse_number<int>("folds", *v);
  if (const auto* v = get("tolerance")) {
    config.train.tolerance = parse_number<double>("tolerance", *v);
  }
  if (const auto* v = get("max-epochs")) {
    config.train.max_epochs = parse_number<int>("max-epochs", *v);
  }
  if (const auto* v = get("min-count")) {
    config.train.index.min_count = parse_number<std::uint64_t>("min-count", *v);
  }
  if (const auto* v = get("hash-buckets")) {
    config.train.index.hash_buckets = parse_number<std::uint32_t>("hash-buckets", *v);
  }
  if (const auto* v = get("sample-size")) {
    config.similarity.sample_size = parse_number<std::size_t>("sample-size", *v);
  }
  if (const auto* v = get("sample-pairs")) {
    const auto pairs = parse_number<std::uint64_t>("sample-pairs", *v);
    config.similarity.exact_pairs = pairs == 0;
    if (pairs != 0) config.similarity.pair_sample = pairs;
  }
  if (const auto* v = get("variant")) config.variant = parse_distance_variant(*v);
  if (const auto* v = get("out")) config.out_dir = *v;
  if (const auto* v = get("model")) config.model = *v;
  if (const auto* v = get("input")) config.input = *v;
  if (const auto* v = get("scores")) config.scores = parse_bool("scores", *v);
  if (const auto* v = get("sets")) {
    for (auto& name : split_list(*v)) {
      feature_set_from_name(name);
      config.sweep_sets.push_back(std::move(name));
    }
  }

  if (const auto* v = get("threads")) {
    config.threads = parse_threads("threads", *v);
  } else if (env_threads != nullptr && *env_threads != '\0') {
    config.threads = parse_threads(kThreadsEnv, env_threads);
  }
  config.train.threads = config.threads;
  config.similarity.threads = config.threads;

  config.split.validate();
  config.train.validate();
  config.similarity.validate();
  return config;
}

Corpus load_corpus(const RunConfig& config) {
  if (!config.tsv.empty() && !config.languages.empty()) {
    throw ConfigError("give the corpus either as tsv files or as lang files, not both");
  }
  if (!config.tsv.empty()) return load_tsv_corpora(config.tsv);
  if (!config.languages.empty()) return load_language_files(config.languages);
  throw ConfigError("no corpus given (use --tsv or --lang)");
}

}  // namespace dialectid::cli
