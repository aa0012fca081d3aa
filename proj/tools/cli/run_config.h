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

#ifndef DIALECTID_TOOLS_CLI_RUN_CONFIG_H_
#define DIALECTID_TOOLS_CLI_RUN_CONFIG_H_

#include <filesystem>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialectid/analysis.h"
#include "dialectid/corpus.h"
#include "dialectid/features.h"
#include "dialectid/svm.h"

namespace dialectid::cli {

inline constexpr char kThreadsEnv[] = "DIALECTID_THREADS";

// Raw key/value settings. Keys are the long flag names without dashes.
using Settings = std::map<std::string, std::string, std::less<>>;

// Every key a config file or flag may set.
const std::vector<std::string>& known_keys();

// Reads "key = value" lines. Blank lines and lines starting with '#' are
// ignored. Unknown keys, repeated keys and lines without '=' are
// ConfigErrors.
Settings parse_config(std::istream& in, std::string_view source_name);
Settings load_config_file(const std::filesystem::path& path);

// Entries of overrides replace those of base.
Settings merge_settings(Settings base, const Settings& overrides);

struct RunConfig {
  std::vector<std::filesystem::path> tsv;
  std::vector<LanguageFile> languages;

  FeatureSpec features = feature_set_from_name("C3");
  SplitSpec split;
  TrainConfig train;
  SimilarityConfig similarity;
  DistanceVariant variant = DistanceVariant::kOverall;

  std::filesystem::path out_dir = ".";
  std::filesystem::path model;  // empty: <out_dir>/model.bin
  std::string input = "-";      // "-" is stdin
  bool scores = false;
  std::vector<std::string> sweep_sets;  // empty: all standard sets
  int threads = 1;

  std::filesystem::path model_path() const {
    return model.empty() ? out_dir / "model.bin" : model;
  }
};

// Threads come from the "threads" setting, else from env_threads (the value
// of DIALECTID_THREADS, may be null), else 1.
RunConfig make_run_config(const Settings& settings,
                          const char* env_threads = nullptr);

// Loads whichever of tsv / languages is set; exactly one must be.
Corpus load_corpus(const RunConfig& config);

}  // namespace dialectid::cli

#endif  // DIALECTID_TOOLS_CLI_RUN_CONFIG_H_
