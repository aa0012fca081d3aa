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

#ifndef DIALECTID_TOOLS_CLI_COMMANDS_H_
#define DIALECTID_TOOLS_CLI_COMMANDS_H_

#include <exception>
#include <istream>
#include <ostream>

#include "cli/run_config.h"

namespace dialectid::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 2,
  kExitDataError = 3,
  kExitRuntimeError = 4,
};

int exit_code_for(const std::exception& e);

// Split, grid search on the train part, final fit with the best C. Writes
// model.bin (unless a model path is set), grid.tsv, train.tsv and test.tsv.
void cmd_train(const RunConfig& config, std::ostream& log);

// Writes metrics.tsv, confusion.tsv and errors.tsv for the model on the
// configured corpus.
void cmd_evaluate(const RunConfig& config, std::ostream& log);

// One "label<TAB>sentence" record per non-empty input line, followed by the
// class scores when config.scores is set. Reads stdin when input is "-".
void cmd_predict(const RunConfig& config, std::istream& stdin_stream,
                 std::ostream& out);

// Writes overlap.tsv.
void cmd_similarity(const RunConfig& config, std::ostream& log);

// Writes distance-<variant>.tsv.
void cmd_distance(const RunConfig& config, std::ostream& log);

// Runs train and evaluate for each feature set on one split; writes
// sweep.tsv.
void cmd_sweep(const RunConfig& config, std::ostream& log);

}  // namespace dialectid::cli

#endif  // DIALECTID_TOOLS_CLI_COMMANDS_H_
