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

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "cli/commands.h"
#include "cli/run_config.h"
#include "dialectid/error.h"
#include "dialectid/eval.h"
#include "dialectid/log.h"
#include "oracles/brute_force.h"
#include "support/synthetic.h"

namespace dialectid::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::path(::testing::TempDir()) / "dialectid_cli" / info->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    set_warning_handler([](std::string_view) {});
  }
  void TearDown() override { set_warning_handler(nullptr); }

  fs::path write_corpus(const std::string& name, const Corpus& corpus) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    write_tsv_corpus(out, corpus);
    return path;
  }

  RunConfig config_for(Settings settings) {
    settings.emplace("out", (dir_ / "out").string());
    return make_run_config(settings);
  }

  fs::path dir_;
};

TEST(Config, ParsesKeyValueLines) {
  std::istringstream in("# comment\n\nfeatures = C2+W1\n  seed=7  \nc-grid = 0.5, 2\n");
  const Settings s = parse_config(in, "run.conf");
  EXPECT_EQ(s.at("features"), "C2+W1");
  EXPECT_EQ(s.at("seed"), "7");
  const RunConfig c = make_run_config(s);
  EXPECT_EQ(c.features, feature_set_from_name("C2+W1"));
  EXPECT_EQ(c.split.seed, 7u);
  EXPECT_EQ(c.train.seed, 7u);
  EXPECT_EQ(c.similarity.seed, 7u);
  EXPECT_EQ(c.train.c_grid, (std::vector<double>{0.5, 2.0}));
}

TEST(Config, RejectsBadLines) {
  std::istringstream unknown("colour = red\n");
  EXPECT_THROW(parse_config(unknown, "x"), ConfigError);
  std::istringstream twice("seed = 1\nseed = 2\n");
  EXPECT_THROW(parse_config(twice, "x"), ConfigError);
  std::istringstream no_eq("seed 1\n");
  try {
    parse_config(no_eq, "x.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("x.conf:1"), std::string::npos);
  }
  EXPECT_THROW(load_config_file("/nonexistent/run.conf"), ConfigError);
}

TEST(Config, FlagsOverrideFile) {
  const Settings file = {{"features", "W1"}, {"seed", "3"}};
  const Settings flags = {{"features", "C3"}};
  const RunConfig c = make_run_config(merge_settings(file, flags));
  EXPECT_EQ(c.features.name(), "C3");
  EXPECT_EQ(c.split.seed, 3u);
}

TEST(Config, Defaults) {
  const RunConfig c = make_run_config({});
  EXPECT_EQ(c.features.name(), "C3");
  EXPECT_EQ(c.threads, 1);
  EXPECT_TRUE(c.similarity.exact_pairs);
  EXPECT_EQ(c.variant, DistanceVariant::kOverall);
  EXPECT_EQ(c.model_path(), fs::path(".") / "model.bin");
  EXPECT_EQ(c.split.train_fraction, 0.8);
  EXPECT_EQ(c.train.k_folds, 5);
}

TEST(Config, ValueErrors) {
  EXPECT_THROW(make_run_config({{"features", "C9"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"features", "C3"}, {"char-orders", "2"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"seed", "-1"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"train-fraction", "1.5"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"stratified", "maybe"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"c-grid", "1,x"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"variant", "mean"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"lang", "noequals"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"threads", "0"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"sets", "C1,Q2"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"min-count", "0"}}), ConfigError);
  EXPECT_THROW(make_run_config({{"min-count", "2"}, {"hash-buckets", "64"}}), ConfigError);
}

TEST(Config, IndexOptions) {
  const RunConfig c = make_run_config({{"hash-buckets", "4096"}});
  EXPECT_EQ(c.train.index.hash_buckets, 4096u);
  EXPECT_EQ(c.train.index.min_count, 1u);
  EXPECT_EQ(make_run_config({{"min-count", "3"}}).train.index.min_count, 3u);
}

TEST(Config, OrdersAndLists) {
  const RunConfig c = make_run_config({{"char-orders", "2,4"},
                                       {"lang", "bho=a.txt,mag=b.txt"},
                                       {"sample-pairs", "500"},
                                       {"variant", "length-controlled"}});
  EXPECT_EQ(c.features.char_orders, (std::set<int>{2, 4}));
  ASSERT_EQ(c.languages.size(), 2u);
  EXPECT_EQ(c.languages[1].label, "mag");
  EXPECT_EQ(c.languages[1].path, fs::path("b.txt"));
  EXPECT_FALSE(c.similarity.exact_pairs);
  EXPECT_EQ(c.similarity.pair_sample, 500u);
  EXPECT_EQ(c.variant, DistanceVariant::kLengthControlled);
}

TEST(Config, ThreadsFromEnvironment) {
  EXPECT_EQ(make_run_config({}, "3").threads, 3);
  EXPECT_EQ(make_run_config({}, "3").train.threads, 3);
  EXPECT_EQ(make_run_config({{"threads", "2"}}, "3").threads, 2);
  EXPECT_EQ(make_run_config({}, "").threads, 1);
  EXPECT_THROW(make_run_config({}, "many"), ConfigError);
}

TEST(Config, CorpusSourceMustBeUnique) {
  EXPECT_THROW(load_corpus(make_run_config({})), ConfigError);
  EXPECT_THROW(load_corpus(make_run_config({{"tsv", "a.tsv"}, {"lang", "x=b.txt"}})),
               ConfigError);
}

TEST(ExitCodes, AreDistinct) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitConfigError);
  EXPECT_EQ(exit_code_for(DataError("x")), kExitDataError);
  EXPECT_EQ(exit_code_for(FormatError("x")), kExitDataError);
  EXPECT_EQ(exit_code_for(Error("x")), kExitRuntimeError);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitRuntimeError);
  const std::set<int> codes = {kExitOk, kExitConfigError, kExitDataError, kExitRuntimeError};
  EXPECT_EQ(codes.size(), 4u);
}

TEST_F(CliTest, TrainEvaluatePredict) {
  const Corpus corpus = testing::disjoint_alphabet_corpus(5, 60, 11);
  const fs::path tsv = write_corpus("corpus.tsv", corpus);
  const RunConfig train_cfg = config_for({{"tsv", tsv.string()}, {"features", "C3"}});
  std::ostringstream log;
  cmd_train(train_cfg, log);
  const fs::path out = dir_ / "out";
  ASSERT_TRUE(fs::exists(out / "model.bin"));
  const auto grid = lines_of(slurp(out / "grid.tsv"));
  ASSERT_EQ(grid.size(), 7u);  // header, five C values, best C
  for (std::size_t i = 1; i <= 5; ++i) EXPECT_EQ(split_tabs(grid[i])[1], "1");

  // Same seed, same artifacts.
  const std::string grid_bytes = slurp(out / "grid.tsv");
  const std::string model_bytes = slurp(out / "model.bin");
  std::ostringstream again;
  cmd_train(train_cfg, again);
  EXPECT_EQ(slurp(out / "grid.tsv"), grid_bytes);
  EXPECT_EQ(slurp(out / "model.bin"), model_bytes);

  const RunConfig eval_cfg = config_for({{"tsv", (out / "test.tsv").string()}});
  cmd_evaluate(eval_cfg, log);
  std::ifstream metrics(out / "metrics.tsv");
  std::ifstream confusion(out / "confusion.tsv");
  const EvalReport report = read_eval_report(metrics, confusion);
  EXPECT_EQ(report.accuracy, 1.0);
  const Corpus test = load_tsv_corpus(out / "test.tsv");
  for (std::size_t i = 0; i < report.confusion.labels().size(); ++i) {
    EXPECT_EQ(report.confusion.row_sum(i), test.indices_of(report.confusion.labels()[i]).size());
  }
  EXPECT_EQ(report, evaluate(load_model(out / "model.bin"), test));
  EXPECT_EQ(lines_of(slurp(out / "errors.tsv")).size(), 1u);

  std::string input;
  std::vector<std::string> expected;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t lang = static_cast<std::size_t>(i) % 5;
    const std::string sentence =
        testing::disjoint_alphabet_sentence(lang, 8, static_cast<std::uint64_t>(i));
    input += sentence + "\n";
    if (i % 10 == 0) input += "   \n";
    expected.push_back("lang" + std::to_string(lang) + "\t" + sentence);
  }
  std::istringstream in(input);
  std::ostringstream predicted;
  cmd_predict(eval_cfg, in, predicted);
  EXPECT_EQ(lines_of(predicted.str()), expected);

  RunConfig scored = config_for({{"scores", "true"}});
  std::istringstream one(testing::disjoint_alphabet_sentence(2, 8, 1) + "\n");
  std::ostringstream with_scores;
  cmd_predict(scored, one, with_scores);
  const auto cells = split_tabs(lines_of(with_scores.str()).at(0));
  EXPECT_EQ(cells.size(), 7u);
  EXPECT_EQ(cells[0], "lang2");

  RunConfig from_file = config_for({{"input", (dir_ / "missing.txt").string()}});
  std::istringstream unused;
  std::ostringstream sink;
  EXPECT_THROW(cmd_predict(from_file, unused, sink), DataError);
}

TEST_F(CliTest, EvaluateRejectsUnknownLabels) {
  const fs::path tsv = write_corpus("c.tsv", testing::disjoint_alphabet_corpus(2, 30, 1));
  std::ostringstream log;
  cmd_train(config_for({{"tsv", tsv.string()}, {"features", "C1"}}), log);
  const fs::path other = write_corpus("other.tsv", Corpus(std::vector<LabeledSentence>{{"abc", "zzz"}}));
  try {
    cmd_evaluate(config_for({{"tsv", other.string()}}), log);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("evaluating"), std::string::npos) << e.what();
  }
}

TEST_F(CliTest, ErrorsNameTheStage) {
  std::ostringstream log;
  try {
    cmd_train(config_for({{"tsv", (dir_ / "none.tsv").string()}}), log);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("loading corpus:", 0), 0u) << e.what();
  }
  try {
    cmd_evaluate(config_for({{"model", (dir_ / "none.bin").string()}}), log);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("loading model:", 0), 0u) << e.what();
  }
}

TEST_F(CliTest, SimilarityAndDistance) {
  const Corpus toy(std::vector<LabeledSentence>{{"उ कतल करे", "bho"}, {"हम घर जात", "bho"}, {"उ कतल कइलक", "mag"},
                    {"हम घर", "mag"}, {"वह घर गया", "msh"}, {"उसने कतल किया", "msh"}});
  const fs::path tsv = write_corpus("toy.tsv", toy);
  std::ostringstream log;
  cmd_similarity(config_for({{"tsv", tsv.string()}}), log);
  const auto rows = lines_of(slurp(dir_ / "out" / "overlap.tsv"));
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto cells = split_tabs(rows[i + 1]);
    std::vector<std::string> si;
    for (std::size_t k : toy.indices_of(toy.labels()[i])) si.push_back(toy[k].text);
    for (std::size_t j = 0; j < 3; ++j) {
      std::vector<std::string> sj;
      for (std::size_t k : toy.indices_of(toy.labels()[j])) sj.push_back(toy[k].text);
      EXPECT_EQ(cells[j + 1], std::to_string(oracle::intersection_size(oracle::token_set(si),
                                                                       oracle::token_set(sj))));
    }
  }

  cmd_distance(config_for({{"tsv", tsv.string()}}), log);
  const auto d = lines_of(slurp(dir_ / "out" / "distance-overall.tsv"));
  ASSERT_EQ(d.size(), 4u);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto row = split_tabs(d[i + 1]);
    EXPECT_EQ(row[i + 1], "0.000");
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(row[j + 1], split_tabs(d[j + 1])[i + 1]);
  }

  cmd_distance(config_for({{"tsv", tsv.string()}, {"sample-pairs", "200"}, {"seed", "5"},
                           {"variant", "length-controlled"}}),
               log);
  const auto sampled = lines_of(slurp(dir_ / "out" / "distance-length-controlled.tsv"));
  EXPECT_EQ(sampled.at(0), "# sampled pairs=200 seed=5");

  const fs::path single = write_corpus("single.tsv", Corpus(std::vector<LabeledSentence>{{"a b", "x"}}));
  EXPECT_THROW(cmd_similarity(config_for({{"tsv", single.string()}}), log), DataError);
}

TEST_F(CliTest, SweepWritesOneRowPerSet) {
  testing::SharedRootsOptions opts;
  opts.sentences_per_language = 40;
  opts.languages = 3;
  const fs::path tsv = write_corpus("roots.tsv", testing::shared_roots_corpus(opts));
  std::ostringstream log;
  cmd_sweep(config_for({{"tsv", tsv.string()}, {"sets", "C1,W1"}, {"c-grid", "0.1,1"}}), log);
  const auto rows = lines_of(slurp(dir_ / "out" / "sweep.tsv"));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "feature_set\tbest_c\tcv_accuracy\taccuracy\tprecision\trecall\tf1");
  EXPECT_EQ(split_tabs(rows[1])[0], "C1");
  EXPECT_EQ(split_tabs(rows[2])[0], "W1");
  EXPECT_NE(log.str().find("Feature set"), std::string::npos);
}

int run_binary(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(DIALECTID_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(CliTest, BinaryExitCodes) {
  const fs::path tsv = write_corpus("c.tsv", testing::disjoint_alphabet_corpus(2, 20, 1));
  const std::string out = " --out " + (dir_ / "bin").string();
  EXPECT_EQ(run_binary("--help"), kExitOk);
  EXPECT_EQ(run_binary("train --tsv " + tsv.string() + " --features C9" + out), kExitConfigError);
  EXPECT_EQ(run_binary("train --no-such-flag"), kExitConfigError);
  EXPECT_EQ(run_binary(""), kExitConfigError);
  EXPECT_EQ(run_binary("train --tsv " + (dir_ / "none.tsv").string() + out), kExitDataError);
  EXPECT_EQ(run_binary("train --tsv " + tsv.string() + " --features C1" + out), kExitOk);
  EXPECT_EQ(run_binary("predict --model " + tsv.string()), kExitDataError);

  std::ofstream(dir_ / "run.conf") << "features = C1\nc-grid = 1\n";
  EXPECT_EQ(run_binary("train --config " + (dir_ / "run.conf").string() + " --tsv " +
                       tsv.string() + out),
            kExitOk);
  EXPECT_EQ(lines_of(slurp(dir_ / "bin" / "grid.tsv")).size(), 3u);
  EXPECT_EQ(run_binary("train --tsv " + tsv.string() + out, "DIALECTID_THREADS=0"), kExitConfigError);
}

}  // namespace
}  // namespace dialectid::cli
