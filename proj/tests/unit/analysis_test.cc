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

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dialectid/analysis.h"
#include "dialectid/error.h"
#include "dialectid/log.h"
#include "dialectid/rng.h"
#include "oracles/brute_force.h"

namespace dialectid {
namespace {

Corpus toy_corpus() {
  return Corpus({
      {"उ कतल करे x", "bho"},
      {"हम घरे जात बानी", "bho"},
      {"ऊ घर गइल \U0001F600", "bho"},
      {"हम घर जात हईं", "mag"},
      {"उ कतल कइलक", "mag"},
      {"ऊ घर गेलइ \U0001F600", "mag"},
      {"मैं घर जा रहा हूं", "msh"},
      {"उसने कतल किया x", "msh"},
      {"वह घर गया", "msh"},
  });
}

std::vector<std::string> sentences_of(const Corpus& c, const std::string& label) {
  std::vector<std::string> out;
  for (std::size_t i : c.indices_of(label)) out.push_back(c[i].text);
  return out;
}

std::u32string random_word(Rng& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"abcकखगािी\U0001F600\U00010348\U0010FFFF";
  std::u32string w;
  const auto len = rng.uniform(max_len + 1);
  for (std::uint64_t i = 0; i < len; ++i) w += alphabet[rng.uniform(alphabet.size())];
  return w;
}

class CaptureWarnings {
 public:
  CaptureWarnings() {
    set_warning_handler([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~CaptureWarnings() { set_warning_handler(nullptr); }
  std::vector<std::string> messages;
};

TEST(SimilarityConfig, Validation) {
  SimilarityConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.sample_size = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SimilarityConfig{};
  cfg.exact_pairs = false;
  cfg.pair_sample = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(UniqueTokens, Examples) {
  CaptureWarnings quiet;
  const Corpus c(std::vector<LabeledSentence>{{"a b", "x"}, {"b c", "x"}, {"b c", "x"}, {"q", "y"}});
  EXPECT_EQ(unique_tokens(c, "x", {}), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_THROW(unique_tokens(c, "z", {}), DataError);
}

TEST(UniqueTokens, SamplesAndWarnsWhenClamped) {
  std::vector<LabeledSentence> s;
  for (int i = 0; i < 50; ++i) s.push_back({"w" + std::to_string(i), "x"});
  const Corpus c(std::move(s));
  SimilarityConfig cfg;
  cfg.sample_size = 10;
  cfg.seed = 4;
  {
    CaptureWarnings w;
    const auto a = unique_tokens(c, "x", cfg);
    EXPECT_EQ(a.size(), 10u);
    EXPECT_EQ(unique_tokens(c, "x", cfg), a);
    EXPECT_TRUE(w.messages.empty());
  }
  cfg.sample_size = 80;
  CaptureWarnings w;
  EXPECT_EQ(unique_tokens(c, "x", cfg).size(), 50u);
  ASSERT_EQ(w.messages.size(), 1u);
  EXPECT_NE(w.messages[0].find("'x'"), std::string::npos);
}

TEST(Overlap, Examples) {
  CaptureWarnings quiet;
  const Corpus c(std::vector<LabeledSentence>{{"x y z", "A"}, {"y z w", "B"}});
  const OverlapMatrix m = overlap_matrix(c, {});
  EXPECT_EQ(m.counts, (std::vector<std::vector<std::uint64_t>>{{3, 2}, {2, 3}}));

  const Corpus same(std::vector<LabeledSentence>{{"p q", "A"}, {"r", "A"}, {"p q", "B"}, {"r", "B"}});
  const OverlapMatrix s = overlap_matrix(same, {});
  EXPECT_EQ(s.counts[0][1], s.counts[0][0]);
  EXPECT_THROW(overlap_matrix(Corpus(std::vector<LabeledSentence>{{"a", "A"}}), {}), DataError);
}

TEST(Overlap, MatchesSetIntersection) {
  CaptureWarnings quiet;
  const Corpus c = toy_corpus();
  const OverlapMatrix m = overlap_matrix(c, {});
  for (std::size_t i = 0; i < c.labels().size(); ++i) {
    const auto ti = oracle::token_set(sentences_of(c, c.labels()[i]));
    for (std::size_t j = 0; j < c.labels().size(); ++j) {
      const auto tj = oracle::token_set(sentences_of(c, c.labels()[j]));
      EXPECT_EQ(m.counts[i][j], oracle::intersection_size(ti, tj));
    }
  }
}

TEST(Overlap, Bounds) {
  CaptureWarnings quiet;
  Rng rng(2);
  for (int t = 0; t < 30; ++t) {
    std::vector<LabeledSentence> s;
    for (int k = 0; k < 40; ++k) {
      std::string text;
      for (int w = 0; w < 4; ++w) text += "t" + std::to_string(rng.uniform(30)) + " ";
      s.push_back({normalize_sentence(text), "L" + std::to_string(rng.uniform(4))});
    }
    const OverlapMatrix m = overlap_matrix(Corpus(std::move(s)), {});
    for (std::size_t i = 0; i < m.labels.size(); ++i) {
      for (std::size_t j = 0; j < m.labels.size(); ++j) {
        EXPECT_EQ(m.counts[i][j], m.counts[j][i]);
        EXPECT_LE(m.counts[i][j], std::min(m.counts[i][i], m.counts[j][j]));
      }
    }
  }
}

TEST(Levenshtein, Examples) {
  EXPECT_EQ(levenshtein(std::string_view("कतल"), std::string_view("कतल")), 0u);
  EXPECT_EQ(levenshtein(std::string_view(""), std::string_view("कतल")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("kitten"), std::string_view("sitting")), 3u);
  EXPECT_EQ(oracle::edit_distance_table(std::string("kitten"), std::string("sitting")), 3u);
  EXPECT_EQ(levenshtein(std::string_view("\U0001F600"), std::string_view("\U0001F601")), 1u);
}

TEST(Levenshtein, MetricAxiomsAndBounds) {
  Rng rng(31);
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_word(rng, 12);
    const auto b = random_word(rng, 12);
    const auto c = random_word(rng, 12);
    const std::size_t ab = levenshtein(a, b);
    EXPECT_EQ(levenshtein(a, a), 0u);
    EXPECT_EQ(ab, levenshtein(b, a));
    EXPECT_LE(levenshtein(a, c), ab + levenshtein(b, c));
    const std::size_t diff = a.size() > b.size() ? a.size() - b.size() : b.size() - a.size();
    EXPECT_GE(ab, diff);
    EXPECT_LE(ab, std::max(a.size(), b.size()));
    if (a != b) {
      EXPECT_GT(ab, 0u);
    }
  }
}

TEST(Levenshtein, FastPathMatchesFullTable) {
  Rng rng(47);
  for (int t = 0; t < 10000; ++t) {
    const auto a = random_word(rng, 20);
    const auto b = random_word(rng, 20);
    ASSERT_EQ(levenshtein(a, b), oracle::edit_distance_table(a, b))
        << oracle::utf8(a) << " / " << oracle::utf8(b);
  }
}

TEST(Levenshtein, LongPatternsAndManyDistinctSymbols) {
  Rng rng(48);
  for (int t = 0; t < 300; ++t) {
    std::u32string a;
    std::u32string b;
    const auto la = rng.uniform(150);
    const auto lb = rng.uniform(150);
    // Wide symbol range overflows any small match table.
    for (std::uint64_t i = 0; i < la; ++i) a += static_cast<char32_t>(0x4E00 + rng.uniform(300));
    for (std::uint64_t i = 0; i < lb; ++i) b += static_cast<char32_t>(0x4E00 + rng.uniform(300));
    if (t % 3 == 0) b = a.substr(0, a.size() / 2) + b;
    ASSERT_EQ(levenshtein(a, b), oracle::edit_distance_table(a, b));
    const LevenshteinMatcher m(a);
    ASSERT_EQ(m.distance(b), oracle::edit_distance_table(a, b));
  }
}

TEST(Levenshtein, RejectsInvalidUtf8) {
  EXPECT_THROW(levenshtein(std::string_view("\xff"), std::string_view("a")), DataError);
}

TEST(AverageDistance, Examples) {
  CaptureWarnings quiet;
  const SimilarityConfig cfg;
  const std::vector<std::string> a = {"a"};
  const std::vector<std::string> ab = {"a", "b"};
  EXPECT_EQ(avg_edit_distance(a, ab, DistanceVariant::kOverall, cfg).mean, 0.5);
  const std::vector<std::string> x = {"x"};
  EXPECT_EQ(avg_edit_distance(x, x, DistanceVariant::kOverall, cfg).mean, 0.0);
  const std::vector<std::string> p = {"ab", "xyz"};
  const std::vector<std::string> q = {"cd", "qrs"};
  const AverageDistance lc = avg_edit_distance(p, q, DistanceVariant::kLengthControlled, cfg);
  EXPECT_EQ(lc.mean, 2.5);
  EXPECT_EQ(lc.pairs, 2u);
  EXPECT_EQ(lc.total_distance, 5u);
  EXPECT_FALSE(lc.sampled);
}

TEST(AverageDistance, Errors) {
  const std::vector<std::string> a = {"ab"};
  const std::vector<std::string> b = {"xyz"};
  const std::vector<std::string> none;
  EXPECT_THROW(avg_edit_distance(a, b, DistanceVariant::kLengthControlled, {}), DataError);
  EXPECT_THROW(avg_edit_distance(a, none, DistanceVariant::kOverall, {}), DataError);
}

TEST(AverageDistance, MatchesExhaustivePairs) {
  Rng rng(12);
  for (int t = 0; t < 20; ++t) {
    std::set<std::string> sa;
    std::set<std::string> sb;
    while (sa.size() < 30) sa.insert(oracle::utf8(random_word(rng, 6)));
    while (sb.size() < 25) sb.insert(oracle::utf8(random_word(rng, 6)));
    const std::vector<std::string> va(sa.begin(), sa.end());
    const std::vector<std::string> vb(sb.begin(), sb.end());
    SimilarityConfig cfg;
    cfg.threads = 1 + t % 3;
    EXPECT_DOUBLE_EQ(avg_edit_distance(va, vb, DistanceVariant::kOverall, cfg).mean,
                     oracle::exhaustive_mean_distance(sa, sb, false));
    EXPECT_DOUBLE_EQ(avg_edit_distance(va, vb, DistanceVariant::kLengthControlled, cfg).mean,
                     oracle::exhaustive_mean_distance(sa, sb, true));
  }
}

TEST(AverageDistance, SampledMeanIsUnbiased) {
  Rng rng(90);
  std::set<std::string> sa;
  std::set<std::string> sb;
  while (sa.size() < 60) sa.insert(oracle::utf8(random_word(rng, 8)));
  while (sb.size() < 50) sb.insert(oracle::utf8(random_word(rng, 8)));
  const std::vector<std::string> va(sa.begin(), sa.end());
  const std::vector<std::string> vb(sb.begin(), sb.end());
  for (const bool equal_length : {false, true}) {
    // Population mean and spread from exhaustive enumeration.
    double sum = 0.0;
    double sum_sq = 0.0;
    double n = 0.0;
    for (const auto& s : sa) {
      for (const auto& u : sb) {
        const auto cs = oracle::code_points(s);
        const auto cu = oracle::code_points(u);
        if (equal_length && cs.size() != cu.size()) continue;
        const auto d = static_cast<double>(oracle::edit_distance_table(cs, cu));
        sum += d;
        sum_sq += d * d;
        n += 1.0;
      }
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum_sq / n - mean * mean);
    SimilarityConfig cfg;
    cfg.exact_pairs = false;
    cfg.pair_sample = 4000;
    cfg.seed = 17;
    const auto variant = equal_length ? DistanceVariant::kLengthControlled : DistanceVariant::kOverall;
    const AverageDistance got = avg_edit_distance(va, vb, variant, cfg);
    EXPECT_TRUE(got.sampled);
    EXPECT_EQ(got.pairs, 4000u);
    EXPECT_LE(std::abs(got.mean - mean), 3.0 * sd / std::sqrt(4000.0));
    EXPECT_EQ(avg_edit_distance(va, vb, variant, cfg).total_distance, got.total_distance);
  }
}

TEST(DistanceMatrix, MatchesExhaustivePairs) {
  CaptureWarnings quiet;
  const Corpus c = toy_corpus();
  for (const auto variant : {DistanceVariant::kOverall, DistanceVariant::kLengthControlled}) {
    const DistanceMatrix m = distance_matrix(c, {}, variant);
    EXPECT_EQ(m.variant, variant);
    EXPECT_FALSE(m.sampled);
    for (std::size_t i = 0; i < 3; ++i) {
      EXPECT_EQ(m.values[i][i], 0.0);
      const auto ti = oracle::token_set(sentences_of(c, c.labels()[i]));
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(m.values[i][j], m.values[j][i]);
        if (i == j) continue;
        const auto tj = oracle::token_set(sentences_of(c, c.labels()[j]));
        EXPECT_DOUBLE_EQ(m.values[i][j], oracle::exhaustive_mean_distance(
                                             ti, tj, variant == DistanceVariant::kLengthControlled));
      }
    }
  }
}

TEST(DistanceMatrix, SampledOutputIsLabelledAndDeterministic) {
  CaptureWarnings quiet;
  SimilarityConfig cfg;
  cfg.exact_pairs = false;
  cfg.pair_sample = 500;
  cfg.seed = 3;
  const auto render = [&](int threads) {
    cfg.threads = threads;
    std::ostringstream out;
    write_distance_tsv(out, distance_matrix(toy_corpus(), cfg, DistanceVariant::kOverall));
    return out.str();
  };
  const std::string tsv = render(1);
  EXPECT_EQ(tsv.rfind("# sampled pairs=500 seed=3\n", 0), 0u);
  EXPECT_EQ(render(2), tsv);
}

TEST(DistanceMatrix, TsvLayout) {
  CaptureWarnings quiet;
  std::ostringstream out;
  write_distance_tsv(out, distance_matrix(toy_corpus(), {}, DistanceVariant::kOverall));
  std::istringstream in(out.str());
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "\tbho\tmag\tmsh");
  std::string row;
  std::getline(in, row);
  EXPECT_EQ(row.rfind("bho\t0.000\t", 0), 0u);

  std::ostringstream overlap;
  write_overlap_tsv(overlap, overlap_matrix(toy_corpus(), {}));
  EXPECT_EQ(overlap.str().rfind("\tbho\tmag\tmsh\nbho\t", 0), 0u);
}

TEST(DistanceVariant, Names) {
  EXPECT_EQ(to_string(DistanceVariant::kOverall), "overall");
  EXPECT_EQ(parse_distance_variant("length-controlled"), DistanceVariant::kLengthControlled);
  EXPECT_THROW(parse_distance_variant("median"), ConfigError);
}

}  // namespace
}  // namespace dialectid
