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

#ifndef DIALECTID_ANALYSIS_H_
#define DIALECTID_ANALYSIS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialectid/corpus.h"

namespace dialectid {

struct SimilarityConfig {
  // Sentences sampled per language; smaller languages are used whole.
  std::size_t sample_size = 10000;
  std::uint64_t seed = 0;
  bool exact_pairs = true;
  // Pairs drawn per language pair when exact_pairs is false.
  std::uint64_t pair_sample = 1000000;
  int threads = 1;

  void validate() const;
};

// Distinct whitespace tokens of a seeded sample of label's sentences,
// sorted by code point. Throws DataError if label is not in the corpus.
std::vector<std::string> unique_tokens(const Corpus& corpus,
                                       std::string_view label,
                                       const SimilarityConfig& config);

struct OverlapMatrix {
  std::vector<std::string> labels;
  // counts[i][i] = |T_i|, counts[i][j] = |T_i intersect T_j|.
  std::vector<std::vector<std::uint64_t>> counts;
};

// Exact-string token overlap between every pair of languages.
OverlapMatrix overlap_matrix(const Corpus& corpus,
                             const SimilarityConfig& config);

// Unit-cost edit distance over code points.
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);
std::size_t levenshtein(std::string_view utf8_a, std::string_view utf8_b);

// Preprocessed pattern for repeated distance queries. Patterns of up to 64
// code points use Myers' bit-parallel algorithm; longer ones fall back to a
// single-row dynamic program.
class LevenshteinMatcher {
 public:
  explicit LevenshteinMatcher(std::u32string_view pattern);

  std::size_t distance(std::u32string_view text) const;
  std::size_t size() const { return pattern_.size(); }

 private:
  static constexpr std::size_t kTableSize = 128;

  std::uint64_t match_mask(char32_t c) const;

  std::u32string pattern_;
  std::array<char32_t, kTableSize> keys_{};
  std::array<std::uint64_t, kTableSize> masks_{};
  bool bit_parallel_ = false;
};

enum class DistanceVariant { kOverall, kLengthControlled };

std::string_view to_string(DistanceVariant variant);
// Accepts "overall" and "length-controlled" (or "length_controlled").
DistanceVariant parse_distance_variant(std::string_view text);

struct AverageDistance {
  double mean = 0.0;
  std::uint64_t pairs = 0;
  std::uint64_t total_distance = 0;
  bool sampled = false;
};

// Mean edit distance over the cross product a x b (kOverall) or over the
// pairs of equal code-point length (kLengthControlled). With
// config.exact_pairs false, config.pair_sample pairs are drawn uniformly
// with replacement using config.seed. Throws DataError for an empty set or,
// in the length-controlled variant, when no equal-length pair exists.
AverageDistance avg_edit_distance(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  DistanceVariant variant,
                                  const SimilarityConfig& config);

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;  // symmetric, zero diagonal
  DistanceVariant variant = DistanceVariant::kOverall;
  bool sampled = false;
  std::uint64_t pair_sample = 0;
  std::uint64_t seed = 0;
};

DistanceMatrix distance_matrix(const Corpus& corpus,
                               const SimilarityConfig& config,
                               DistanceVariant variant);

// Label header row and column; overlap counts as integers.
void write_overlap_tsv(std::ostream& out, const OverlapMatrix& matrix);
// Same layout with three decimals. Sampled matrices start with a
// "# sampled pairs=N seed=S" line.
void write_distance_tsv(std::ostream& out, const DistanceMatrix& matrix);

}  // namespace dialectid

#endif  // DIALECTID_ANALYSIS_H_
