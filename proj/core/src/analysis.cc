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

#include "dialectid/analysis.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <unordered_set>

#include "dialectid/error.h"
#include "dialectid/log.h"
#include "dialectid/rng.h"
#include "dialectid/unicode.h"
#include "number_format.h"
#include "parallel.h"

namespace dialectid {

void SimilarityConfig::validate() const {
  if (sample_size == 0) throw ConfigError("sample size must be positive");
  if (!exact_pairs && pair_sample == 0) {
    throw ConfigError("pair sample size must be positive");
  }
  if (threads < 1) throw ConfigError("threads must be positive");
}

std::vector<std::string> unique_tokens(const Corpus& corpus,
                                       std::string_view label,
                                       const SimilarityConfig& config) {
  config.validate();
  if (!corpus.has_label(label)) {
    throw DataError("label '" + std::string(label) + "' is not in the corpus");
  }
  std::vector<std::size_t> idx = corpus.indices_of(label);
  if (idx.size() > config.sample_size) {
    Rng rng(derive_seed(config.seed, "sample:" + std::string(label)));
    rng.shuffle(std::span(idx));
    idx.resize(config.sample_size);
  } else if (idx.size() < config.sample_size) {
    warn("label '" + std::string(label) + "' has " + std::to_string(idx.size()) +
         " sentences, fewer than the sample size " +
         std::to_string(config.sample_size) + "; using all of them");
  }
  std::unordered_set<std::string_view> seen;
  for (std::size_t i : idx) {
    for (std::string_view token : tokenize(corpus[i].text)) seen.insert(token);
  }
  std::vector<std::string> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::vector<std::string>> vocabularies(const Corpus& corpus,
                                                   const SimilarityConfig& config) {
  if (corpus.labels().size() < 2) {
    throw DataError("similarity analysis needs at least two labels");
  }
  std::vector<std::vector<std::string>> vocab;
  for (const auto& label : corpus.labels()) {
    vocab.push_back(unique_tokens(corpus, label, config));
  }
  return vocab;
}

}  // namespace

OverlapMatrix overlap_matrix(const Corpus& corpus, const SimilarityConfig& config) {
  const auto vocab = vocabularies(corpus, config);
  const std::size_t n = vocab.size();
  OverlapMatrix out;
  out.labels = corpus.labels();
  out.counts.assign(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    out.counts[i][i] = vocab[i].size();
    for (std::size_t j = i + 1; j < n; ++j) {
      std::uint64_t shared = 0;
      auto a = vocab[i].begin();
      auto b = vocab[j].begin();
      while (a != vocab[i].end() && b != vocab[j].end()) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++shared;
          ++a;
          ++b;
        }
      }
      out.counts[i][j] = out.counts[j][i] = shared;
    }
  }
  return out;
}

namespace {

constexpr char32_t kEmptyKey = 0xFFFFFFFF;

std::size_t table_slot(char32_t c, std::size_t size) {
  return (static_cast<std::uint32_t>(c) * 2654435761u >> 7) & (size - 1);
}

std::size_t dp_distance(std::u32string_view a, std::u32string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1,
                         diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

LevenshteinMatcher::LevenshteinMatcher(std::u32string_view pattern)
    : pattern_(pattern), bit_parallel_(pattern.size() <= 64) {
  keys_.fill(kEmptyKey);
  if (!bit_parallel_) return;
  for (std::size_t i = 0; i < pattern_.size(); ++i) {
    std::size_t s = table_slot(pattern_[i], kTableSize);
    while (keys_[s] != kEmptyKey && keys_[s] != pattern_[i]) {
      s = (s + 1) & (kTableSize - 1);
    }
    keys_[s] = pattern_[i];
    masks_[s] |= std::uint64_t{1} << i;
  }
}

std::uint64_t LevenshteinMatcher::match_mask(char32_t c) const {
  std::size_t s = table_slot(c, kTableSize);
  while (keys_[s] != kEmptyKey) {
    if (keys_[s] == c) return masks_[s];
    s = (s + 1) & (kTableSize - 1);
  }
  return 0;
}

std::size_t LevenshteinMatcher::distance(std::u32string_view text) const {
  const std::size_t m = pattern_.size();
  if (m == 0) return text.size();
  if (text.empty()) return m;
  if (!bit_parallel_) return dp_distance(pattern_, text);

  // Myers (1999) in Hyyro's formulation: the bit vectors hold the vertical
  // +1/-1 deltas of one DP column; score tracks the last row.
  std::uint64_t pv = ~std::uint64_t{0};
  std::uint64_t mv = 0;
  const std::uint64_t last = std::uint64_t{1} << (m - 1);
  std::size_t score = m;
  for (char32_t c : text) {
    const std::uint64_t eq = match_mask(c);
    const std::uint64_t xv = eq | mv;
    const std::uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
    std::uint64_t ph = mv | ~(xh | pv);
    std::uint64_t mh = pv & xh;
    if (ph & last) {
      ++score;
    } else if (mh & last) {
      --score;
    }
    ph = (ph << 1) | 1;
    mh <<= 1;
    pv = mh | ~(xv | ph);
    mv = ph & xv;
  }
  return score;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (a.empty()) return b.size();
  return LevenshteinMatcher(a).distance(b);
}

std::size_t levenshtein(std::string_view utf8_a, std::string_view utf8_b) {
  return levenshtein(unicode::decode_utf8(utf8_a), unicode::decode_utf8(utf8_b));
}

std::string_view to_string(DistanceVariant variant) {
  return variant == DistanceVariant::kOverall ? "overall" : "length-controlled";
}

DistanceVariant parse_distance_variant(std::string_view text) {
  if (text == "overall") return DistanceVariant::kOverall;
  if (text == "length-controlled" || text == "length_controlled") {
    return DistanceVariant::kLengthControlled;
  }
  throw ConfigError("unknown distance variant '" + std::string(text) +
                    "'; expected overall or length-controlled");
}

namespace {

std::vector<std::u32string> decode_all(std::span<const std::string> words) {
  std::vector<std::u32string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(unicode::decode_utf8(w));
  return out;
}

}  // namespace

AverageDistance avg_edit_distance(std::span<const std::string> a,
                                  std::span<const std::string> b,
                                  DistanceVariant variant,
                                  const SimilarityConfig& config) {
  config.validate();
  if (a.empty() || b.empty()) {
    throw DataError("average edit distance needs two non-empty token sets");
  }
  const std::vector<std::u32string> wa = decode_all(a);
  const std::vector<std::u32string> wb = decode_all(b);
  const bool controlled = variant == DistanceVariant::kLengthControlled;

  // Words grouped by code-point length, for the length-controlled variant.
  std::map<std::size_t, std::vector<std::size_t>> a_by_len;
  std::map<std::size_t, std::vector<std::size_t>> b_by_len;
  for (std::size_t i = 0; i < wa.size(); ++i) a_by_len[wa[i].size()].push_back(i);
  for (std::size_t j = 0; j < wb.size(); ++j) b_by_len[wb[j].size()].push_back(j);

  std::uint64_t eligible = 0;
  if (controlled) {
    for (const auto& [len, as] : a_by_len) {
      const auto it = b_by_len.find(len);
      if (it != b_by_len.end()) eligible += as.size() * it->second.size();
    }
    if (eligible == 0) {
      throw DataError("no pair of equal-length words for the length-controlled distance");
    }
  } else {
    eligible = static_cast<std::uint64_t>(wa.size()) * wb.size();
  }

  AverageDistance out;
  if (config.exact_pairs) {
    std::vector<std::uint64_t> partial(wa.size(), 0);
    internal::parallel_for(wa.size(), config.threads, [&](std::size_t i) {
      const LevenshteinMatcher matcher(wa[i]);
      std::uint64_t sum = 0;
      if (controlled) {
        const auto it = b_by_len.find(wa[i].size());
        if (it != b_by_len.end()) {
          for (std::size_t j : it->second) sum += matcher.distance(wb[j]);
        }
      } else {
        for (const auto& w : wb) sum += matcher.distance(w);
      }
      partial[i] = sum;
    });
    out.total_distance = std::accumulate(partial.begin(), partial.end(), std::uint64_t{0});
    out.pairs = eligible;
  } else {
    Rng rng(config.seed);
    // Cumulative pair counts per shared length, to draw a pair uniformly.
    std::vector<std::pair<std::uint64_t, std::size_t>> cumulative;
    if (controlled) {
      std::uint64_t acc = 0;
      for (const auto& [len, as] : a_by_len) {
        const auto it = b_by_len.find(len);
        if (it == b_by_len.end()) continue;
        acc += as.size() * it->second.size();
        cumulative.emplace_back(acc, len);
      }
    }
    for (std::uint64_t s = 0; s < config.pair_sample; ++s) {
      std::size_t i;
      std::size_t j;
      if (controlled) {
        const std::uint64_t r = rng.uniform(eligible);
        const auto it = std::upper_bound(
            cumulative.begin(), cumulative.end(), r,
            [](std::uint64_t v, const auto& entry) { return v < entry.first; });
        const auto& as = a_by_len.at(it->second);
        const auto& bs = b_by_len.at(it->second);
        i = as[rng.uniform(as.size())];
        j = bs[rng.uniform(bs.size())];
      } else {
        i = rng.uniform(wa.size());
        j = rng.uniform(wb.size());
      }
      out.total_distance += levenshtein(wa[i], wb[j]);
    }
    out.pairs = config.pair_sample;
    out.sampled = true;
  }
  out.mean = static_cast<double>(out.total_distance) / static_cast<double>(out.pairs);
  return out;
}

DistanceMatrix distance_matrix(const Corpus& corpus, const SimilarityConfig& config,
                               DistanceVariant variant) {
  const auto vocab = vocabularies(corpus, config);
  const std::size_t n = vocab.size();
  DistanceMatrix out;
  out.labels = corpus.labels();
  out.values.assign(n, std::vector<double>(n, 0.0));
  out.variant = variant;
  out.sampled = !config.exact_pairs;
  out.pair_sample = out.sampled ? config.pair_sample : 0;
  out.seed = config.seed;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      SimilarityConfig pair_config = config;
      pair_config.seed =
          derive_seed(config.seed, "pairs:" + out.labels[i] + "\t" + out.labels[j]);
      const double mean = avg_edit_distance(vocab[i], vocab[j], variant, pair_config).mean;
      out.values[i][j] = out.values[j][i] = mean;
    }
  }
  return out;
}

void write_overlap_tsv(std::ostream& out, const OverlapMatrix& matrix) {
  for (const auto& label : matrix.labels) out << '\t' << label;
  out << '\n';
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    out << matrix.labels[i];
    for (std::uint64_t c : matrix.counts[i]) out << '\t' << c;
    out << '\n';
  }
}

void write_distance_tsv(std::ostream& out, const DistanceMatrix& matrix) {
  if (matrix.sampled) {
    out << "# sampled pairs=" << matrix.pair_sample << " seed=" << matrix.seed << '\n';
  }
  for (const auto& label : matrix.labels) out << '\t' << label;
  out << '\n';
  for (std::size_t i = 0; i < matrix.labels.size(); ++i) {
    out << matrix.labels[i];
    for (double v : matrix.values[i]) out << '\t' << internal::fixed(v, 3);
    out << '\n';
  }
}

}  // namespace dialectid
