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

#ifndef DIALECTID_FEATURES_H_
#define DIALECTID_FEATURES_H_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dialectid/corpus.h"

namespace dialectid {

enum class GramKind : std::uint8_t { kChar = 0, kWord = 1 };

inline constexpr int kMinCharOrder = 2;
inline constexpr int kMaxCharOrder = 5;
inline constexpr int kMinWordOrder = 1;
inline constexpr int kMaxWordOrder = 3;

// Active n-gram orders. Character orders lie in [2, 5], word orders in
// [1, 3], and at least one order is active.
struct FeatureSpec {
  std::set<int> char_orders;
  std::set<int> word_orders;

  void validate() const;

  // "C3", "W1", "C2+W3" for the named sets, otherwise e.g. "char=2,5;word=1".
  std::string name() const;

  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

// C1 = char {2,3}, C2 = {2,3,4}, C3 = {2,3,4,5}; W1 = word {1},
// W2 = {1,2}, W3 = {1,2,3}; "Ci+Wj" takes the union. Throws ConfigError
// listing the valid names otherwise.
FeatureSpec feature_set_from_name(std::string_view name);

// Builds a spec from comma-separated order lists such as "2,3,4" and "1".
// Either list may be empty, not both.
FeatureSpec feature_spec_from_orders(std::string_view char_orders,
                                     std::string_view word_orders);

// The fifteen named configurations in table order: C1..C3, W1..W3, then
// C1+W1 .. C3+W3.
std::vector<std::string> standard_feature_set_names();

// All contiguous windows of n code points, spaces included, in order.
std::vector<std::string> extract_char_ngrams(std::string_view text, int n);

// All contiguous windows of n tokens joined by a single space, in order.
std::vector<std::string> extract_word_ngrams(
    std::span<const std::string_view> tokens, int n);
std::vector<std::string> extract_word_ngrams(
    std::span<const std::string> tokens, int n);

struct FeatureKey {
  GramKind kind = GramKind::kChar;
  int order = 0;
  std::string gram;

  friend auto operator<=>(const FeatureKey&, const FeatureKey&) = default;
  friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

struct IndexOptions {
  // n-grams seen fewer times than this across the corpus are left out.
  std::uint64_t min_count = 1;
  // Nonzero replaces the vocabulary with this many hashed columns; distinct
  // grams may then share a column and nothing is out of vocabulary.
  std::uint32_t hash_buckets = 0;

  // min_count has no meaning for a hashed index, so combining both is an error.
  void validate() const;
};

// FNV-1a over the kind byte, the order byte and the gram bytes, modulo buckets.
std::uint32_t hashed_column(GramKind kind, int order, std::string_view gram,
                            std::uint32_t buckets);

// Immutable map from (kind, order, gram) to a dense column id. Column i is
// entries()[i]. A hashed index has no entries and maps every gram.
class FeatureIndex {
 public:
  FeatureIndex() = default;

  // Throws DataError on duplicate keys or out-of-range orders.
  explicit FeatureIndex(std::vector<FeatureKey> entries);

  static FeatureIndex hashed(std::uint32_t buckets);

  std::size_t size() const { return hash_buckets_ != 0 ? hash_buckets_ : entries_.size(); }
  bool empty() const { return size() == 0; }
  bool is_hashed() const { return hash_buckets_ != 0; }
  std::uint32_t hash_buckets() const { return hash_buckets_; }
  const std::vector<FeatureKey>& entries() const { return entries_; }
  const FeatureKey& key(std::uint32_t column) const { return entries_[column]; }

  std::optional<std::uint32_t> find(GramKind kind, int order,
                                    std::string_view gram) const;

  friend bool operator==(const FeatureIndex& a, const FeatureIndex& b) {
    return a.hash_buckets_ == b.hash_buckets_ && a.entries_ == b.entries_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  using Table =
      std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>;

  static constexpr std::size_t kSlots =
      (kMaxCharOrder - kMinCharOrder + 1) + (kMaxWordOrder - kMinWordOrder + 1);
  static std::size_t slot(GramKind kind, int order);

  std::vector<FeatureKey> entries_;
  std::array<Table, kSlots> tables_;
  std::uint32_t hash_buckets_ = 0;
};

// Every n-gram of the active orders that occurs in the corpus (at least
// options.min_count times). Columns are assigned in (kind, order, gram)
// order, char before word, grams compared by code point. With
// options.hash_buckets set the corpus is not scanned.
FeatureIndex build_feature_index(const Corpus& corpus, const FeatureSpec& spec,
                                 const IndexOptions& options = {});

struct FeatureEntry {
  std::uint32_t column = 0;
  double value = 0.0;

  friend bool operator==(const FeatureEntry&, const FeatureEntry&) = default;
};

// Sparse vector with strictly increasing columns and non-zero values.
struct FeatureVector {
  std::vector<FeatureEntry> entries;

  std::size_t nnz() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
  double value_at(std::uint32_t column) const;
  double squared_norm() const;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

double dot(const FeatureVector& a, const FeatureVector& b);
double dot(const FeatureVector& x, std::span<const double> dense);

// Counts of the indexed n-grams of a normalized sentence. Grams missing
// from the index are dropped.
FeatureVector vectorize(std::string_view text, const FeatureIndex& index,
                        const FeatureSpec& spec);
inline FeatureVector vectorize(const LabeledSentence& sentence,
                               const FeatureIndex& index,
                               const FeatureSpec& spec) {
  return vectorize(sentence.text, index, spec);
}

// Vectorizes every sentence; the result does not depend on threads.
std::vector<FeatureVector> vectorize_corpus(const Corpus& corpus,
                                            const FeatureIndex& index,
                                            const FeatureSpec& spec,
                                            int threads = 1);

inline constexpr std::uint32_t kFeatureIndexFormatVersion = 1;

// Binary layout (little endian): "DIFX", u32 version, u32 hash buckets
// (0 for a vocabulary), u64 entry count, then per column: u8 kind, u8 order,
// u32 byte length, UTF-8 gram, u32 column.
void write_feature_index(std::ostream& out, const FeatureIndex& index);
FeatureIndex read_feature_index(std::istream& in);

}  // namespace dialectid

#endif  // DIALECTID_FEATURES_H_
