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

#include "dialectid/features.h"

#include <algorithm>
#include <map>
#include <utility>

#include "binary_io.h"
#include "dialectid/error.h"
#include "dialectid/unicode.h"
#include "number_format.h"
#include "parallel.h"

namespace dialectid {
namespace {

const std::set<int>& named_char_orders(int i) {
  static const std::set<int> sets[] = {{2, 3}, {2, 3, 4}, {2, 3, 4, 5}};
  return sets[i - 1];
}

const std::set<int>& named_word_orders(int j) {
  static const std::set<int> sets[] = {{1}, {1, 2}, {1, 2, 3}};
  return sets[j - 1];
}

std::string join_orders(const std::set<int>& orders) {
  std::string out;
  for (int n : orders) {
    if (!out.empty()) out += ',';
    out += std::to_string(n);
  }
  return out;
}

std::set<int> parse_orders(std::string_view text) {
  std::set<int> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    try {
      out.insert(internal::parse_integer<int>(item, "n-gram order"));
    } catch (const DataError& e) {
      throw ConfigError(e.what());
    }
    start = end + 1;
  }
  return out;
}

void append_word_gram(std::span<const std::string_view> tokens,
                      std::size_t first, int n, std::string& out) {
  out.clear();
  for (int k = 0; k < n; ++k) {
    if (k > 0) out.push_back(' ');
    out.append(tokens[first + static_cast<std::size_t>(k)]);
  }
}

template <typename Token>
std::vector<std::string> word_ngrams(std::span<const Token> tokens, int n) {
  std::vector<std::string> out;
  if (n < 1 || tokens.size() < static_cast<std::size_t>(n)) return out;
  const std::size_t count = tokens.size() - static_cast<std::size_t>(n) + 1;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::string gram;
    for (int k = 0; k < n; ++k) {
      if (k > 0) gram.push_back(' ');
      gram.append(tokens[i + static_cast<std::size_t>(k)]);
    }
    out.push_back(std::move(gram));
  }
  return out;
}

// Calls visit(kind, order, gram) for every n-gram occurrence of the spec's
// orders in a normalized sentence.
template <typename Visit>
void for_each_gram(std::string_view text, const FeatureSpec& spec,
                   Visit&& visit) {
  if (!spec.char_orders.empty()) {
    const std::vector<std::size_t> off = unicode::codepoint_offsets(text);
    const std::size_t cps = off.size() - 1;
    for (int n : spec.char_orders) {
      const auto un = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + un <= cps; ++i) {
        visit(GramKind::kChar, n, text.substr(off[i], off[i + un] - off[i]));
      }
    }
  }
  if (!spec.word_orders.empty()) {
    const std::vector<std::string_view> tokens = tokenize(text);
    std::string buffer;
    for (int n : spec.word_orders) {
      const auto un = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
        append_word_gram(tokens, i, n, buffer);
        visit(GramKind::kWord, n, std::string_view(buffer));
      }
    }
  }
}

}  // namespace

void FeatureSpec::validate() const {
  if (char_orders.empty() && word_orders.empty()) {
    throw ConfigError("feature spec has no active n-gram order");
  }
  for (int n : char_orders) {
    if (n < kMinCharOrder || n > kMaxCharOrder) {
      throw ConfigError("character n-gram order " + std::to_string(n) +
                        " outside [2, 5]");
    }
  }
  for (int n : word_orders) {
    if (n < kMinWordOrder || n > kMaxWordOrder) {
      throw ConfigError("word n-gram order " + std::to_string(n) +
                        " outside [1, 3]");
    }
  }
}

std::string FeatureSpec::name() const {
  std::string c;
  std::string w;
  for (int i = 1; i <= 3; ++i) {
    if (char_orders == named_char_orders(i)) c = "C" + std::to_string(i);
    if (word_orders == named_word_orders(i)) w = "W" + std::to_string(i);
  }
  const bool char_named = char_orders.empty() || !c.empty();
  const bool word_named = word_orders.empty() || !w.empty();
  if (char_named && word_named && (!c.empty() || !w.empty())) {
    if (c.empty()) return w;
    if (w.empty()) return c;
    return c + "+" + w;
  }
  return "char=" + join_orders(char_orders) + ";word=" + join_orders(word_orders);
}

FeatureSpec feature_set_from_name(std::string_view name) {
  auto digit = [](char ch) { return ch >= '1' && ch <= '3' ? ch - '0' : 0; };
  FeatureSpec spec;
  bool ok = false;
  if (name.size() == 2) {
    const int i = digit(name[1]);
    if (i != 0 && name[0] == 'C') {
      spec.char_orders = named_char_orders(i);
      ok = true;
    } else if (i != 0 && name[0] == 'W') {
      spec.word_orders = named_word_orders(i);
      ok = true;
    }
  } else if (name.size() == 5 && name[0] == 'C' && name[2] == '+' &&
             name[3] == 'W') {
    const int i = digit(name[1]);
    const int j = digit(name[4]);
    if (i != 0 && j != 0) {
      spec.char_orders = named_char_orders(i);
      spec.word_orders = named_word_orders(j);
      ok = true;
    }
  }
  if (!ok) {
    std::string valid;
    for (const auto& n : standard_feature_set_names()) {
      if (!valid.empty()) valid += ", ";
      valid += n;
    }
    throw ConfigError("unknown feature set '" + std::string(name) +
                      "'; valid names: " + valid);
  }
  return spec;
}

FeatureSpec feature_spec_from_orders(std::string_view char_orders,
                                     std::string_view word_orders) {
  FeatureSpec spec{parse_orders(char_orders), parse_orders(word_orders)};
  spec.validate();
  return spec;
}

std::vector<std::string> standard_feature_set_names() {
  std::vector<std::string> names = {"C1", "C2", "C3", "W1", "W2", "W3"};
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      names.push_back("C" + std::to_string(i) + "+W" + std::to_string(j));
    }
  }
  return names;
}

std::vector<std::string> extract_char_ngrams(std::string_view text, int n) {
  std::vector<std::string> out;
  if (n < 1) return out;
  const std::vector<std::size_t> off = unicode::codepoint_offsets(text);
  const std::size_t cps = off.size() - 1;
  const auto un = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + un <= cps; ++i) {
    out.emplace_back(text.substr(off[i], off[i + un] - off[i]));
  }
  return out;
}

std::vector<std::string> extract_word_ngrams(
    std::span<const std::string_view> tokens, int n) {
  return word_ngrams(tokens, n);
}

std::vector<std::string> extract_word_ngrams(std::span<const std::string> tokens,
                                             int n) {
  return word_ngrams(tokens, n);
}

std::size_t FeatureIndex::slot(GramKind kind, int order) {
  if (kind == GramKind::kChar) {
    return static_cast<std::size_t>(order - kMinCharOrder);
  }
  return static_cast<std::size_t>(kMaxCharOrder - kMinCharOrder + 1 + order -
                                  kMinWordOrder);
}

FeatureIndex::FeatureIndex(std::vector<FeatureKey> entries)
    : entries_(std::move(entries)) {
  for (std::size_t col = 0; col < entries_.size(); ++col) {
    const FeatureKey& key = entries_[col];
    const bool char_ok = key.kind == GramKind::kChar &&
                         key.order >= kMinCharOrder && key.order <= kMaxCharOrder;
    const bool word_ok = key.kind == GramKind::kWord &&
                         key.order >= kMinWordOrder && key.order <= kMaxWordOrder;
    if (!char_ok && !word_ok) {
      throw DataError("feature index entry " + std::to_string(col) +
                      " has an invalid kind or order");
    }
    const bool inserted =
        tables_[slot(key.kind, key.order)]
            .emplace(key.gram, static_cast<std::uint32_t>(col))
            .second;
    if (!inserted) {
      throw DataError("duplicate feature index entry '" + key.gram + "'");
    }
  }
}

void IndexOptions::validate() const {
  if (min_count < 1) throw ConfigError("min_count must be at least 1");
  if (hash_buckets != 0 && min_count != 1) {
    throw ConfigError("min_count cannot be combined with feature hashing");
  }
}

std::uint32_t hashed_column(GramKind kind, int order, std::string_view gram,
                            std::uint32_t buckets) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  mix(static_cast<unsigned char>(kind));
  mix(static_cast<unsigned char>(order));
  for (unsigned char c : gram) mix(c);
  return static_cast<std::uint32_t>(h % buckets);
}

FeatureIndex FeatureIndex::hashed(std::uint32_t buckets) {
  if (buckets == 0) throw ConfigError("a hashed index needs at least one bucket");
  FeatureIndex index;
  index.hash_buckets_ = buckets;
  return index;
}

std::optional<std::uint32_t> FeatureIndex::find(GramKind kind, int order,
                                                std::string_view gram) const {
  const bool in_range =
      kind == GramKind::kChar
          ? order >= kMinCharOrder && order <= kMaxCharOrder
          : order >= kMinWordOrder && order <= kMaxWordOrder;
  if (!in_range) return std::nullopt;
  if (hash_buckets_ != 0) return hashed_column(kind, order, gram, hash_buckets_);
  const Table& table = tables_[slot(kind, order)];
  const auto it = table.find(gram);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

FeatureIndex build_feature_index(const Corpus& corpus, const FeatureSpec& spec,
                                 const IndexOptions& options) {
  spec.validate();
  options.validate();
  if (corpus.empty()) throw DataError("cannot build a feature index from an empty corpus");
  if (options.hash_buckets != 0) return FeatureIndex::hashed(options.hash_buckets);

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };
  using Counts = std::unordered_map<std::string, std::uint64_t, Hash, std::equal_to<>>;
  // Keyed by (kind, order) so that iteration is already in column order.
  std::map<std::pair<GramKind, int>, Counts> counts;
  for (const auto& s : corpus.sentences()) {
    for_each_gram(s.text, spec, [&](GramKind kind, int order, std::string_view gram) {
      Counts& table = counts[{kind, order}];
      auto it = table.find(gram);
      if (it == table.end()) {
        table.emplace(std::string(gram), 1);
      } else {
        ++it->second;
      }
    });
  }

  std::vector<FeatureKey> entries;
  for (auto& [slot, table] : counts) {
    std::vector<std::string> grams;
    grams.reserve(table.size());
    for (auto& [gram, count] : table) {
      if (count >= options.min_count) grams.push_back(gram);
    }
    // Byte order of UTF-8 strings is code point order.
    std::sort(grams.begin(), grams.end());
    for (auto& gram : grams) {
      entries.push_back({slot.first, slot.second, std::move(gram)});
    }
  }
  return FeatureIndex(std::move(entries));
}

double FeatureVector::value_at(std::uint32_t column) const {
  const auto it = std::lower_bound(
      entries.begin(), entries.end(), column,
      [](const FeatureEntry& e, std::uint32_t c) { return e.column < c; });
  return it != entries.end() && it->column == column ? it->value : 0.0;
}

double FeatureVector::squared_norm() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.value * e.value;
  return s;
}

double dot(const FeatureVector& a, const FeatureVector& b) {
  double s = 0.0;
  auto i = a.entries.begin();
  auto j = b.entries.begin();
  while (i != a.entries.end() && j != b.entries.end()) {
    if (i->column < j->column) {
      ++i;
    } else if (j->column < i->column) {
      ++j;
    } else {
      s += i->value * j->value;
      ++i;
      ++j;
    }
  }
  return s;
}

double dot(const FeatureVector& x, std::span<const double> dense) {
  double s = 0.0;
  for (const auto& e : x.entries) s += e.value * dense[e.column];
  return s;
}

FeatureVector vectorize(std::string_view text, const FeatureIndex& index,
                        const FeatureSpec& spec) {
  std::vector<std::uint32_t> columns;
  for_each_gram(text, spec, [&](GramKind kind, int order, std::string_view gram) {
    if (const auto col = index.find(kind, order, gram)) columns.push_back(*col);
  });
  std::sort(columns.begin(), columns.end());
  FeatureVector v;
  for (std::size_t i = 0; i < columns.size();) {
    std::size_t j = i;
    while (j < columns.size() && columns[j] == columns[i]) ++j;
    v.entries.push_back({columns[i], static_cast<double>(j - i)});
    i = j;
  }
  return v;
}

std::vector<FeatureVector> vectorize_corpus(const Corpus& corpus,
                                            const FeatureIndex& index,
                                            const FeatureSpec& spec,
                                            int threads) {
  std::vector<FeatureVector> out(corpus.size());
  internal::parallel_for(corpus.size(), threads, [&](std::size_t i) {
    out[i] = vectorize(corpus[i].text, index, spec);
  });
  return out;
}

namespace {
constexpr std::string_view kIndexMagic = "DIFX";
}  // namespace

void write_feature_index(std::ostream& out, const FeatureIndex& index) {
  internal::BinaryWriter w(out);
  w.bytes(kIndexMagic);
  w.u32(kFeatureIndexFormatVersion);
  w.u32(index.hash_buckets());
  w.u64(index.entries().size());
  for (std::size_t col = 0; col < index.entries().size(); ++col) {
    const FeatureKey& key = index.entries()[col];
    w.u8(static_cast<std::uint8_t>(key.kind));
    w.u8(static_cast<std::uint8_t>(key.order));
    w.str(key.gram);
    w.u32(static_cast<std::uint32_t>(col));
  }
  w.check("feature index");
}

FeatureIndex read_feature_index(std::istream& in) {
  internal::BinaryReader r(in, "feature index");
  if (r.bytes(kIndexMagic.size()) != kIndexMagic) r.fail("bad magic bytes");
  const std::uint32_t version = r.u32();
  if (version != kFeatureIndexFormatVersion) {
    r.fail("unsupported format version " + std::to_string(version) +
           " (expected " + std::to_string(kFeatureIndexFormatVersion) + ")");
  }
  const std::uint32_t buckets = r.u32();
  const std::uint64_t count = r.u64();
  if (count > UINT32_MAX) r.fail("entry count out of range");
  if (buckets != 0) {
    if (count != 0) r.fail("a hashed index cannot list entries");
    return FeatureIndex::hashed(buckets);
  }
  std::vector<FeatureKey> entries;
  entries.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 20)));
  for (std::uint64_t col = 0; col < count; ++col) {
    const std::uint8_t kind = r.u8();
    const std::uint8_t order = r.u8();
    std::string gram = r.str();
    if (r.u32() != col) r.fail("column ids out of sequence");
    if (kind > 1) r.fail("invalid gram kind");
    if (!unicode::is_valid_utf8(gram)) r.fail("gram is not valid UTF-8");
    entries.push_back({static_cast<GramKind>(kind), order, std::move(gram)});
  }
  try {
    return FeatureIndex(std::move(entries));
  } catch (const DataError& e) {
    r.fail(e.what());
  }
}

}  // namespace dialectid
