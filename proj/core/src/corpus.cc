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

#include "dialectid/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <unordered_set>

#include "dialectid/error.h"
#include "dialectid/rng.h"
#include "dialectid/unicode.h"

namespace dialectid {

Corpus::Corpus(std::vector<LabeledSentence> sentences)
    : sentences_(std::move(sentences)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& s : sentences_) {
    if (seen.insert(s.label).second) labels_.push_back(s.label);
  }
}

Corpus::Corpus(std::vector<LabeledSentence> sentences,
               std::vector<std::string> labels)
    : sentences_(std::move(sentences)), labels_(std::move(labels)) {
  std::unordered_set<std::string_view> inventory;
  for (const auto& label : labels_) {
    if (!inventory.insert(label).second) {
      throw DataError("duplicate label in inventory: " + label);
    }
  }
  for (const auto& s : sentences_) {
    if (!inventory.contains(s.label)) {
      throw DataError("sentence label not in inventory: " + s.label);
    }
  }
}

std::size_t Corpus::label_id(std::string_view label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> Corpus::indices_of(std::string_view label) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sentences_.size(); ++i) {
    if (sentences_[i].label == label) out.push_back(i);
  }
  return out;
}

Corpus Corpus::subset(std::span<const std::size_t> indices) const {
  Corpus out;
  out.labels_ = labels_;
  out.sentences_.reserve(indices.size());
  for (std::size_t i : indices) out.sentences_.push_back(sentences_.at(i));
  return out;
}

std::string normalize_text(std::string_view raw) {
  const std::u32string cps = unicode::decode_utf8(unicode::to_nfc(raw));
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char32_t cp : cps) {
    if (unicode::is_whitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    unicode::append_utf8(cp, out);
  }
  return out;
}

std::string normalize_sentence(std::string_view raw) {
  std::string out = normalize_text(raw);
  if (out.empty()) throw DataError("sentence contains only whitespace");
  return out;
}

std::vector<std::string_view> tokenize(std::string_view text) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(' ', start);
    if (end == std::string_view::npos) end = text.size();
    if (end > start) tokens.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return tokens;
}

namespace {

std::string where(std::string_view source, std::size_t line_no) {
  return std::string(source) + ":" + std::to_string(line_no) + ": ";
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::string_view trim_ascii(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

}  // namespace

Corpus parse_tsv_corpus(std::istream& in, std::string_view source_name) {
  std::vector<LabeledSentence> sentences;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (!unicode::is_valid_utf8(line)) {
      throw DataError(where(source_name, line_no) + "invalid UTF-8");
    }
    if (normalize_text(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw DataError(where(source_name, line_no) +
                      "malformed record, expected label<TAB>sentence");
    }
    const std::string_view label = trim_ascii(std::string_view(line).substr(0, tab));
    if (label.empty()) {
      throw DataError(where(source_name, line_no) + "empty label");
    }
    std::string text = normalize_text(std::string_view(line).substr(tab + 1));
    if (text.empty()) {
      throw DataError(where(source_name, line_no) + "empty sentence");
    }
    sentences.push_back({std::move(text), std::string(label)});
  }
  if (in.bad()) throw DataError("read error in " + std::string(source_name));
  return Corpus(std::move(sentences));
}

Corpus load_tsv_corpus(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return parse_tsv_corpus(in, path.string());
}

Corpus load_tsv_corpora(std::span<const std::filesystem::path> paths) {
  std::vector<LabeledSentence> all;
  for (const auto& path : paths) {
    Corpus part = load_tsv_corpus(path);
    all.insert(all.end(), part.sentences().begin(), part.sentences().end());
  }
  return Corpus(std::move(all));
}

Corpus load_language_files(std::span<const LanguageFile> files) {
  std::vector<LabeledSentence> sentences;
  std::vector<std::string> labels;
  for (const auto& file : files) {
    if (file.label.empty()) {
      throw DataError("empty label for " + file.path.string());
    }
    if (std::find(labels.begin(), labels.end(), file.label) == labels.end()) {
      labels.push_back(file.label);
    }
    std::ifstream in = open_input(file.path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      strip_cr(line);
      if (!unicode::is_valid_utf8(line)) {
        throw DataError(where(file.path.string(), line_no) + "invalid UTF-8");
      }
      std::string text = normalize_text(line);
      if (text.empty()) continue;
      sentences.push_back({std::move(text), file.label});
    }
    if (in.bad()) throw DataError("read error in " + file.path.string());
  }
  return Corpus(std::move(sentences), std::move(labels));
}

void write_tsv_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& s : corpus.sentences()) {
    out << s.label << '\t' << s.text << '\n';
  }
}

void SplitSpec::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie strictly between 0 and 1");
  }
}

namespace {

std::size_t train_count(std::size_t n, double fraction) {
  // The epsilon keeps products such as 0.29 * 100 from flooring to 28.
  return static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * fraction + 1e-9));
}

}  // namespace

SplitIndices split_indices(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  SplitIndices out;
  auto take = [&](std::vector<std::size_t>& idx, std::uint64_t seed) {
    Rng rng(seed);
    rng.shuffle(std::span(idx));
    const std::size_t n_train = train_count(idx.size(), spec.train_fraction);
    out.train.insert(out.train.end(), idx.begin(), idx.begin() + n_train);
    out.test.insert(out.test.end(), idx.begin() + n_train, idx.end());
  };
  if (spec.stratified) {
    for (const auto& label : corpus.labels()) {
      std::vector<std::size_t> idx = corpus.indices_of(label);
      if (idx.size() < 2) {
        throw DataError("label '" + label + "' has " +
                        std::to_string(idx.size()) +
                        " sentences; a split needs at least 2");
      }
      take(idx, derive_seed(spec.seed, "split:" + label));
    }
  } else {
    if (corpus.size() < 2) {
      throw DataError("a split needs at least 2 sentences");
    }
    std::vector<std::size_t> idx(corpus.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    take(idx, derive_seed(spec.seed, "split"));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           const SplitSpec& spec) {
  const SplitIndices idx = split_indices(corpus, spec);
  return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

std::vector<std::size_t> FoldAssignment::held_out(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldAssignment::training(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != fold) out.push_back(i);
  }
  return out;
}

FoldAssignment make_cv_folds(const Corpus& corpus, int k, std::uint64_t seed) {
  if (k < 1) throw ConfigError("number of folds must be positive");
  FoldAssignment folds;
  folds.k = k;
  folds.fold_of.assign(corpus.size(), -1);
  const auto uk = static_cast<std::size_t>(k);
  // Rotating the starting fold per label spreads the remainders, so folds
  // stay balanced overall and not only within each label.
  std::size_t offset = 0;
  for (const auto& label : corpus.labels()) {
    std::vector<std::size_t> idx = corpus.indices_of(label);
    if (idx.size() < uk) {
      throw DataError("label '" + label + "' has " +
                      std::to_string(idx.size()) + " sentences; " +
                      std::to_string(k) + "-fold CV needs at least " +
                      std::to_string(k));
    }
    Rng rng(derive_seed(seed, "folds:" + label));
    rng.shuffle(std::span(idx));
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      folds.fold_of[idx[pos]] = static_cast<int>((offset + pos) % uk);
    }
    offset = (offset + idx.size()) % uk;
  }
  return folds;
}

}  // namespace dialectid
