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

#ifndef DIALECTID_CORPUS_H_
#define DIALECTID_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dialectid {

// A normalized sentence and its language label.
struct LabeledSentence {
  std::string text;
  std::string label;

  friend bool operator==(const LabeledSentence&, const LabeledSentence&) = default;
};

// An ordered collection of labeled sentences with an ordered label
// inventory. Every sentence label is a member of the inventory; the
// inventory may contain labels without sentences (e.g. after subsetting).
class Corpus {
 public:
  Corpus() = default;

  // Takes the inventory from first appearance in sentences.
  explicit Corpus(std::vector<LabeledSentence> sentences);

  // Uses an explicit inventory. Throws DataError if a sentence label is
  // missing from it or if it lists a label twice.
  Corpus(std::vector<LabeledSentence> sentences,
         std::vector<std::string> labels);

  const std::vector<LabeledSentence>& sentences() const { return sentences_; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::size_t size() const { return sentences_.size(); }
  bool empty() const { return sentences_.empty(); }
  const LabeledSentence& operator[](std::size_t i) const {
    return sentences_[i];
  }

  // Position of label in the inventory, or labels().size() if absent.
  std::size_t label_id(std::string_view label) const;
  bool has_label(std::string_view label) const {
    return label_id(label) < labels_.size();
  }

  // Sentence indices carrying label, in corpus order.
  std::vector<std::size_t> indices_of(std::string_view label) const;

  // Sentences at the given indices (in the given order); keeps the full
  // label inventory.
  Corpus subset(std::span<const std::size_t> indices) const;

 private:
  std::vector<LabeledSentence> sentences_;
  std::vector<std::string> labels_;
};

// NFC, whitespace runs collapsed to a single space, ends trimmed.
// Throws DataError if nothing but whitespace remains or the input is not
// valid UTF-8.
std::string normalize_sentence(std::string_view raw);

// Same as normalize_sentence but returns "" for whitespace-only input.
std::string normalize_text(std::string_view raw);

// Splits normalized text on single spaces. Tokens are kept verbatim.
std::vector<std::string_view> tokenize(std::string_view text);

// TSV corpus: one `label<TAB>sentence` record per line, no header.
// Blank lines are skipped; source_name is used in error messages.
Corpus parse_tsv_corpus(std::istream& in, std::string_view source_name);
Corpus load_tsv_corpus(const std::filesystem::path& path);

// Several TSV files concatenated in order.
Corpus load_tsv_corpora(std::span<const std::filesystem::path> paths);

// One sentence per line, label supplied by the caller.
struct LanguageFile {
  std::string label;
  std::filesystem::path path;
};
Corpus load_language_files(std::span<const LanguageFile> files);

void write_tsv_corpus(std::ostream& out, const Corpus& corpus);

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
  bool stratified = true;

  void validate() const;
};

// Sentence indices of each side, ascending.
struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Per label, floor(n * train_fraction) shuffled sentences go to train and
// the rest to test. Throws DataError if a label has fewer than 2 sentences.
SplitIndices split_indices(const Corpus& corpus, const SplitSpec& spec);
std::pair<Corpus, Corpus> split_train_test(const Corpus& corpus,
                                           const SplitSpec& spec);

struct FoldAssignment {
  int k = 0;
  std::vector<int> fold_of;  // indexed by sentence

  std::vector<std::size_t> held_out(int fold) const;
  std::vector<std::size_t> training(int fold) const;
};

// Stratified k-fold assignment. Within each label, fold sizes differ by at
// most one. Throws DataError if a label has fewer than k sentences.
FoldAssignment make_cv_folds(const Corpus& corpus, int k, std::uint64_t seed);

}  // namespace dialectid

#endif  // DIALECTID_CORPUS_H_
