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

#include "synthetic.h"

#include <set>

#include "dialectid/rng.h"
#include "dialectid/unicode.h"

namespace dialectid::testing {
namespace {

constexpr char32_t kAlphabetBase[] = {U'a', U'α', U'а', U'ա', U'ა'};

std::string random_word(Rng& rng, std::size_t language, std::size_t length) {
  std::u32string w;
  for (std::size_t i = 0; i < length; ++i) {
    w.push_back(kAlphabetBase[language % 5] + static_cast<char32_t>(rng.uniform(20)));
  }
  return unicode::encode_utf8(w);
}

// Consonant plus optional vowel sign; all of these have combining class 0,
// so the text is already in NFC.
std::u32string syllable(Rng& rng) {
  std::u32string s;
  s.push_back(U'क' + static_cast<char32_t>(rng.uniform(37)));
  const std::uint64_t v = rng.uniform(10);
  if (v < 8) s.push_back(U'ा' + static_cast<char32_t>(v));
  return s;
}

std::vector<std::string> distinct_items(Rng& rng, std::size_t count, std::size_t min_syll,
                                        std::size_t max_syll, std::set<std::string>& taken) {
  std::vector<std::string> out;
  while (out.size() < count) {
    std::u32string w;
    const std::size_t n = min_syll + rng.uniform(max_syll - min_syll + 1);
    for (std::size_t i = 0; i < n; ++i) w += syllable(rng);
    std::string s = unicode::encode_utf8(w);
    if (taken.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::string disjoint_alphabet_word(std::size_t language, std::size_t length,
                                   std::uint64_t seed) {
  Rng rng(seed);
  return random_word(rng, language, length);
}

std::string disjoint_alphabet_sentence(std::size_t language, std::size_t words,
                                       std::uint64_t seed) {
  Rng rng(seed);
  std::string text;
  for (std::size_t w = 0; w < words; ++w) {
    if (w > 0) text += ' ';
    text += random_word(rng, language, 2 + rng.uniform(7));
  }
  return text;
}

Corpus disjoint_alphabet_corpus(std::size_t languages, std::size_t sentences_per_language,
                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<LabeledSentence> sentences;
  for (std::size_t i = 0; i < sentences_per_language; ++i) {
    for (std::size_t k = 0; k < languages; ++k) {
      const std::size_t words = 3 + rng.uniform(10);
      std::string text;
      for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) text += ' ';
        text += random_word(rng, k, 2 + rng.uniform(7));
      }
      sentences.push_back({std::move(text), "lang" + std::to_string(k)});
    }
  }
  return Corpus(std::move(sentences));
}

Corpus shared_roots_corpus(const SharedRootsOptions& o) {
  Rng rng(o.seed);
  std::set<std::string> taken;
  const auto roots = distinct_items(rng, o.roots, 2, 3, taken);
  const auto function_words = distinct_items(rng, o.function_words, 1, 2, taken);
  std::vector<std::vector<std::string>> paradigms;
  for (std::size_t k = 0; k < o.languages; ++k) {
    paradigms.push_back(distinct_items(rng, o.suffixes_per_language, 1, 2, taken));
  }
  std::vector<LabeledSentence> sentences;
  for (std::size_t i = 0; i < o.sentences_per_language; ++i) {
    for (std::size_t k = 0; k < o.languages; ++k) {
      const std::size_t words = o.min_words + rng.uniform(o.max_words - o.min_words + 1);
      std::string text;
      for (std::size_t w = 0; w < words; ++w) {
        if (w > 0) text += ' ';
        if (rng.uniform_real() < o.function_word_rate) {
          text += function_words[rng.uniform(function_words.size())];
        } else {
          text += roots[rng.uniform(roots.size())];
          text += paradigms[k][rng.uniform(paradigms[k].size())];
        }
      }
      sentences.push_back({std::move(text), "lang" + std::to_string(k)});
    }
  }
  return Corpus(std::move(sentences));
}

}  // namespace dialectid::testing
