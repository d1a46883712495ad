// Copyright 2026 The Framewatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRAMEWATCH_KEYNESS_HPP_
#define FRAMEWATCH_KEYNESS_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "framewatch/corpus.hpp"

namespace framewatch {

// Lemma n-gram frequencies. Multiword terms are lemmas joined by a space.
struct TermCounts {
  std::map<std::string, std::uint64_t> frequencies;
  std::uint64_t corpus_token_total = 0;

  void merge(const TermCounts &other);
};

// Counts lemma n-grams for n = 1..max_n without crossing sentence
// boundaries. Throws Error on an empty corpus or max_n outside 1..3.
TermCounts count_terms(const Corpus &corpus, int max_n = 3);

struct KeynessEntry {
  std::string term;
  double score = 0.0;
  double focus_fpm = 0.0;
  double ref_fpm = 0.0;
};

struct KeynessResult {
  // Score descending, ties broken by term.
  std::vector<KeynessEntry> entries;
};

// Frequency per million tokens.
double per_million(std::uint64_t frequency, std::uint64_t total);

// Smoothed ratio (fpm_focus + smoothing) / (fpm_ref + smoothing) for every
// focus term. Throws Error when smoothing <= 0 or the focus counts are empty.
KeynessResult keyness_scores(const TermCounts &focus, const TermCounts &reference,
                             double smoothing = 1.0);

// The first min(k, size) terms in score order. Throws Error when k < 1.
std::vector<std::string> top_candidates(const KeynessResult &result,
                                        std::size_t k = 2000);

// term<TAB>score<TAB>fpm_focus<TAB>fpm_ref, with a header line.
std::string keyness_tsv(const KeynessResult &result, std::size_t k);

}  // namespace framewatch

#endif  // FRAMEWATCH_KEYNESS_HPP_
