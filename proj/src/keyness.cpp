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

#include "framewatch/keyness.hpp"

#include <algorithm>
#include <cstdio>

namespace framewatch {

void TermCounts::merge(const TermCounts &other) {
  for (const auto &[term, n] : other.frequencies) frequencies[term] += n;
  corpus_token_total += other.corpus_token_total;
}

TermCounts count_terms(const Corpus &corpus, int max_n) {
  if (corpus.empty()) throw Error("cannot count terms in an empty corpus");
  if (max_n < 1 || max_n > 3) throw Error("max_n must be between 1 and 3");
  TermCounts counts;
  for (const auto &s : corpus.sentences()) {
    const auto &toks = s.tokens;
    counts.corpus_token_total += toks.size();
    for (std::size_t i = 0; i < toks.size(); ++i) {
      std::string term;
      for (std::size_t n = 1; n <= static_cast<std::size_t>(max_n) && i + n <= toks.size();
           ++n) {
        if (n > 1) term += ' ';
        term += toks[i + n - 1].lemma;
        ++counts.frequencies[term];
      }
    }
  }
  return counts;
}

double per_million(std::uint64_t frequency, std::uint64_t total) {
  if (total == 0) return 0.0;
  return static_cast<double>(frequency) * 1e6 / static_cast<double>(total);
}

KeynessResult keyness_scores(const TermCounts &focus, const TermCounts &reference,
                             double smoothing) {
  if (!(smoothing > 0.0)) throw Error("smoothing must be positive");
  if (focus.frequencies.empty() || focus.corpus_token_total == 0) {
    throw Error("focus counts are empty");
  }
  KeynessResult result;
  result.entries.reserve(focus.frequencies.size());
  for (const auto &[term, freq] : focus.frequencies) {
    KeynessEntry e;
    e.term = term;
    e.focus_fpm = per_million(freq, focus.corpus_token_total);
    auto it = reference.frequencies.find(term);
    e.ref_fpm = it == reference.frequencies.end()
                    ? 0.0
                    : per_million(it->second, reference.corpus_token_total);
    e.score = (e.focus_fpm + smoothing) / (e.ref_fpm + smoothing);
    result.entries.push_back(std::move(e));
  }
  std::sort(result.entries.begin(), result.entries.end(),
            [](const KeynessEntry &a, const KeynessEntry &b) {
              if (a.score != b.score) return a.score > b.score;
              return a.term < b.term;
            });
  return result;
}

std::vector<std::string> top_candidates(const KeynessResult &result, std::size_t k) {
  if (k < 1) throw Error("k must be at least 1");
  std::vector<std::string> out;
  const std::size_t n = std::min(k, result.entries.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(result.entries[i].term);
  return out;
}

std::string keyness_tsv(const KeynessResult &result, std::size_t k) {
  std::string out = "term\tscore\tfpm_focus\tfpm_ref\n";
  const std::size_t n = std::min(k, result.entries.size());
  char buf[128];
  for (std::size_t i = 0; i < n; ++i) {
    const auto &e = result.entries[i];
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.3f\t%.3f\n", e.score, e.focus_fpm,
                  e.ref_fpm);
    out += e.term;
    out += buf;
  }
  return out;
}

}  // namespace framewatch
