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

// Pre-parsed sentences with automatic annotation sets, and the inverted
// indexes used by the pattern matcher.

#ifndef FRAMEWATCH_CORPUS_HPP_
#define FRAMEWATCH_CORPUS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "framewatch/frame_store.hpp"

namespace framewatch {

using SentenceIndex = std::uint32_t;
using SetId = std::uint32_t;

// Half-open token index range [begin, end).
struct TokenRange {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  bool contains(const TokenRange &inner) const {
    return begin <= inner.begin && inner.end <= end;
  }
  bool overlaps(const TokenRange &o) const {
    return begin < o.end && o.begin < end;
  }
  friend auto operator<=>(const TokenRange &, const TokenRange &) = default;
};

enum class FieldTag { S, O, A, P, other };
std::string_view to_string(FieldTag t);
std::optional<FieldTag> parse_field_tag(std::string_view s);

// Accepts the short LU spellings (n, v, a, adv, other) and Universal
// Dependencies tags (NOUN, VERB, ...), which map onto them.
std::optional<Pos> parse_token_pos(std::string_view s);

struct Token {
  std::string surface;
  std::string lemma;
  Pos pos = Pos::other;
  std::uint32_t char_start = 0;
  std::uint32_t char_end = 0;
  // The tag as written in the input (e.g. "NOUN"); empty means to_string(pos).
  std::string tag;
};

struct FeSpan {
  std::string role;
  TokenRange span;
};

struct AnnotationSet {
  SetId id = 0;
  SentenceIndex sentence = 0;
  TokenRange target;
  std::string frame_name;
  // Resolved against the store; empty for unknown frames.
  std::optional<FrameId> frame;
  // The "lu" label as given in the input, kept for lossless serialization.
  std::optional<std::string> lu_label;
  std::optional<LuId> lu;
  std::vector<FeSpan> fes;
};

struct Sentence {
  std::string doc_id;
  std::string sent_id;
  FieldTag field_tag = FieldTag::other;
  std::vector<Token> tokens;
  // Annotation sets of this sentence, in input order.
  std::vector<SetId> sets;

  // Surface text laid out by the token offsets, relative to the first token.
  std::string text() const;
  // Byte range of a token range within text().
  CharSpan char_span(const TokenRange &r) const;
};

struct Warning {
  std::size_t line = 0;
  std::string doc_id;
  std::string sent_id;
  std::string message;
};

class Corpus {
 public:
  const std::vector<Sentence> &sentences() const { return sentences_; }
  const std::vector<AnnotationSet> &sets() const { return sets_; }
  const Sentence &sentence(SentenceIndex i) const { return sentences_.at(i); }
  const AnnotationSet &set(SetId id) const { return sets_.at(id); }
  bool empty() const { return sentences_.empty(); }

  std::optional<SentenceIndex> find(std::string_view doc_id,
                                    std::string_view sent_id) const;

  // Appends a sentence and its sets (set ids and sentence refs assigned
  // here). Throws ParseError on a duplicate (doc_id, sent_id).
  SentenceIndex append(Sentence sentence, std::vector<AnnotationSet> sets,
                       std::size_t line = 0);

 private:
  friend std::vector<Warning> resolve_against(Corpus &, const FrameStore &);
  std::vector<Sentence> sentences_;
  std::vector<AnnotationSet> sets_;
  std::map<std::pair<std::string, std::string>, SentenceIndex> by_key_;
};

struct IngestResult {
  Corpus corpus;
  std::vector<Warning> warnings;
};

// Parses corpus JSON Lines without consulting a frame store.
Corpus read_corpus(std::istream &in);
Corpus read_corpus(const std::string &path);

// Resolves frame names and lexical units against the store; annotation sets
// with unknown frames or roles are kept and reported.
std::vector<Warning> resolve_against(Corpus &corpus, const FrameStore &store);

IngestResult ingest(std::istream &in, const FrameStore &store);
IngestResult ingest(const std::string &path, const FrameStore &store);

// Canonical JSON Lines; serialize(ingest(x)) reproduces x in canonical form.
std::string serialize_corpus(const Corpus &corpus);
std::string serialize_sentence(const Corpus &corpus, SentenceIndex i);

struct LemmaPosting {
  SentenceIndex sentence;
  std::uint32_t token;
  friend auto operator<=>(const LemmaPosting &, const LemmaPosting &) = default;
};

class CorpusIndex {
 public:
  // Sentences in (doc_id, sent_id) order.
  const std::vector<SentenceIndex> &sentence_order() const { return order_; }
  // Position of a sentence in sentence_order().
  std::uint32_t rank(SentenceIndex s) const { return rank_.at(s); }

  // Set ids evoking a frame name, sorted by (doc_id, sent_id, set id).
  const std::vector<SetId> &sets_for_frame(std::string_view frame) const;
  const std::map<std::string, std::vector<SetId>, std::less<>> &frame_index()
      const {
    return by_frame_;
  }
  const std::vector<SetId> &sets_for_sentence(SentenceIndex s) const {
    return by_sentence_.at(s);
  }
  const std::vector<LemmaPosting> &postings_for_lemma(
      std::string_view lemma) const;
  std::size_t lemma_count() const { return by_lemma_.size(); }

  friend bool operator==(const CorpusIndex &, const CorpusIndex &) = default;

 private:
  friend CorpusIndex build_index(const Corpus &corpus);
  std::vector<SentenceIndex> order_;
  std::vector<std::uint32_t> rank_;
  std::map<std::string, std::vector<SetId>, std::less<>> by_frame_;
  std::vector<std::vector<SetId>> by_sentence_;
  std::map<std::string, std::vector<LemmaPosting>, std::less<>> by_lemma_;
};

CorpusIndex build_index(const Corpus &corpus);

struct CorpusStats {
  std::size_t sentence_count = 0;
  std::size_t set_count = 0;
  double sets_per_sentence = 0.0;
  std::size_t word_count = 0;
};

// Throws Error on an empty corpus.
CorpusStats stats(const Corpus &corpus);

}  // namespace framewatch

#endif  // FRAMEWATCH_CORPUS_HPP_
