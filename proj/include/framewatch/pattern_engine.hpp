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

// Frame-semantic patterns and the matcher.
//
// A pattern names an anchor frame constraint (optionally restricted to a
// whitelist of lexical units) and a conjunction of role constraints. An
// anchor annotation set satisfies a role constraint when one of its frame
// element instances for that role contains the target of another set in
// the same sentence whose frame satisfies the filler constraint.
//
//   Cause_harm [Agent <- Kinship | Personal_relationship]
//
// Two matchers are provided: match_corpus() visits only sentences the
// frame index marks as candidates and may run on several workers;
// match_corpus_bruteforce() scans every pair of sets in every sentence and
// serves as the reference implementation.

#ifndef FRAMEWATCH_PATTERN_ENGINE_HPP_
#define FRAMEWATCH_PATTERN_ENGINE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "framewatch/corpus.hpp"
#include "framewatch/frame_store.hpp"

namespace framewatch {

struct ClosureDirective {
  RelationType relation = RelationType::inheritance;
  Direction direction = Direction::sources;
  friend bool operator==(const ClosureDirective &, const ClosureDirective &) = default;
};

struct FrameConstraint {
  // Frame names as written in the pattern file.
  std::vector<std::string> declared;
  std::optional<ClosureDirective> expand;
  // Declared frames plus their closure; what matching tests against.
  std::set<std::string> frame_names;
  std::optional<std::set<std::pair<std::string, Pos>>> lu_whitelist;

  // Compiled lookups over store ids.
  std::vector<bool> frame_mask;
  std::optional<std::set<LuId>> lu_ids;

  bool admits(const AnnotationSet &set) const;
};

struct RoleConstraint {
  std::string role;
  FrameConstraint filler;
};

struct Pattern {
  std::string id;
  std::string name;
  std::string scenario;
  FrameConstraint anchor;
  std::vector<RoleConstraint> roles;
  std::string notes;
  bool reconstructed = false;

  // e.g. "Cause_harm [Agent <- Kinship | Personal_relationship]"
  std::string description() const;
};

class CompileError : public Error {
 public:
  explicit CompileError(std::vector<std::string> problems);
  const std::vector<std::string> &problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

struct CompileResult {
  std::vector<Pattern> patterns;
  std::vector<std::string> warnings;
};

// Parses the pattern JSON Lines format and resolves every frame, role and
// lexical unit against the store. Throws ParseError for malformed lines and
// CompileError listing every resolution problem.
CompileResult compile_patterns(std::istream &in, const FrameStore &store);
CompileResult compile_patterns(const std::string &path, const FrameStore &store);

// Re-resolves a hand-built pattern (frame masks, closure, whitelist ids).
// Throws CompileError.
Pattern compile_pattern(Pattern pattern, const FrameStore &store,
                        std::vector<std::string> *warnings = nullptr);

enum class FillerAlignment { contain, any_overlap };

struct Binding {
  std::string role;
  TokenRange fe_span;
  SetId filler = 0;
  friend bool operator==(const Binding &, const Binding &) = default;
};

struct Match {
  std::string pattern_id;
  SentenceIndex sentence = 0;
  SetId anchor = 0;
  std::vector<Binding> bindings;
  friend bool operator==(const Match &, const Match &) = default;
};

// One match per satisfying anchor set, in set order. Each binding records
// the leftmost witness filler (ties: smallest set id, then earliest span).
std::vector<Match> match_sentence(const Corpus &corpus, SentenceIndex sentence,
                                  const Pattern &pattern,
                                  FillerAlignment alignment = FillerAlignment::contain);

struct MatchOptions {
  FillerAlignment alignment = FillerAlignment::contain;
  unsigned workers = 1;
};

// Matches sorted by (pattern id, doc id, sentence id, anchor set id).
std::vector<Match> match_corpus(const Corpus &corpus, const CorpusIndex &index,
                                const std::vector<Pattern> &patterns,
                                const MatchOptions &options = {});

std::vector<Match> match_corpus_bruteforce(
    const Corpus &corpus, const FrameStore &store,
    const std::vector<Pattern> &patterns,
    FillerAlignment alignment = FillerAlignment::contain);

// Count per pattern id, including patterns without matches.
std::map<std::string, std::size_t> count_matches(const std::vector<Match> &matches,
                                                 const std::vector<Pattern> &patterns);

struct RetentionPartition {
  std::vector<std::string> kept;
  std::vector<std::string> discarded;
};

// Patterns with fewer than min_matches matches are discarded.
RetentionPartition retention_filter(const std::map<std::string, std::size_t> &counts,
                                    std::size_t min_matches = 30);

// All matches when there are at most `cap`; otherwise a uniform sample of
// `cap` matches without replacement, deterministic for a given seed and
// returned in input order.
std::vector<Match> sample_for_inspection(const std::vector<Match> &matches,
                                         std::size_t cap = 100,
                                         std::uint64_t seed = 0);

// "<pattern>#<doc>#<sentence>#<anchor position within sentence>"
std::string match_id(const Match &match, const Corpus &corpus);

// One JSON Lines record describing the match for review and evaluation.
std::string match_record(const Match &match, const Corpus &corpus,
                         const FrameStore &store, const Pattern &pattern);

}  // namespace framewatch

#endif  // FRAMEWATCH_PATTERN_ENGINE_HPP_
