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

// Two-round human evaluation of pattern matches.
//
// Round 1 asks whether each match is an exact instance of its pattern.
// Round 2 revisits the round-1 non-matches, each with an annotator who did
// not see it before, and types the error. Precision tables and the error
// distribution are pure functions of the judgments.

#ifndef FRAMEWATCH_EVAL_HARNESS_HPP_
#define FRAMEWATCH_EVAL_HARNESS_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "framewatch/text_util.hpp"

namespace framewatch {

// What the harness needs from one line of a match file.
struct MatchRecord {
  std::string match_id;
  std::string pattern_id;
  std::string pattern_name;
  std::string description;
  std::string doc_id;
  std::string sent_id;
  std::string text;
  // The full JSON line, for rendering.
  std::string raw;
};

std::vector<MatchRecord> read_match_records(std::istream &in);
std::vector<MatchRecord> read_match_records(const std::string &path);

enum class Round { r1, r2 };
std::string_view to_string(Round r);
std::optional<Round> parse_round(std::string_view s);  // "r1", "1", "r2", "2"

// exact and non_match are round-1 verdicts, the rest round-2.
enum class Verdict { exact, non_match, gbv_other_pattern, partial, speculation, not_gbv };
std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);
bool verdict_belongs_to(Verdict v, Round r);

struct Judgment {
  std::string match_id;
  std::string annotator;
  Round round = Round::r1;
  Verdict verdict = Verdict::exact;
  std::optional<std::string> violence_type;
  std::string timestamp;
};

using JudgmentKey = std::tuple<std::string, std::string, Round>;
JudgmentKey key_of(const Judgment &j);

struct Batch {
  std::string annotator;
  Round round = Round::r1;
  std::vector<std::string> match_ids;
  friend bool operator==(const Batch &, const Batch &) = default;
};

// One match kept per whitespace-normalized sentence text, scoped to each
// pattern unless `per_pattern` is false. The keeper is the match with the
// smallest (doc_id, sent_id, match_id); keepers stay in input order.
std::vector<MatchRecord> dedupe(const std::vector<MatchRecord> &matches,
                                bool per_pattern = true);

// Seeded shuffle, then consecutive near-equal chunks in annotator order.
// Throws Error on an empty match list, no annotators or repeated names.
std::vector<Batch> assign_round1(const std::vector<std::string> &match_ids,
                                 const std::vector<std::string> &annotators,
                                 std::uint64_t seed);

// Round-1 verdict per match id.
using R1Verdicts = std::map<std::string, Verdict>;

// Distributes every round-1 non-match to an annotator who did not hold it
// in round 1, with sizes as equal as that constraint allows. Throws Error
// with fewer than two annotators, or when a round-1 match has no verdict.
std::vector<Batch> assign_round2(const std::vector<Batch> &round1,
                                 const R1Verdicts &verdicts,
                                 const std::vector<std::string> &annotators,
                                 std::uint64_t seed);

// Ratio scaled by 1000 and rounded half-up: 0.7745 -> 775.
std::uint64_t permille_half_up(std::uint64_t part, std::uint64_t whole);
// "0.775", "1.000"
std::string format_precision(std::uint64_t permille);
// "31.9%", "100%"
std::string format_percentage(std::uint64_t permille);

struct PrecisionRow {
  std::string pattern;
  std::uint64_t correct = 0;
  std::uint64_t error = 0;
  std::uint64_t precision_permille = 0;
  std::string precision() const { return format_precision(precision_permille); }
};

// Throws Error when correct + error is zero.
PrecisionRow precision_row(std::string pattern, std::uint64_t correct,
                           std::uint64_t error);

struct PrecisionTable {
  std::vector<PrecisionRow> rows;
  std::optional<PrecisionRow> overall;  // empty when there are no rows
  bool incomplete = false;
  std::vector<std::string> unjudged;
};

// Rows as given; overall over their summed counts.
PrecisionTable precision_from_counts(
    const std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>> &counts);

struct PrecisionOptions {
  // Round-2 verdicts that turn a round-1 non-match into a correct report.
  std::set<Verdict> r2_correct = {Verdict::gbv_other_pattern, Verdict::partial};
};

// One row per pattern id (ascending) over the evaluated matches. Round 1
// counts exact as correct; round 2 adds non-matches whose round-2 verdict
// is in options.r2_correct. Throws Error listing unjudged match ids.
PrecisionTable precision_table(const std::vector<MatchRecord> &evaluated,
                               const std::vector<Judgment> &judgments, Round round,
                               const PrecisionOptions &options = {});

// Same computation over the judged matches only; sets `incomplete` and
// `unjudged` instead of throwing.
PrecisionTable precision_snapshot(const std::vector<MatchRecord> &evaluated,
                                  const std::vector<Judgment> &judgments, Round round,
                                  const PrecisionOptions &options = {});

struct ErrorTypeRow {
  std::string type;
  std::uint64_t count = 0;
  std::uint64_t percentage_permille = 0;
  std::string percentage() const { return format_percentage(percentage_permille); }
};

struct ErrorDistribution {
  std::vector<ErrorTypeRow> rows;  // top types by count, then "Other"
  std::uint64_t total = 0;
};

// Counts the violence types of round-2 judgments. The `keep_top` most
// frequent types (ties by name) get rows; the rest are summed into "Other".
ErrorDistribution error_distribution(const std::vector<Judgment> &r2_judgments,
                                     std::size_t keep_top = 6);
ErrorDistribution error_distribution_from_counts(
    const std::vector<std::pair<std::string, std::uint64_t>> &counts,
    std::size_t keep_top = 6);

// Tab-separated, with a header line and a final overall/total row.
std::string precision_tsv(const PrecisionTable &table);
std::string error_tsv(const ErrorDistribution &dist);

// Column-aligned text tables with a rule under the header and above the total.
std::string precision_text(const PrecisionTable &table);
std::string error_text(const ErrorDistribution &dist);

}  // namespace framewatch

#endif  // FRAMEWATCH_EVAL_HARNESS_HPP_
