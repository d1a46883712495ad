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

// Append-only judgment journal.
//
// Every accepted write is one JSON line: batch assignments and judgments.
// Replaying the file with last-writer-wins per (match, annotator, round)
// gives the current state; the superseded lines remain as the audit trail.
// Readers take immutable snapshots, so table computations never see a
// half-applied write.

#ifndef FRAMEWATCH_JOURNAL_HPP_
#define FRAMEWATCH_JOURNAL_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "framewatch/eval_harness.hpp"

namespace framewatch {

struct JournalState {
  std::map<JudgmentKey, Judgment> judgments;
  std::map<Round, std::vector<Batch>> batches;

  std::vector<Judgment> judgment_list() const;
  std::vector<Judgment> judgments_in(Round round) const;
  // nullptr when the round has not been assigned.
  const std::vector<Batch> *batches_for(Round round) const;
  // Round-1 verdict per match; with several annotators the smallest name wins.
  R1Verdicts r1_verdicts() const;
  // Match ids covered by the round-1 assignment, in batch order.
  std::vector<std::string> evaluated_ids() const;
};

// The records of the round-1 assignment. Throws Error when an assigned id
// is missing from `all`.
std::vector<MatchRecord> evaluated_matches(const JournalState &state,
                                           const std::vector<MatchRecord> &all);

enum class UpsertOutcome { created, unchanged, replaced };

class Journal {
 public:
  // An empty path keeps the journal in memory. An existing file is replayed;
  // malformed lines raise ParseError.
  explicit Journal(std::string path = {});

  std::shared_ptr<const JournalState> snapshot() const;

  // Validates the verdict against the round and stamps the time when the
  // judgment carries none. A repeat with the same verdict and violence type
  // is a no-op.
  UpsertOutcome record(Judgment judgment);

  // Throws Error when the round already has an assignment.
  void record_batches(Round round, const std::vector<Batch> &batches);

 private:
  void append_line(const std::string &line);

  std::string path_;
  mutable std::mutex mu_;
  std::shared_ptr<const JournalState> state_;
};

std::string judgment_json(const Judgment &j);

}  // namespace framewatch

#endif  // FRAMEWATCH_JOURNAL_HPP_
