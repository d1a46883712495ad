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

#include "framewatch/journal.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string batch_json(const Batch &b) {
  ordered_json j;
  j["kind"] = "batch";
  j["round"] = to_string(b.round);
  j["annotator"] = b.annotator;
  j["match_ids"] = b.match_ids;
  return j.dump();
}

Round round_field(const json &j, std::size_t line) {
  if (!j.contains("round") || !j["round"].is_string()) throw ParseError(line, "missing round");
  auto r = parse_round(j["round"].get<std::string>());
  if (!r) throw ParseError(line, "invalid round");
  return *r;
}

std::string string_field(const json &j, const char *key, std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(line, std::string("missing string field \"") + key + "\"");
  }
  return it->get<std::string>();
}

}  // namespace

std::string judgment_json(const Judgment &j) {
  ordered_json o;
  o["kind"] = "judgment";
  o["match_id"] = j.match_id;
  o["annotator"] = j.annotator;
  o["round"] = to_string(j.round);
  o["verdict"] = to_string(j.verdict);
  if (j.violence_type) o["violence_type"] = *j.violence_type;
  o["timestamp"] = j.timestamp;
  return o.dump();
}

std::vector<Judgment> JournalState::judgment_list() const {
  std::vector<Judgment> out;
  out.reserve(judgments.size());
  for (const auto &[key, j] : judgments) out.push_back(j);
  return out;
}

std::vector<Judgment> JournalState::judgments_in(Round round) const {
  std::vector<Judgment> out;
  for (const auto &[key, j] : judgments) {
    if (j.round == round) out.push_back(j);
  }
  return out;
}

const std::vector<Batch> *JournalState::batches_for(Round round) const {
  auto it = batches.find(round);
  return it == batches.end() ? nullptr : &it->second;
}

R1Verdicts JournalState::r1_verdicts() const {
  // Keys sort by (match, annotator, round), so the first r1 entry per match
  // belongs to the smallest annotator name.
  R1Verdicts out;
  for (const auto &[key, j] : judgments) {
    if (j.round == Round::r1) out.try_emplace(j.match_id, j.verdict);
  }
  return out;
}

std::vector<std::string> JournalState::evaluated_ids() const {
  std::vector<std::string> out;
  if (const auto *r1 = batches_for(Round::r1)) {
    for (const auto &b : *r1) out.insert(out.end(), b.match_ids.begin(), b.match_ids.end());
  }
  return out;
}

std::vector<MatchRecord> evaluated_matches(const JournalState &state,
                                           const std::vector<MatchRecord> &all) {
  std::map<std::string, const MatchRecord *> by_id;
  for (const auto &m : all) by_id.emplace(m.match_id, &m);
  std::vector<MatchRecord> out;
  for (const auto &id : state.evaluated_ids()) {
    auto it = by_id.find(id);
    if (it == by_id.end()) throw Error("assigned match " + id + " is not in the match file");
    out.push_back(*it->second);
  }
  return out;
}

Journal::Journal(std::string path) : path_(std::move(path)) {
  auto state = std::make_shared<JournalState>();
  if (!path_.empty()) {
    std::ifstream in(path_);
    std::string line;
    std::size_t lineno = 0;
    while (in && std::getline(in, line)) {
      ++lineno;
      if (trim(line).empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error &e) {
        throw ParseError(lineno, std::string("invalid JSON in journal: ") + e.what());
      }
      if (!j.is_object()) throw ParseError(lineno, "journal record must be an object");
      const std::string kind = string_field(j, "kind", lineno);
      if (kind == "batch") {
        Batch b;
        b.round = round_field(j, lineno);
        b.annotator = string_field(j, "annotator", lineno);
        if (!j.contains("match_ids") || !j["match_ids"].is_array()) {
          throw ParseError(lineno, "batch needs a match_ids array");
        }
        for (const auto &id : j["match_ids"]) {
          if (!id.is_string()) throw ParseError(lineno, "match ids must be strings");
          b.match_ids.push_back(id.get<std::string>());
        }
        state->batches[b.round].push_back(std::move(b));
      } else if (kind == "judgment") {
        Judgment jd;
        jd.match_id = string_field(j, "match_id", lineno);
        jd.annotator = string_field(j, "annotator", lineno);
        jd.round = round_field(j, lineno);
        auto v = parse_verdict(string_field(j, "verdict", lineno));
        if (!v || !verdict_belongs_to(*v, jd.round)) {
          throw ParseError(lineno, "invalid verdict for round " + std::string(to_string(jd.round)));
        }
        jd.verdict = *v;
        if (j.contains("violence_type") && j["violence_type"].is_string()) {
          jd.violence_type = j["violence_type"].get<std::string>();
        }
        if (j.contains("timestamp") && j["timestamp"].is_string()) {
          jd.timestamp = j["timestamp"].get<std::string>();
        }
        state->judgments[key_of(jd)] = std::move(jd);
      } else {
        throw ParseError(lineno, "unknown journal record kind \"" + kind + "\"");
      }
    }
  }
  state_ = std::move(state);
}

std::shared_ptr<const JournalState> Journal::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

void Journal::append_line(const std::string &line) {
  if (path_.empty()) return;
  std::ofstream out(path_, std::ios::app);
  out << line << '\n';
  out.flush();
  if (!out) throw Error("cannot append to journal " + path_);
}

UpsertOutcome Journal::record(Judgment judgment) {
  if (judgment.match_id.empty() || judgment.annotator.empty()) {
    throw Error("judgment needs a match id and an annotator");
  }
  if (!verdict_belongs_to(judgment.verdict, judgment.round)) {
    throw Error("verdict " + std::string(to_string(judgment.verdict)) +
                " is not valid in round " + std::string(to_string(judgment.round)));
  }
  if (judgment.timestamp.empty()) judgment.timestamp = utc_now();

  std::lock_guard lock(mu_);
  const auto key = key_of(judgment);
  auto it = state_->judgments.find(key);
  UpsertOutcome outcome = UpsertOutcome::created;
  if (it != state_->judgments.end()) {
    if (it->second.verdict == judgment.verdict &&
        it->second.violence_type == judgment.violence_type) {
      return UpsertOutcome::unchanged;
    }
    outcome = UpsertOutcome::replaced;
  }
  append_line(judgment_json(judgment));
  auto next = std::make_shared<JournalState>(*state_);
  next->judgments[key] = std::move(judgment);
  state_ = std::move(next);
  return outcome;
}

void Journal::record_batches(Round round, const std::vector<Batch> &batches) {
  std::lock_guard lock(mu_);
  if (state_->batches.count(round)) {
    throw Error("round " + std::string(to_string(round)) + " is already assigned");
  }
  std::string lines;
  for (const auto &b : batches) {
    if (b.round != round) throw Error("batch round does not match");
    lines += batch_json(b);
    lines += '\n';
  }
  if (!lines.empty()) {
    lines.pop_back();
    append_line(lines);
  }
  auto next = std::make_shared<JournalState>(*state_);
  next->batches[round] = batches;
  state_ = std::move(next);
}

}  // namespace framewatch
