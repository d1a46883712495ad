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

// PII removal: a detector ensemble whose outputs are clustered by overlap
// and redacted only where enough distinct detectors agree, plus a
// frequency-list name flagger that feeds manual review.
//
// All spans are byte offsets into UTF-8 text.

#ifndef FRAMEWATCH_ANONYMIZER_HPP_
#define FRAMEWATCH_ANONYMIZER_HPP_

#include <memory>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "framewatch/text_util.hpp"

namespace framewatch {

enum class PiiCategory { person_name, location, org, id_number, phone, date, other };
std::string_view to_string(PiiCategory c);
std::optional<PiiCategory> parse_pii_category(std::string_view s);

struct PiiDetection {
  std::string detector_id;
  CharSpan span;
  PiiCategory category = PiiCategory::other;
  friend bool operator==(const PiiDetection &, const PiiDetection &) = default;
};

class Detector {
 public:
  virtual ~Detector() = default;
  virtual const std::string &id() const = 0;
  virtual std::vector<PiiDetection> detect(std::string_view text) const = 0;
};

// Regular-expression pack. The default pack covers CPF numbers, Brazilian
// phone numbers and full dates.
class RegexDetector : public Detector {
 public:
  struct Rule {
    PiiCategory category;
    std::string pattern;
  };

  explicit RegexDetector(std::string id = "regex",
                         std::vector<Rule> rules = default_rules());
  static std::vector<Rule> default_rules();
  // One "category<TAB>regex" rule per line.
  static std::vector<Rule> read_rules(const std::string &path);

  const std::string &id() const override { return id_; }
  std::vector<PiiDetection> detect(std::string_view text) const override;

 private:
  std::string id_;
  std::vector<std::pair<PiiCategory, std::regex>> rules_;
};

// Fuzzy search for known entries (venues, places, names). A window of words
// matches an entry when the case-folded edit distance is at most
// max_relative_distance * entry length (in code points).
class GazetteerDetector : public Detector {
 public:
  GazetteerDetector(std::string id, std::vector<std::string> entries,
                    PiiCategory category = PiiCategory::location,
                    double max_relative_distance = 0.2);

  const std::string &id() const override { return id_; }
  std::vector<PiiDetection> detect(std::string_view text) const override;

 private:
  struct Entry {
    std::u32string folded;
    std::size_t words;
  };
  std::string id_;
  std::vector<Entry> entries_;
  PiiCategory category_;
  double max_relative_distance_;
  std::size_t max_words_ = 0;
};

// Replays detections produced elsewhere (e.g. an external NER model).
class PrecomputedDetector : public Detector {
 public:
  PrecomputedDetector(std::string id, std::vector<PiiDetection> detections)
      : id_(std::move(id)), detections_(std::move(detections)) {}
  const std::string &id() const override { return id_; }
  std::vector<PiiDetection> detect(std::string_view) const override {
    return detections_;
  }

 private:
  std::string id_;
  std::vector<PiiDetection> detections_;
};

struct DetectorFailure {
  std::string detector_id;
  std::string message;
};

// Concatenates detector outputs in detector order, each tagged with its
// detector id. A throwing detector contributes nothing and is reported.
std::vector<PiiDetection> run_detectors(
    std::string_view text, const std::vector<const Detector *> &detectors,
    std::vector<DetectorFailure> *failures = nullptr);

struct RedactionPolicy {
  int min_agreeing_detectors = 2;
  // When false only identical spans count as agreement.
  bool merge_overlaps = true;
  std::string replacement_token = "[REDACTED]";
};

// Throws Error when min_agreeing_detectors < 1.
void check_policy(const RedactionPolicy &policy);

enum class AuditAction { redacted, flagged_only };
std::string_view to_string(AuditAction a);

struct AuditEntry {
  CharSpan span;
  std::vector<std::string> detector_ids;
  std::vector<PiiCategory> categories;
  AuditAction action = AuditAction::flagged_only;
};

struct RedactionAudit {
  std::vector<AuditEntry> entries;
  std::size_t redacted_count() const;
};

struct RedactionResult {
  std::string text;
  RedactionAudit audit;
};

// Clusters overlapping detections; a cluster with enough distinct detector
// ids is replaced by the replacement token over the union span, everything
// else is audited as flagged_only. Detections lying inside an existing
// replacement token are ignored. Throws Error on out-of-bounds spans.
RedactionResult vote_and_redact(std::string_view text,
                                const std::vector<PiiDetection> &detections,
                                const RedactionPolicy &policy = {});

// Capitalized words not in the common-word list and present in the name
// list, or absent from both lists, for manual review. Lists are compared
// case-folded.
class NameFlagger {
 public:
  NameFlagger(const std::vector<std::string> &common_words,
              const std::vector<std::string> &known_names);
  std::vector<CharSpan> flag(std::string_view text) const;

 private:
  std::unordered_set<std::string> common_;
  std::unordered_set<std::string> names_;
};

std::vector<CharSpan> flag_candidate_names(
    std::string_view text, const std::vector<std::string> &common_words,
    const std::vector<std::string> &known_names);

}  // namespace framewatch

#endif  // FRAMEWATCH_ANONYMIZER_HPP_
