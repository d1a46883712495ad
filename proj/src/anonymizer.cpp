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

#include "framewatch/anonymizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <tuple>

namespace framewatch {

namespace {

constexpr std::array<std::string_view, 7> kCategoryNames = {
    "person_name", "location", "org", "id_number", "phone", "date", "other"};

std::vector<CharSpan> occurrences(std::string_view text, std::string_view token) {
  std::vector<CharSpan> out;
  if (token.empty()) return out;
  for (std::size_t pos = text.find(token); pos != std::string_view::npos;
       pos = text.find(token, pos + token.size())) {
    out.push_back({pos, pos + token.size()});
  }
  return out;
}

struct Cluster {
  CharSpan span;
  std::set<std::string> detectors;
  std::set<PiiCategory> categories;
};

}  // namespace

std::string_view to_string(PiiCategory c) {
  return kCategoryNames[static_cast<int>(c)];
}

std::optional<PiiCategory> parse_pii_category(std::string_view s) {
  for (std::size_t i = 0; i < kCategoryNames.size(); ++i) {
    if (kCategoryNames[i] == s) return static_cast<PiiCategory>(i);
  }
  return std::nullopt;
}

std::string_view to_string(AuditAction a) {
  return a == AuditAction::redacted ? "redacted" : "flagged_only";
}

// ------------------------------------------------------------------ regex

RegexDetector::RegexDetector(std::string id, std::vector<Rule> rules)
    : id_(std::move(id)) {
  for (auto &r : rules) {
    try {
      rules_.emplace_back(r.category, std::regex(r.pattern, std::regex::ECMAScript));
    } catch (const std::regex_error &e) {
      throw Error("invalid regex \"" + r.pattern + "\": " + e.what());
    }
  }
}

std::vector<RegexDetector::Rule> RegexDetector::default_rules() {
  return {
      // CPF: 123.456.789-00
      {PiiCategory::id_number, R"(\b\d{3}\.\d{3}\.\d{3}-\d{2}\b)"},
      // (81) 99999-1234, 3456-7890
      {PiiCategory::phone, R"((?:\(\d{2}\)\s?)?\b9?\d{4}-\d{4}\b)"},
      // 12/03/2019, 1/3/19
      {PiiCategory::date, R"(\b\d{1,2}/\d{1,2}/(?:\d{4}|\d{2})\b)"},
  };
}

std::vector<RegexDetector::Rule> RegexDetector::read_rules(const std::string &path) {
  std::vector<Rule> rules;
  for (const auto &line : read_lines_file(path)) {
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error("regex rule needs \"category<TAB>pattern\": " + line);
    }
    auto cat = parse_pii_category(trim(std::string_view(line).substr(0, tab)));
    if (!cat) throw Error("unknown PII category in rule: " + line);
    rules.push_back({*cat, line.substr(tab + 1)});
  }
  return rules;
}

std::vector<PiiDetection> RegexDetector::detect(std::string_view text) const {
  std::vector<PiiDetection> out;
  for (const auto &[category, re] : rules_) {
    for (std::cregex_iterator it(text.data(), text.data() + text.size(), re), end;
         it != end; ++it) {
      const auto &m = *it;
      if (m.length(0) == 0) continue;
      auto begin = static_cast<std::size_t>(m.position(0));
      out.push_back({id_, {begin, begin + static_cast<std::size_t>(m.length(0))},
                     category});
    }
  }
  return out;
}

// -------------------------------------------------------------- gazetteer

GazetteerDetector::GazetteerDetector(std::string id,
                                     std::vector<std::string> entries,
                                     PiiCategory category,
                                     double max_relative_distance)
    : id_(std::move(id)),
      category_(category),
      max_relative_distance_(max_relative_distance) {
  for (const auto &e : entries) {
    auto words = word_tokens(e);
    if (words.empty()) continue;
    std::string joined;
    for (const auto &w : words) {
      if (!joined.empty()) joined += ' ';
      joined += w.text;
    }
    entries_.push_back({utf8_decode(case_fold(joined)), words.size()});
    max_words_ = std::max(max_words_, words.size());
  }
}

std::vector<PiiDetection> GazetteerDetector::detect(std::string_view text) const {
  std::vector<PiiDetection> out;
  auto words = word_tokens(text);
  std::set<CharSpan> seen;
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string window;
    for (std::size_t w = 1; w <= max_words_ && i + w <= words.size(); ++w) {
      if (w > 1) window += ' ';
      window += words[i + w - 1].text;
      const std::u32string candidate = utf8_decode(case_fold(window));
      for (const auto &entry : entries_) {
        if (entry.words != w) continue;
        const auto limit = static_cast<std::size_t>(
            std::floor(max_relative_distance_ * static_cast<double>(entry.folded.size())));
        const std::size_t diff = candidate.size() > entry.folded.size()
                                     ? candidate.size() - entry.folded.size()
                                     : entry.folded.size() - candidate.size();
        if (diff > limit) continue;
        if (edit_distance(candidate, entry.folded) <= limit) {
          CharSpan span{words[i].span.begin, words[i + w - 1].span.end};
          if (seen.insert(span).second) out.push_back({id_, span, category_});
          break;
        }
      }
    }
  }
  return out;
}

// --------------------------------------------------------------- ensemble

std::vector<PiiDetection> run_detectors(
    std::string_view text, const std::vector<const Detector *> &detectors,
    std::vector<DetectorFailure> *failures) {
  std::vector<PiiDetection> out;
  if (text.empty()) return out;
  for (const Detector *d : detectors) {
    try {
      for (auto det : d->detect(text)) {
        det.detector_id = d->id();
        out.push_back(std::move(det));
      }
    } catch (const std::exception &e) {
      if (failures) failures->push_back({d->id(), e.what()});
    }
  }
  return out;
}

void check_policy(const RedactionPolicy &policy) {
  if (policy.min_agreeing_detectors < 1) {
    throw Error("min_agreeing_detectors must be at least 1");
  }
}

std::size_t RedactionAudit::redacted_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const AuditEntry &e) {
        return e.action == AuditAction::redacted;
      }));
}

RedactionResult vote_and_redact(std::string_view text,
                                const std::vector<PiiDetection> &detections,
                                const RedactionPolicy &policy) {
  check_policy(policy);
  for (const auto &d : detections) {
    if (d.span.empty() || d.span.end > text.size()) {
      throw Error("detection [" + std::to_string(d.span.begin) + ", " +
                  std::to_string(d.span.end) + ") from " + d.detector_id +
                  " is empty or outside the text");
    }
  }

  const auto stops = occurrences(text, policy.replacement_token);
  std::vector<PiiDetection> live;
  for (const auto &d : detections) {
    bool inside_stop = std::any_of(stops.begin(), stops.end(), [&](const CharSpan &s) {
      return s.begin <= d.span.begin && d.span.end <= s.end;
    });
    if (!inside_stop) live.push_back(d);
  }
  std::sort(live.begin(), live.end(), [](const PiiDetection &a, const PiiDetection &b) {
    return std::tie(a.span, a.detector_id) < std::tie(b.span, b.detector_id);
  });

  std::vector<Cluster> clusters;
  if (policy.merge_overlaps) {
    for (const auto &d : live) {
      if (clusters.empty() || d.span.begin >= clusters.back().span.end) {
        clusters.push_back({d.span, {}, {}});
      }
      Cluster &c = clusters.back();
      c.span.end = std::max(c.span.end, d.span.end);
      c.detectors.insert(d.detector_id);
      c.categories.insert(d.category);
    }
  } else {
    std::map<CharSpan, Cluster> by_span;
    for (const auto &d : live) {
      Cluster &c = by_span.try_emplace(d.span, Cluster{d.span, {}, {}}).first->second;
      c.detectors.insert(d.detector_id);
      c.categories.insert(d.category);
    }
    for (auto &[span, c] : by_span) clusters.push_back(std::move(c));
  }

  RedactionResult result;
  std::vector<CharSpan> to_redact;
  for (const auto &c : clusters) {
    AuditEntry e;
    e.span = c.span;
    e.detector_ids.assign(c.detectors.begin(), c.detectors.end());
    e.categories.assign(c.categories.begin(), c.categories.end());
    e.action = static_cast<int>(c.detectors.size()) >= policy.min_agreeing_detectors
                   ? AuditAction::redacted
                   : AuditAction::flagged_only;
    if (e.action == AuditAction::redacted) to_redact.push_back(c.span);
    result.audit.entries.push_back(std::move(e));
  }

  // Redacted spans can only overlap when identical-span clustering is used.
  std::sort(to_redact.begin(), to_redact.end());
  std::vector<CharSpan> merged;
  for (const auto &s : to_redact) {
    if (!merged.empty() && s.begin < merged.back().end) {
      merged.back().end = std::max(merged.back().end, s.end);
    } else {
      merged.push_back(s);
    }
  }
  result.text = std::string(text);
  for (auto it = merged.rbegin(); it != merged.rend(); ++it) {
    result.text.replace(it->begin, it->size(), policy.replacement_token);
  }
  return result;
}

// ------------------------------------------------------------ name lists

NameFlagger::NameFlagger(const std::vector<std::string> &common_words,
                         const std::vector<std::string> &known_names) {
  for (const auto &w : common_words) common_.insert(case_fold(w));
  for (const auto &n : known_names) names_.insert(case_fold(n));
}

std::vector<CharSpan> NameFlagger::flag(std::string_view text) const {
  std::vector<CharSpan> out;
  for (const auto &w : word_tokens(text)) {
    const std::u32string cps = utf8_decode(w.text);
    if (cps.empty() || !is_upper(cps.front())) continue;
    const std::string folded = case_fold(w.text);
    // Known names and words in neither list are both flagged; a common word
    // is never flagged, even when it also appears in the name list.
    if (!common_.count(folded)) out.push_back(w.span);
  }
  return out;
}

std::vector<CharSpan> flag_candidate_names(
    std::string_view text, const std::vector<std::string> &common_words,
    const std::vector<std::string> &known_names) {
  return NameFlagger(common_words, known_names).flag(text);
}

}  // namespace framewatch
