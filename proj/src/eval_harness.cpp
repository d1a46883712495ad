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

#include "framewatch/eval_harness.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "framewatch/random.hpp"
#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;

namespace {

constexpr std::array<std::string_view, 6> kVerdictNames = {
    "exact", "non_match", "gbv_other_pattern", "partial", "speculation", "not_gbv"};

std::string join_ids(const std::vector<std::string> &ids, std::size_t limit = 20) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < limit; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > limit) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

void check_annotators(const std::vector<std::string> &annotators) {
  std::set<std::string> seen;
  for (const auto &a : annotators) {
    if (a.empty()) throw Error("annotator names must be non-empty");
    if (!seen.insert(a).second) throw Error("annotator listed twice: " + a);
  }
}

// Edmonds-Karp on a small dense graph.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t n) : cap_(n, std::vector<std::uint64_t>(n, 0)) {}
  void add(std::size_t u, std::size_t v, std::uint64_t c) { cap_[u][v] += c; }
  std::uint64_t residual(std::size_t u, std::size_t v) const { return cap_[u][v]; }

  std::uint64_t max_flow(std::size_t s, std::size_t t) {
    const std::size_t n = cap_.size();
    std::uint64_t total = 0;
    for (;;) {
      std::vector<std::size_t> parent(n, n);
      parent[s] = s;
      std::deque<std::size_t> queue{s};
      while (!queue.empty() && parent[t] == n) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t v = 0; v < n; ++v) {
          if (parent[v] == n && cap_[u][v] > 0) {
            parent[v] = u;
            queue.push_back(v);
          }
        }
      }
      if (parent[t] == n) return total;
      std::uint64_t push = std::numeric_limits<std::uint64_t>::max();
      for (std::size_t v = t; v != s; v = parent[v]) push = std::min(push, cap_[parent[v]][v]);
      for (std::size_t v = t; v != s; v = parent[v]) {
        cap_[parent[v]][v] -= push;
        cap_[v][parent[v]] += push;
      }
      total += push;
    }
  }

 private:
  std::vector<std::vector<std::uint64_t>> cap_;
};

PrecisionTable compute_precision(const std::vector<MatchRecord> &evaluated,
                                 const std::vector<Judgment> &judgments, Round round,
                                 const PrecisionOptions &options) {
  std::map<std::string, const Judgment *> r1, r2;
  std::set<JudgmentKey> keys;
  for (const auto &j : judgments) {
    if (!keys.insert(key_of(j)).second) {
      throw Error("more than one judgment by " + j.annotator + " for " + j.match_id +
                  " in round " + std::string(to_string(j.round)));
    }
    auto &slot = (j.round == Round::r1 ? r1 : r2)[j.match_id];
    // Several annotators on one match is not part of the protocol; pick
    // one deterministically so judgment order never matters.
    if (!slot || j.annotator < slot->annotator) slot = &j;
  }

  struct Counts {
    std::string name;
    std::uint64_t correct = 0, error = 0;
  };
  std::map<std::string, Counts> by_pattern;
  std::set<std::string> seen;
  PrecisionTable table;
  for (const auto &m : evaluated) {
    if (!seen.insert(m.match_id).second) continue;
    Counts &c = by_pattern[m.pattern_id];
    c.name = m.pattern_name.empty() ? m.pattern_id : m.pattern_name;
    auto v1 = r1.find(m.match_id);
    if (v1 == r1.end()) {
      table.unjudged.push_back(m.match_id);
      continue;
    }
    if (v1->second->verdict == Verdict::exact) {
      ++c.correct;
      continue;
    }
    if (round == Round::r1) {
      ++c.error;
      continue;
    }
    auto v2 = r2.find(m.match_id);
    if (v2 == r2.end()) {
      table.unjudged.push_back(m.match_id);
      continue;
    }
    ++(options.r2_correct.count(v2->second->verdict) ? c.correct : c.error);
  }

  std::uint64_t correct = 0, error = 0;
  for (auto &[id, c] : by_pattern) {
    if (c.correct + c.error == 0) continue;
    table.rows.push_back(precision_row(c.name, c.correct, c.error));
    correct += c.correct;
    error += c.error;
  }
  if (correct + error > 0) table.overall = precision_row("Overall", correct, error);
  std::sort(table.unjudged.begin(), table.unjudged.end());
  table.incomplete = !table.unjudged.empty() || evaluated.empty();
  return table;
}

enum class Align { left, right };

std::string layout(const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &body,
                   const std::vector<std::string> &footer,
                   const std::vector<Align> &align) {
  std::vector<std::size_t> width(header.size(), 0);
  auto measure = [&](const std::vector<std::string> &row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], utf8_decode(row[i]).size());
    }
  };
  measure(header);
  for (const auto &r : body) measure(r);
  measure(footer);

  auto line = [&](const std::vector<std::string> &row) {
    std::string out;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += " | ";
      std::string pad(width[i] - utf8_decode(row[i]).size(), ' ');
      out += align[i] == Align::left ? row[i] + pad : pad + row[i];
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out + "\n";
  };
  std::string rule;
  for (std::size_t i = 0; i < width.size(); ++i) {
    if (i) rule += "-+-";
    rule += std::string(width[i], '-');
  }
  rule += "\n";

  std::string out = line(header) + rule;
  for (const auto &r : body) out += line(r);
  out += rule + line(footer);
  return out;
}

}  // namespace

std::vector<MatchRecord> read_match_records(std::istream &in) {
  std::vector<MatchRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    auto str = [&](const char *key, bool required) -> std::string {
      auto it = j.find(key);
      if (it == j.end() || !it->is_string()) {
        if (required) throw ParseError(lineno, std::string("missing string field \"") + key + "\"");
        return {};
      }
      return it->get<std::string>();
    };
    if (!j.is_object()) throw ParseError(lineno, "match record must be an object");
    MatchRecord m;
    m.match_id = str("match_id", true);
    m.pattern_id = str("pattern_id", true);
    m.pattern_name = str("pattern_name", false);
    m.description = str("description", false);
    m.doc_id = str("doc_id", true);
    m.sent_id = str("sent_id", true);
    m.text = str("text", true);
    m.raw = line;
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MatchRecord> read_match_records(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open match file " + path);
  return read_match_records(in);
}

std::string_view to_string(Round r) { return r == Round::r1 ? "r1" : "r2"; }

std::optional<Round> parse_round(std::string_view s) {
  if (s == "r1" || s == "1") return Round::r1;
  if (s == "r2" || s == "2") return Round::r2;
  return std::nullopt;
}

std::string_view to_string(Verdict v) { return kVerdictNames[static_cast<int>(v)]; }

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (std::size_t i = 0; i < kVerdictNames.size(); ++i) {
    if (kVerdictNames[i] == s) return static_cast<Verdict>(i);
  }
  return std::nullopt;
}

bool verdict_belongs_to(Verdict v, Round r) {
  const bool first = v == Verdict::exact || v == Verdict::non_match;
  return first == (r == Round::r1);
}

JudgmentKey key_of(const Judgment &j) { return {j.match_id, j.annotator, j.round}; }

std::vector<MatchRecord> dedupe(const std::vector<MatchRecord> &matches, bool per_pattern) {
  std::map<std::string, std::size_t> keeper;
  auto rank = [&](std::size_t i) {
    return std::tie(matches[i].doc_id, matches[i].sent_id, matches[i].match_id);
  };
  for (std::size_t i = 0; i < matches.size(); ++i) {
    std::string key = normalize_whitespace(matches[i].text);
    if (per_pattern) key = matches[i].pattern_id + '\x1f' + key;
    auto [it, inserted] = keeper.try_emplace(std::move(key), i);
    if (!inserted && rank(i) < rank(it->second)) it->second = i;
  }
  std::vector<bool> keep(matches.size(), false);
  for (const auto &[key, i] : keeper) keep[i] = true;
  std::vector<MatchRecord> out;
  for (std::size_t i = 0; i < matches.size(); ++i) {
    if (keep[i]) out.push_back(matches[i]);
  }
  return out;
}

std::vector<Batch> assign_round1(const std::vector<std::string> &match_ids,
                                 const std::vector<std::string> &annotators,
                                 std::uint64_t seed) {
  if (match_ids.empty()) throw Error("no matches to assign");
  if (annotators.empty()) throw Error("round 1 needs at least one annotator");
  check_annotators(annotators);
  std::set<std::string> unique(match_ids.begin(), match_ids.end());
  if (unique.size() != match_ids.size()) throw Error("match ids must be unique");

  std::vector<std::string> ids = match_ids;
  std::mt19937_64 rng(seed);
  seeded_shuffle(ids, rng);
  const std::size_t n = annotators.size();
  std::vector<Batch> batches;
  std::size_t next = 0;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t size = ids.size() / n + (a < ids.size() % n ? 1 : 0);
    Batch b{annotators[a], Round::r1, {}};
    b.match_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(next),
                       ids.begin() + static_cast<std::ptrdiff_t>(next + size));
    next += size;
    batches.push_back(std::move(b));
  }
  return batches;
}

std::vector<Batch> assign_round2(const std::vector<Batch> &round1,
                                 const R1Verdicts &verdicts,
                                 const std::vector<std::string> &annotators,
                                 std::uint64_t seed) {
  if (annotators.size() < 2) {
    throw Error("round 2 needs at least two annotators so that no match returns to "
                "the annotator who judged it in round 1");
  }
  check_annotators(annotators);

  // Non-matches grouped by their round-1 annotator.
  std::map<std::string, std::vector<std::string>> groups;
  std::set<std::string> seen;
  std::vector<std::string> missing;
  std::uint64_t total = 0;
  for (const auto &b : round1) {
    for (const auto &id : b.match_ids) {
      if (!seen.insert(id).second) throw Error("match " + id + " appears in two round-1 batches");
      auto v = verdicts.find(id);
      if (v == verdicts.end()) {
        missing.push_back(id);
      } else if (v->second == Verdict::non_match) {
        groups[b.annotator].push_back(id);
        ++total;
      }
    }
  }
  if (!missing.empty()) {
    throw Error("round 1 is incomplete; no verdict for " + join_ids(missing));
  }

  const std::size_t n = annotators.size();
  std::vector<Batch> batches;
  for (const auto &a : annotators) batches.push_back({a, Round::r2, {}});
  if (total == 0) return batches;

  // Annotator a cannot take its own group, so it holds at most
  // total - |group a|. Targets fill up evenly to those caps; with two or
  // more annotators the caps sum to at least total, and any such targets
  // admit a valid assignment.
  std::vector<std::uint64_t> cap(n), target(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    auto g = groups.find(annotators[a]);
    cap[a] = total - (g == groups.end() ? 0 : g->second.size());
  }
  auto filled = [&](std::uint64_t level) {
    std::uint64_t sum = 0;
    for (auto c : cap) sum += std::min(c, level);
    return sum;
  };
  std::uint64_t lo = 0, hi = total;
  while (lo < hi) {
    std::uint64_t mid = (lo + hi + 1) / 2;
    if (filled(mid) <= total) lo = mid; else hi = mid - 1;
  }
  std::uint64_t remaining = total - filled(lo);
  for (std::size_t a = 0; a < n; ++a) {
    target[a] = std::min(cap[a], lo);
    if (remaining > 0 && cap[a] > lo) {
      ++target[a];
      --remaining;
    }
  }

  // Nodes: source, groups, annotators, sink.
  std::vector<std::string> owners;
  for (const auto &[owner, ids] : groups) owners.push_back(owner);
  const std::size_t source = 0, first_group = 1, first_annotator = 1 + owners.size(),
                    sink = first_annotator + n;
  FlowNetwork net(sink + 1);
  for (std::size_t g = 0; g < owners.size(); ++g) {
    net.add(source, first_group + g, groups[owners[g]].size());
    for (std::size_t a = 0; a < n; ++a) {
      if (annotators[a] != owners[g]) net.add(first_group + g, first_annotator + a, total);
    }
  }
  for (std::size_t a = 0; a < n; ++a) net.add(first_annotator + a, sink, target[a]);
  if (net.max_flow(source, sink) != total) {
    throw Error("internal error: round-2 targets admit no valid assignment");
  }

  std::mt19937_64 rng(seed);
  for (std::size_t g = 0; g < owners.size(); ++g) {
    auto ids = groups[owners[g]];
    seeded_shuffle(ids, rng);
    std::size_t next = 0;
    for (std::size_t a = 0; a < n; ++a) {
      if (annotators[a] == owners[g]) continue;
      // Flow on an edge shows up as residual capacity on its reverse.
      const std::uint64_t flow = net.residual(first_annotator + a, first_group + g);
      for (std::uint64_t k = 0; k < flow; ++k) batches[a].match_ids.push_back(ids[next++]);
    }
  }
  for (auto &b : batches) seeded_shuffle(b.match_ids, rng);
  return batches;
}

std::uint64_t permille_half_up(std::uint64_t part, std::uint64_t whole) {
  if (whole == 0) throw Error("ratio with a zero denominator");
  return (2000 * part + whole) / (2 * whole);
}

std::string format_precision(std::uint64_t permille) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%llu.%03llu",
                static_cast<unsigned long long>(permille / 1000),
                static_cast<unsigned long long>(permille % 1000));
  return buf;
}

std::string format_percentage(std::uint64_t permille) {
  char buf[32];
  if (permille % 10 == 0) {
    std::snprintf(buf, sizeof buf, "%llu%%", static_cast<unsigned long long>(permille / 10));
  } else {
    std::snprintf(buf, sizeof buf, "%llu.%llu%%", static_cast<unsigned long long>(permille / 10),
                  static_cast<unsigned long long>(permille % 10));
  }
  return buf;
}

PrecisionRow precision_row(std::string pattern, std::uint64_t correct, std::uint64_t error) {
  if (correct + error == 0) throw Error("no judged matches for " + pattern);
  return {std::move(pattern), correct, error, permille_half_up(correct, correct + error)};
}

PrecisionTable precision_from_counts(
    const std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>> &counts) {
  PrecisionTable table;
  std::uint64_t correct = 0, error = 0;
  for (const auto &[name, c, e] : counts) {
    table.rows.push_back(precision_row(name, c, e));
    correct += c;
    error += e;
  }
  if (!counts.empty()) table.overall = precision_row("Overall", correct, error);
  return table;
}

PrecisionTable precision_table(const std::vector<MatchRecord> &evaluated,
                               const std::vector<Judgment> &judgments, Round round,
                               const PrecisionOptions &options) {
  if (evaluated.empty()) throw Error("no matches to evaluate");
  PrecisionTable table = compute_precision(evaluated, judgments, round, options);
  if (!table.unjudged.empty()) {
    throw Error("unjudged matches in round " + std::string(to_string(round)) + ": " +
                join_ids(table.unjudged));
  }
  return table;
}

PrecisionTable precision_snapshot(const std::vector<MatchRecord> &evaluated,
                                  const std::vector<Judgment> &judgments, Round round,
                                  const PrecisionOptions &options) {
  return compute_precision(evaluated, judgments, round, options);
}

ErrorDistribution error_distribution_from_counts(
    const std::vector<std::pair<std::string, std::uint64_t>> &counts, std::size_t keep_top) {
  std::map<std::string, std::uint64_t> merged;
  for (const auto &[type, n] : counts) merged[type] += n;
  std::uint64_t other = 0;
  if (auto it = merged.find("Other"); it != merged.end()) {
    other = it->second;
    merged.erase(it);
  }
  std::vector<std::pair<std::string, std::uint64_t>> sorted(merged.begin(), merged.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });

  ErrorDistribution dist;
  for (const auto &[type, n] : sorted) dist.total += n;
  dist.total += other;
  if (dist.total == 0) return dist;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i < keep_top) {
      dist.rows.push_back({sorted[i].first, sorted[i].second,
                           permille_half_up(sorted[i].second, dist.total)});
    } else {
      other += sorted[i].second;
    }
  }
  if (other > 0) dist.rows.push_back({"Other", other, permille_half_up(other, dist.total)});
  return dist;
}

ErrorDistribution error_distribution(const std::vector<Judgment> &r2_judgments,
                                     std::size_t keep_top) {
  std::vector<std::pair<std::string, std::uint64_t>> counts;
  for (const auto &j : r2_judgments) {
    if (j.round == Round::r2 && j.violence_type && !j.violence_type->empty()) {
      counts.emplace_back(*j.violence_type, 1);
    }
  }
  return error_distribution_from_counts(counts, keep_top);
}

std::string precision_tsv(const PrecisionTable &table) {
  std::ostringstream out;
  out << "pattern\tcorrect\terror\tprecision\n";
  for (const auto &r : table.rows) {
    out << r.pattern << '\t' << r.correct << '\t' << r.error << '\t' << r.precision() << '\n';
  }
  if (table.overall) {
    const auto &r = *table.overall;
    out << r.pattern << '\t' << r.correct << '\t' << r.error << '\t' << r.precision() << '\n';
  }
  return out.str();
}

std::string error_tsv(const ErrorDistribution &dist) {
  std::ostringstream out;
  out << "type\tcount\tpercentage\n";
  for (const auto &r : dist.rows) out << r.type << '\t' << r.count << '\t' << r.percentage() << '\n';
  out << "TOTAL\t" << dist.total << '\t' << (dist.total ? "100%" : "0%") << '\n';
  return out.str();
}

std::string precision_text(const PrecisionTable &table) {
  std::vector<std::vector<std::string>> body;
  for (const auto &r : table.rows) {
    body.push_back({r.pattern, std::to_string(r.correct), std::to_string(r.error), r.precision()});
  }
  std::vector<std::string> footer = {"Overall", "0", "0", "-"};
  if (table.overall) {
    footer = {"Overall", std::to_string(table.overall->correct),
              std::to_string(table.overall->error), table.overall->precision()};
  }
  return layout({"Pattern", "Correct", "Error", "Precision"}, body, footer,
                {Align::left, Align::right, Align::right, Align::right});
}

std::string error_text(const ErrorDistribution &dist) {
  std::vector<std::vector<std::string>> body;
  for (const auto &r : dist.rows) body.push_back({r.type, std::to_string(r.count), r.percentage()});
  return layout({"Violence type", "Count", "Percentage"}, body,
                {"TOTAL", std::to_string(dist.total), dist.total ? "100%" : "0%"},
                {Align::left, Align::right, Align::right});
}

}  // namespace framewatch
