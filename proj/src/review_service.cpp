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

#include "framewatch/review_service.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "httplib.h"
#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

Response error_response(int status, const std::string &message) {
  ordered_json j;
  j["error"] = message;
  return {status, j.dump(), "application/json"};
}

// TOML basic string starting at s[i] == '"'; advances i past the closing quote.
std::string toml_string(const std::string &s, std::size_t &i, std::size_t line) {
  std::string out;
  for (++i; i < s.size(); ++i) {
    char c = s[i];
    if (c == '"') {
      ++i;
      return out;
    }
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i == s.size()) break;
    switch (s[i]) {
      case '"': out += '"'; break;
      case '\\': out += '\\'; break;
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      default: throw ParseError(line, "unsupported escape in string");
    }
  }
  throw ParseError(line, "unterminated string");
}

bool bare_key_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

ordered_json precision_json(const PrecisionTable &t, Round round) {
  auto row = [](const PrecisionRow &r) {
    ordered_json j;
    j["pattern"] = r.pattern;
    j["correct"] = r.correct;
    j["error"] = r.error;
    j["precision"] = r.precision();
    return j;
  };
  ordered_json j;
  j["round"] = to_string(round);
  j["incomplete"] = t.incomplete;
  j["unjudged"] = t.unjudged.size();
  j["rows"] = ordered_json::array();
  for (const auto &r : t.rows) j["rows"].push_back(row(r));
  j["overall"] = t.overall ? row(*t.overall) : ordered_json(nullptr);
  j["tsv"] = precision_tsv(t);
  return j;
}

}  // namespace

std::map<std::string, std::string> parse_tokens_toml(std::istream &in) {
  std::map<std::string, std::string> tokens;
  std::set<std::string> seen_tokens;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line(trim(raw));
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      auto close = line.find(']');
      if (close == std::string::npos) throw ParseError(lineno, "unterminated table header");
      std::string name(trim(std::string_view(line).substr(1, close - 1)));
      if (name != "tokens") throw ParseError(lineno, "unexpected table [" + name + "]");
      continue;
    }
    std::size_t i = 0;
    std::string key;
    if (line[0] == '"') {
      key = toml_string(line, i, lineno);
    } else {
      while (i < line.size() && bare_key_char(line[i])) key += line[i++];
    }
    if (key.empty()) throw ParseError(lineno, "expected a key");
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size() || line[i] != '=') throw ParseError(lineno, "expected '=' after key");
    ++i;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size() || line[i] != '"') throw ParseError(lineno, "token must be a string");
    std::string value = toml_string(line, i, lineno);
    std::string rest(trim(std::string_view(line).substr(i)));
    if (!rest.empty() && rest[0] != '#') throw ParseError(lineno, "trailing characters");
    if (value.empty()) throw ParseError(lineno, "empty token for " + key);
    if (!tokens.emplace(key, value).second) throw ParseError(lineno, "duplicate annotator " + key);
    if (!seen_tokens.insert(value).second) throw ParseError(lineno, "token reused by " + key);
  }
  return tokens;
}

std::map<std::string, std::string> read_tokens_toml(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open token file " + path);
  return parse_tokens_toml(in);
}

std::string manifest_path(const std::string &corpus_path) {
  return corpus_path + ".manifest.json";
}

void require_anonymized(const std::string &corpus_path) {
  const std::string path = manifest_path(corpus_path);
  std::ifstream in(path);
  if (!in) throw Error("refusing to serve: no manifest at " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error &e) {
    throw Error("refusing to serve: unreadable manifest " + path + ": " + e.what());
  }
  auto it = j.is_object() ? j.find("anonymized") : j.end();
  if (it == j.end() || !it->is_boolean() || !it->get<bool>()) {
    throw Error("refusing to serve: " + path + " does not attest \"anonymized\": true");
  }
}

PrecisionTable live_precision(const JournalState &state, const std::vector<MatchRecord> &all,
                              Round round, const PrecisionOptions &options) {
  return precision_snapshot(evaluated_matches(state, all), state.judgment_list(), round,
                            options);
}

ErrorDistribution live_errors(const JournalState &state, const std::vector<MatchRecord> &all,
                              const std::string &pattern_id, std::size_t keep_top) {
  std::set<std::string> wanted;
  for (const auto &m : evaluated_matches(state, all)) {
    if (pattern_id.empty() || m.pattern_id == pattern_id) wanted.insert(m.match_id);
  }
  std::vector<Judgment> r2;
  for (const auto &j : state.judgments_in(Round::r2)) {
    if (wanted.count(j.match_id)) r2.push_back(j);
  }
  return error_distribution(r2, keep_top);
}

// ---------------------------------------------------------------- service

ReviewService::ReviewService(const Corpus &corpus, std::vector<MatchRecord> matches,
                             Journal &journal, std::map<std::string, std::string> tokens,
                             PrecisionOptions options)
    : corpus_(corpus), matches_(std::move(matches)), journal_(journal),
      token_of_annotator_(std::move(tokens)), options_(std::move(options)) {
  for (std::size_t i = 0; i < matches_.size(); ++i) {
    const auto &m = matches_[i];
    if (!by_id_.emplace(m.match_id, i).second) throw Error("duplicate match id " + m.match_id);
    auto s = corpus_.find(m.doc_id, m.sent_id);
    if (!s) {
      throw Error("match " + m.match_id + " refers to a sentence missing from the corpus");
    }
    sentence_of_.push_back(*s);
  }
  for (const auto &[annotator, token] : token_of_annotator_) {
    if (!annotator_of_token_.emplace(token, annotator).second) {
      throw Error("token shared by several annotators");
    }
  }
  // Render every fragment once so that bad records fail at startup.
  for (const auto &m : matches_) fragment_view(m.match_id);
}

const std::string *ReviewService::authenticate(const std::string &authorization) const {
  static const std::string kPrefix = "Bearer ";
  if (authorization.compare(0, kPrefix.size(), kPrefix) != 0) return nullptr;
  auto it = annotator_of_token_.find(std::string(trim(authorization.substr(kPrefix.size()))));
  return it == annotator_of_token_.end() ? nullptr : &it->second;
}

const MatchRecord *ReviewService::find_match(const std::string &id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &matches_[it->second];
}

std::string ReviewService::fragment_view(const std::string &match_id) const {
  auto idx = by_id_.find(match_id);
  if (idx == by_id_.end()) throw Error("unknown match " + match_id);
  const MatchRecord &m = matches_[idx->second];
  const Sentence &s = corpus_.sentence(sentence_of_[idx->second]);

  json rec = json::parse(m.raw);
  auto local_set = [&](const json &v) -> const AnnotationSet & {
    if (!v.is_number_unsigned() || v.get<std::size_t>() >= s.sets.size()) {
      throw Error("match " + match_id + " names an annotation set the sentence lacks");
    }
    return corpus_.set(s.sets[v.get<std::size_t>()]);
  };
  if (!rec.contains("anchor") || !rec["anchor"].is_object()) {
    throw Error("match " + match_id + " has no anchor");
  }

  struct Highlight {
    CharSpan span;
    int layer;
    std::string label;
  };
  static const char *kLayers[] = {"target", "fe", "filler"};
  std::vector<Highlight> hs;
  const AnnotationSet &anchor = local_set(rec["anchor"]["set"]);
  hs.push_back({s.char_span(anchor.target), 0, anchor.frame_name});
  for (const auto &fe : anchor.fes) hs.push_back({s.char_span(fe.span), 1, fe.role});
  if (rec.contains("bindings") && rec["bindings"].is_array()) {
    for (const auto &b : rec["bindings"]) {
      const AnnotationSet &filler = local_set(b["filler_set"]);
      hs.push_back({s.char_span(filler.target), 2, filler.frame_name});
    }
  }
  std::sort(hs.begin(), hs.end(), [](const Highlight &a, const Highlight &b) {
    if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
    if (a.span.end != b.span.end) return a.span.end > b.span.end;
    if (a.layer != b.layer) return a.layer < b.layer;
    return a.label < b.label;
  });
  hs.erase(std::unique(hs.begin(), hs.end(),
                       [](const Highlight &a, const Highlight &b) {
                         return a.span == b.span && a.layer == b.layer && a.label == b.label;
                       }),
           hs.end());

  ordered_json v;
  v["match_id"] = m.match_id;
  v["pattern_id"] = m.pattern_id;
  v["pattern_name"] = m.pattern_name;
  v["description"] = m.description;
  v["text"] = s.text();
  v["highlights"] = ordered_json::array();
  for (const auto &h : hs) {
    ordered_json j;
    j["begin"] = h.span.begin;
    j["end"] = h.span.end;
    j["layer"] = kLayers[h.layer];
    j["label"] = h.label;
    v["highlights"].push_back(std::move(j));
  }
  return v.dump();
}

Response ReviewService::get_batch(const std::string &authorization, const std::string &annotator,
                                  const std::string &round_text) const {
  const std::string *caller = authenticate(authorization);
  if (!caller) return error_response(401, "missing or invalid token");
  if (!token_of_annotator_.count(annotator)) {
    return error_response(404, "unknown annotator " + annotator);
  }
  if (*caller != annotator) return error_response(403, "token does not belong to " + annotator);
  auto round = parse_round(round_text.empty() ? "r1" : round_text);
  if (!round) return error_response(400, "round must be r1 or r2");

  auto state = journal_.snapshot();
  const auto *batches = state->batches_for(*round);
  if (!batches) {
    return error_response(409, "round " + std::string(to_string(*round)) + " is not assigned");
  }
  ordered_json out;
  out["annotator"] = annotator;
  out["round"] = to_string(*round);
  out["pending"] = ordered_json::array();
  std::size_t total = 0;
  for (const auto &b : *batches) {
    if (b.annotator != annotator) continue;
    total += b.match_ids.size();
    for (const auto &id : b.match_ids) {
      if (state->judgments.count({id, annotator, *round})) continue;
      out["pending"].push_back(ordered_json::parse(fragment_view(id)));
    }
  }
  out["total"] = total;
  return {200, out.dump(), "application/json"};
}

Response ReviewService::post_judgment(const std::string &authorization, const std::string &body) {
  const std::string *caller = authenticate(authorization);
  if (!caller) return error_response(401, "missing or invalid token");

  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error &) {
    return error_response(400, "body is not valid JSON");
  }
  if (!j.is_object()) return error_response(400, "body must be a JSON object");
  auto str = [&](const char *key) -> std::optional<std::string> {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return std::nullopt;
    return it->get<std::string>();
  };
  auto match_id = str("match_id");
  auto round_text = str("round");
  auto verdict_text = str("verdict");
  if (!match_id || !round_text || !verdict_text) {
    return error_response(400, "match_id, round and verdict are required strings");
  }
  auto round = parse_round(*round_text);
  if (!round) return error_response(400, "round must be r1 or r2");
  auto verdict = parse_verdict(*verdict_text);
  if (!verdict || !verdict_belongs_to(*verdict, *round)) {
    return error_response(400, "verdict " + *verdict_text + " is not valid in round " +
                                   std::string(to_string(*round)));
  }
  if (auto who = str("annotator"); who && *who != *caller) {
    return error_response(403, "token does not belong to " + *who);
  }
  if (j.contains("violence_type") && !j["violence_type"].is_string() &&
      !j["violence_type"].is_null()) {
    return error_response(400, "violence_type must be a string");
  }
  if (!find_match(*match_id)) return error_response(404, "unknown match " + *match_id);

  auto state = journal_.snapshot();
  if (*round == Round::r2) {
    auto r1 = state->r1_verdicts();
    auto it = r1.find(*match_id);
    if (it != r1.end() && it->second == Verdict::exact) {
      return error_response(422, "match " + *match_id +
                                     " was an exact match in round 1 and is not revisited");
    }
  }
  bool assigned = false;
  if (const auto *batches = state->batches_for(*round)) {
    for (const auto &b : *batches) {
      if (b.annotator == *caller &&
          std::find(b.match_ids.begin(), b.match_ids.end(), *match_id) != b.match_ids.end()) {
        assigned = true;
      }
    }
  }
  if (!assigned) {
    return error_response(403, "match " + *match_id + " is not in the batch of " + *caller);
  }

  Judgment jd;
  jd.match_id = *match_id;
  jd.annotator = *caller;
  jd.round = *round;
  jd.verdict = *verdict;
  if (auto vt = str("violence_type"); vt && !vt->empty()) jd.violence_type = *vt;
  if (auto ts = str("timestamp")) jd.timestamp = *ts;
  UpsertOutcome outcome = journal_.record(jd);

  auto after = journal_.snapshot();
  const Judgment &stored = after->judgments.at(key_of(jd));
  ordered_json out = ordered_json::parse(judgment_json(stored));
  out.erase("kind");
  out["outcome"] = outcome == UpsertOutcome::created     ? "created"
                   : outcome == UpsertOutcome::replaced ? "replaced"
                                                         : "unchanged";
  return {outcome == UpsertOutcome::created ? 201 : 200, out.dump(), "application/json"};
}

Response ReviewService::get_precision(const std::string &authorization,
                                      const std::string &round_text,
                                      const std::string &format) const {
  if (!authenticate(authorization)) return error_response(401, "missing or invalid token");
  auto round = parse_round(round_text.empty() ? "r1" : round_text);
  if (!round) return error_response(400, "round must be r1 or r2");
  auto state = journal_.snapshot();
  PrecisionTable table = live_precision(*state, matches_, *round, options_);
  if (format == "tsv") return {200, precision_tsv(table), "text/tab-separated-values"};
  if (!format.empty() && format != "json") return error_response(400, "format must be json or tsv");
  return {200, precision_json(table, *round).dump(), "application/json"};
}

Response ReviewService::get_errors(const std::string &authorization, const std::string &pattern,
                                   const std::string &format) const {
  if (!authenticate(authorization)) return error_response(401, "missing or invalid token");
  auto state = journal_.snapshot();
  ErrorDistribution dist = live_errors(*state, matches_, pattern);
  if (format == "tsv") return {200, error_tsv(dist), "text/tab-separated-values"};
  if (!format.empty() && format != "json") return error_response(400, "format must be json or tsv");
  ordered_json out;
  if (!pattern.empty()) out["pattern"] = pattern;
  out["rows"] = ordered_json::array();
  for (const auto &r : dist.rows) {
    ordered_json row;
    row["type"] = r.type;
    row["count"] = r.count;
    row["percentage"] = r.percentage();
    out["rows"].push_back(std::move(row));
  }
  out["total"] = dist.total;
  out["tsv"] = error_tsv(dist);
  return {200, out.dump(), "application/json"};
}

// ------------------------------------------------------------------ http

struct HttpFrontend::Impl {
  httplib::Server server;
};

HttpFrontend::HttpFrontend(ReviewService &service, std::string static_dir)
    : impl_(std::make_unique<Impl>()) {
  auto &srv = impl_->server;
  auto reply = [](httplib::Response &res, const Response &r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  auto guarded = [reply](auto handler) {
    return [handler, reply](const httplib::Request &req, httplib::Response &res) {
      try {
        reply(res, handler(req));
      } catch (const std::exception &e) {
        reply(res, error_response(500, e.what()));
      }
    };
  };
  srv.Get(R"(/api/batches/([^/]+))", guarded([&service](const httplib::Request &req) {
            return service.get_batch(req.get_header_value("Authorization"), req.matches[1],
                                     req.get_param_value("round"));
          }));
  srv.Post("/api/judgments", guarded([&service](const httplib::Request &req) {
             return service.post_judgment(req.get_header_value("Authorization"), req.body);
           }));
  srv.Get("/api/tables/precision", guarded([&service](const httplib::Request &req) {
            return service.get_precision(req.get_header_value("Authorization"),
                                         req.get_param_value("round"),
                                         req.get_param_value("format"));
          }));
  srv.Get("/api/tables/errors", guarded([&service](const httplib::Request &req) {
            return service.get_errors(req.get_header_value("Authorization"),
                                      req.get_param_value("pattern"),
                                      req.get_param_value("format"));
          }));
  if (!static_dir.empty() && !srv.set_mount_point("/", static_dir)) {
    throw Error("cannot serve static files from " + static_dir);
  }
}

HttpFrontend::~HttpFrontend() = default;

int HttpFrontend::bind(const std::string &host, int port) {
  auto &srv = impl_->server;
  if (port == 0) {
    int bound = srv.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!srv.bind_to_port(host, port)) {
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpFrontend::listen() { impl_->server.listen_after_bind(); }

void HttpFrontend::stop() { impl_->server.stop(); }

}  // namespace framewatch
