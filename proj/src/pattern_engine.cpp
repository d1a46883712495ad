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

#include "framewatch/pattern_engine.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <thread>
#include <tuple>

#include "framewatch/random.hpp"
#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::string closest_frame(const FrameStore &store, const std::string &name) {
  const std::u32string target = utf8_decode(case_fold(name));
  std::string best;
  std::size_t best_dist = std::max<std::size_t>(2, target.size() / 3) + 1;
  for (const auto &f : store.frames()) {
    std::size_t d = edit_distance(target, utf8_decode(case_fold(f.name)));
    if (d < best_dist) {
      best_dist = d;
      best = f.name;
    }
  }
  return best;
}

// Resolves declared names, expansion and whitelist in place.
void resolve_constraint(FrameConstraint &c, const FrameStore &store,
                        const std::string &where, std::vector<std::string> &problems) {
  c.frame_names.clear();
  if (c.declared.empty()) {
    problems.push_back(where + ": empty frame set");
    return;
  }
  for (const auto &name : c.declared) {
    if (!store.find_frame(name)) {
      std::string msg = where + ": unknown frame \"" + name + "\"";
      std::string hint = closest_frame(store, name);
      if (!hint.empty()) msg += " (did you mean \"" + hint + "\"?)";
      problems.push_back(std::move(msg));
      continue;
    }
    c.frame_names.insert(name);
    if (c.expand) {
      auto extra = store.closure(name, c.expand->relation, c.expand->direction);
      c.frame_names.insert(extra.begin(), extra.end());
    }
  }
  c.frame_mask.assign(store.frames().size(), false);
  for (const auto &name : c.frame_names) c.frame_mask[*store.find_frame(name)] = true;

  c.lu_ids.reset();
  if (c.lu_whitelist) {
    std::set<LuId> ids;
    for (const auto &[lemma, pos] : *c.lu_whitelist) {
      bool found = false;
      for (const auto *lu : store.lookup_lus(lemma, pos)) {
        if (c.frame_names.count(lu->frame)) {
          ids.insert(lu->id);
          found = true;
        }
      }
      if (!found) {
        problems.push_back(where + ": lexical unit " + lemma + "." +
                           std::string(to_string(pos)) +
                           " does not evoke any of the constraint's frames");
      }
    }
    c.lu_ids = std::move(ids);
  }
}

FrameConstraint parse_constraint(const json &j, std::size_t line, const char *what) {
  if (!j.is_object()) throw ParseError(line, std::string(what) + " must be an object");
  FrameConstraint c;
  auto frames = j.find("frames");
  if (frames == j.end() || !frames->is_array()) {
    throw ParseError(line, std::string(what) + " needs a \"frames\" array");
  }
  for (const auto &f : *frames) {
    if (!f.is_string()) throw ParseError(line, "frame names must be strings");
    c.declared.push_back(f.get<std::string>());
  }
  if (auto e = j.find("expand"); e != j.end()) {
    if (!e->is_object() || !e->contains("relation") || !e->contains("direction") ||
        !(*e)["relation"].is_string() || !(*e)["direction"].is_string()) {
      throw ParseError(line, "\"expand\" needs string fields relation and direction");
    }
    auto rel = parse_relation_type((*e)["relation"].get<std::string>());
    auto dir = parse_direction((*e)["direction"].get<std::string>());
    if (!rel) throw ParseError(line, "unknown relation in \"expand\"");
    if (!dir) throw ParseError(line, "unknown direction in \"expand\"");
    c.expand = ClosureDirective{*rel, *dir};
  }
  if (auto lus = j.find("lus"); lus != j.end()) {
    if (!lus->is_array()) throw ParseError(line, "\"lus\" must be an array");
    std::set<std::pair<std::string, Pos>> wl;
    for (const auto &lu : *lus) {
      if (!lu.is_array() || lu.size() != 2 || !lu[0].is_string() || !lu[1].is_string()) {
        throw ParseError(line, "each lu must be a [lemma, pos] pair");
      }
      auto pos = parse_pos(lu[1].get<std::string>());
      if (!pos) throw ParseError(line, "invalid pos \"" + lu[1].get<std::string>() + "\"");
      wl.emplace(lu[0].get<std::string>(), *pos);
    }
    c.lu_whitelist = std::move(wl);
  }
  return c;
}

std::string constraint_text(const FrameConstraint &c) {
  std::string out;
  for (std::size_t i = 0; i < c.declared.size(); ++i) {
    if (i) out += " | ";
    out += c.declared[i];
  }
  if (c.expand) {
    out += " (+" + std::string(to_string(c.expand->relation)) + " " +
           std::string(to_string(c.expand->direction)) + ")";
  }
  if (c.lu_whitelist) {
    out += " {";
    bool first = true;
    for (const auto &[lemma, pos] : *c.lu_whitelist) {
      if (!first) out += ", ";
      first = false;
      out += lemma + "." + std::string(to_string(pos));
    }
    out += "}";
  }
  return out;
}

bool aligned(FillerAlignment a, const TokenRange &fe, const TokenRange &target) {
  return a == FillerAlignment::contain ? fe.contains(target) : fe.overlaps(target);
}

std::vector<std::uint32_t> candidate_ranks(const FrameConstraint &c, const Corpus &corpus,
                                           const CorpusIndex &index) {
  std::vector<std::uint32_t> ranks;
  for (const auto &name : c.frame_names) {
    for (SetId id : index.sets_for_frame(name)) {
      ranks.push_back(index.rank(corpus.set(id).sentence));
    }
  }
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());
  return ranks;
}

}  // namespace

bool FrameConstraint::admits(const AnnotationSet &set) const {
  if (!set.frame || *set.frame >= frame_mask.size() || !frame_mask[*set.frame]) {
    return false;
  }
  if (lu_ids) return set.lu && lu_ids->count(*set.lu) > 0;
  return true;
}

std::string Pattern::description() const {
  std::string out = constraint_text(anchor);
  if (!roles.empty()) {
    out += " [";
    for (std::size_t i = 0; i < roles.size(); ++i) {
      if (i) out += "; ";
      out += roles[i].role + " <- " + constraint_text(roles[i].filler);
    }
    out += "]";
  }
  return out;
}

CompileError::CompileError(std::vector<std::string> problems)
    : Error([&] {
        std::string msg = "pattern compilation failed";
        for (const auto &p : problems) msg += "\n  " + p;
        return msg;
      }()),
      problems_(std::move(problems)) {}

Pattern compile_pattern(Pattern p, const FrameStore &store,
                        std::vector<std::string> *warnings) {
  std::vector<std::string> problems;
  const std::string where = "pattern \"" + p.id + "\"";
  resolve_constraint(p.anchor, store, where + " anchor", problems);
  for (auto &rc : p.roles) {
    resolve_constraint(rc.filler, store, where + " role " + rc.role, problems);
    std::vector<std::string> missing;
    for (const auto &name : p.anchor.frame_names) {
      if (!store.has_role(*store.find_frame(name), rc.role)) missing.push_back(name);
    }
    if (!p.anchor.frame_names.empty() && missing.size() == p.anchor.frame_names.size()) {
      problems.push_back(where + ": role \"" + rc.role +
                         "\" is not defined on any anchor frame");
    } else if (!missing.empty() && warnings) {
      std::string msg = where + ": role \"" + rc.role + "\" missing on";
      for (const auto &m : missing) msg += " " + m;
      warnings->push_back(std::move(msg));
    }
  }
  if (!problems.empty()) throw CompileError(std::move(problems));
  return p;
}

CompileResult compile_patterns(std::istream &in, const FrameStore &store) {
  CompileResult result;
  std::vector<std::string> problems;
  std::set<std::string> ids;
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
    if (!j.is_object()) throw ParseError(lineno, "pattern must be an object");
    auto str = [&](const char *key, bool required) -> std::string {
      auto it = j.find(key);
      if (it == j.end()) {
        if (required) throw ParseError(lineno, std::string("missing field \"") + key + "\"");
        return {};
      }
      if (!it->is_string()) throw ParseError(lineno, std::string("\"") + key + "\" must be a string");
      return it->get<std::string>();
    };
    Pattern p;
    p.id = str("id", true);
    p.name = str("name", true);
    p.scenario = str("scenario", false);
    p.notes = str("notes", false);
    if (auto it = j.find("reconstructed"); it != j.end()) {
      if (!it->is_boolean()) throw ParseError(lineno, "\"reconstructed\" must be a boolean");
      p.reconstructed = it->get<bool>();
    }
    auto anchor = j.find("anchor");
    if (anchor == j.end()) throw ParseError(lineno, "missing field \"anchor\"");
    p.anchor = parse_constraint(*anchor, lineno, "anchor");
    if (auto roles = j.find("roles"); roles != j.end()) {
      if (!roles->is_array()) throw ParseError(lineno, "\"roles\" must be an array");
      for (const auto &r : *roles) {
        if (!r.is_object() || !r.contains("role") || !r["role"].is_string() ||
            !r.contains("filler")) {
          throw ParseError(lineno, "each role needs \"role\" and \"filler\"");
        }
        p.roles.push_back({r["role"].get<std::string>(),
                           parse_constraint(r["filler"], lineno, "filler")});
      }
    }
    if (!ids.insert(p.id).second) {
      problems.push_back("line " + std::to_string(lineno) + ": duplicate pattern id \"" +
                         p.id + "\"");
      continue;
    }
    try {
      result.patterns.push_back(compile_pattern(std::move(p), store, &result.warnings));
    } catch (const CompileError &e) {
      for (const auto &msg : e.problems()) {
        problems.push_back("line " + std::to_string(lineno) + ": " + msg);
      }
    }
  }
  if (!problems.empty()) throw CompileError(std::move(problems));
  return result;
}

CompileResult compile_patterns(const std::string &path, const FrameStore &store) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pattern file " + path);
  return compile_patterns(in, store);
}

std::vector<Match> match_sentence(const Corpus &corpus, SentenceIndex sentence,
                                  const Pattern &pattern, FillerAlignment alignment) {
  std::vector<Match> out;
  const Sentence &s = corpus.sentence(sentence);
  for (SetId anchor_id : s.sets) {
    const AnnotationSet &anchor = corpus.set(anchor_id);
    if (!pattern.anchor.admits(anchor)) continue;
    Match m{pattern.id, sentence, anchor_id, {}};
    bool satisfied = true;
    for (const auto &rc : pattern.roles) {
      std::optional<std::tuple<std::uint32_t, SetId, TokenRange>> best;
      for (const auto &fe : anchor.fes) {
        if (fe.role != rc.role) continue;
        for (SetId other_id : s.sets) {
          if (other_id == anchor_id) continue;
          const AnnotationSet &other = corpus.set(other_id);
          if (!aligned(alignment, fe.span, other.target) || !rc.filler.admits(other)) {
            continue;
          }
          auto key = std::make_tuple(other.target.begin, other_id, fe.span);
          if (!best || key < *best) best = key;
        }
      }
      if (!best) {
        satisfied = false;
        break;
      }
      m.bindings.push_back({rc.role, std::get<2>(*best), std::get<1>(*best)});
    }
    if (satisfied) out.push_back(std::move(m));
  }
  return out;
}

std::vector<Match> match_corpus(const Corpus &corpus, const CorpusIndex &index,
                                const std::vector<Pattern> &patterns,
                                const MatchOptions &options) {
  std::vector<const Pattern *> ordered;
  for (const auto &p : patterns) ordered.push_back(&p);
  std::sort(ordered.begin(), ordered.end(),
            [](const Pattern *a, const Pattern *b) { return a->id < b->id; });

  struct WorkItem {
    const Pattern *pattern;
    SentenceIndex sentence;
  };
  std::vector<WorkItem> work;
  for (const Pattern *p : ordered) {
    auto ranks = candidate_ranks(p->anchor, corpus, index);
    for (const auto &rc : p->roles) {
      if (ranks.empty()) break;
      auto filler = candidate_ranks(rc.filler, corpus, index);
      std::vector<std::uint32_t> both;
      std::set_intersection(ranks.begin(), ranks.end(), filler.begin(), filler.end(),
                            std::back_inserter(both));
      ranks = std::move(both);
    }
    for (auto r : ranks) work.push_back({p, index.sentence_order()[r]});
  }

  const unsigned workers =
      std::max(1u, std::min<unsigned>(options.workers,
                                      static_cast<unsigned>(std::max<std::size_t>(1, work.size()))));
  std::vector<std::vector<Match>> partial(workers);
  auto run = [&](unsigned w) {
    const std::size_t begin = work.size() * w / workers;
    const std::size_t end = work.size() * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      auto ms = match_sentence(corpus, work[i].sentence, *work[i].pattern, options.alignment);
      std::move(ms.begin(), ms.end(), std::back_inserter(partial[w]));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
    for (auto &t : threads) t.join();
  }

  // Chunks are contiguous in (pattern id, sentence rank) order, so
  // concatenation is already the global order.
  std::vector<Match> out;
  for (auto &p : partial) std::move(p.begin(), p.end(), std::back_inserter(out));
  return out;
}

std::vector<Match> match_corpus_bruteforce(const Corpus &corpus, const FrameStore &store,
                                           const std::vector<Pattern> &patterns,
                                           FillerAlignment alignment) {
  auto satisfies = [&](const FrameConstraint &c, const AnnotationSet &a) {
    if (!a.frame || !c.frame_names.count(a.frame_name)) return false;
    if (!c.lu_whitelist) return true;
    if (!a.lu) return false;
    const LexicalUnit &lu = store.lexical_unit(*a.lu);
    return c.lu_whitelist->count({lu.lemma, lu.pos}) > 0;
  };

  std::vector<Match> out;
  for (const auto &p : patterns) {
    for (SentenceIndex si = 0; si < corpus.sentences().size(); ++si) {
      const auto &ids = corpus.sentence(si).sets;
      for (SetId a : ids) {
        const AnnotationSet &anchor = corpus.set(a);
        if (!satisfies(p.anchor, anchor)) continue;
        Match m{p.id, si, a, {}};
        bool ok = true;
        for (const auto &rc : p.roles) {
          bool found = false;
          Binding best;
          std::uint32_t best_start = 0;
          for (const auto &fe : anchor.fes) {
            if (fe.role != rc.role) continue;
            for (SetId b : ids) {
              const AnnotationSet &filler = corpus.set(b);
              if (b == a || !satisfies(rc.filler, filler)) continue;
              bool inside = alignment == FillerAlignment::contain
                                ? fe.span.begin <= filler.target.begin &&
                                      filler.target.end <= fe.span.end
                                : fe.span.begin < filler.target.end &&
                                      filler.target.begin < fe.span.end;
              if (!inside) continue;
              bool better = !found || filler.target.begin < best_start ||
                            (filler.target.begin == best_start &&
                             (b < best.filler ||
                              (b == best.filler && fe.span < best.fe_span)));
              if (better) {
                found = true;
                best = {rc.role, fe.span, b};
                best_start = filler.target.begin;
              }
            }
          }
          if (!found) {
            ok = false;
            break;
          }
          m.bindings.push_back(best);
        }
        if (ok) out.push_back(std::move(m));
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [&](const Match &x, const Match &y) {
    const Sentence &sx = corpus.sentence(x.sentence);
    const Sentence &sy = corpus.sentence(y.sentence);
    return std::tie(x.pattern_id, sx.doc_id, sx.sent_id, x.anchor) <
           std::tie(y.pattern_id, sy.doc_id, sy.sent_id, y.anchor);
  });
  return out;
}

std::map<std::string, std::size_t> count_matches(const std::vector<Match> &matches,
                                                 const std::vector<Pattern> &patterns) {
  std::map<std::string, std::size_t> counts;
  for (const auto &p : patterns) counts[p.id] = 0;
  for (const auto &m : matches) ++counts[m.pattern_id];
  return counts;
}

RetentionPartition retention_filter(const std::map<std::string, std::size_t> &counts,
                                    std::size_t min_matches) {
  RetentionPartition out;
  for (const auto &[id, n] : counts) {
    (n < min_matches ? out.discarded : out.kept).push_back(id);
  }
  return out;
}

std::vector<Match> sample_for_inspection(const std::vector<Match> &matches,
                                         std::size_t cap, std::uint64_t seed) {
  if (matches.size() <= cap) return matches;
  std::vector<std::size_t> idx(matches.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first `cap` slots become a uniform sample.
  for (std::size_t i = 0; i < cap; ++i) {
    std::size_t j = i + uniform_below(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(cap);
  std::sort(idx.begin(), idx.end());
  std::vector<Match> out;
  out.reserve(cap);
  for (std::size_t i : idx) out.push_back(matches[i]);
  return out;
}

std::string match_id(const Match &match, const Corpus &corpus) {
  const Sentence &s = corpus.sentence(match.sentence);
  auto pos = std::find(s.sets.begin(), s.sets.end(), match.anchor) - s.sets.begin();
  return match.pattern_id + "#" + s.doc_id + "#" + s.sent_id + "#" + std::to_string(pos);
}

std::string match_record(const Match &match, const Corpus &corpus,
                         const FrameStore &store, const Pattern &pattern) {
  const Sentence &s = corpus.sentence(match.sentence);
  auto local = [&](SetId id) {
    return static_cast<std::size_t>(std::find(s.sets.begin(), s.sets.end(), id) -
                                    s.sets.begin());
  };
  auto range = [](const TokenRange &r) { return ordered_json::array({r.begin, r.end}); };
  const AnnotationSet &anchor = corpus.set(match.anchor);

  ordered_json j;
  j["match_id"] = match_id(match, corpus);
  j["pattern_id"] = pattern.id;
  j["pattern_name"] = pattern.name;
  j["scenario"] = pattern.scenario;
  j["description"] = pattern.description();
  j["doc_id"] = s.doc_id;
  j["sent_id"] = s.sent_id;
  j["field_tag"] = to_string(s.field_tag);
  j["text"] = s.text();
  ordered_json ja;
  ja["set"] = local(match.anchor);
  ja["frame"] = anchor.frame_name;
  ja["target"] = range(anchor.target);
  if (anchor.lu) ja["lu"] = store.lexical_unit(*anchor.lu).label();
  j["anchor"] = std::move(ja);
  ordered_json bindings = ordered_json::array();
  for (const auto &b : match.bindings) {
    const AnnotationSet &f = corpus.set(b.filler);
    ordered_json jb;
    jb["role"] = b.role;
    jb["span"] = range(b.fe_span);
    jb["filler_set"] = local(b.filler);
    jb["filler_frame"] = f.frame_name;
    jb["filler_target"] = range(f.target);
    bindings.push_back(std::move(jb));
  }
  j["bindings"] = std::move(bindings);
  return j.dump();
}

}  // namespace framewatch
