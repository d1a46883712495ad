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

#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include <unistd.h>

#include "framewatch/random.hpp"

#ifndef FRAMEWATCH_DATA_DIR
#error "FRAMEWATCH_DATA_DIR must point at the repository data directory"
#endif

namespace fwtest {

std::string data_path(const std::string &relative) {
  return std::string(FRAMEWATCH_DATA_DIR) + "/" + relative;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const fw::FrameStore &fixture_store() {
  static const fw::FrameStore store = fw::load_store(data_path("store/violence_fixture.jsonl"));
  return store;
}

std::string temp_path(const std::string &stem) {
  static std::atomic<int> counter{0};
  auto dir = std::filesystem::temp_directory_path();
  std::string name = "framewatch_" + stem + "_" + std::to_string(::getpid()) + "_" +
                     std::to_string(counter++);
  auto path = dir / name;
  std::filesystem::remove(path);
  return path.string();
}

std::size_t pick(std::mt19937_64 &rng, std::size_t lo, std::size_t hi) {
  return lo + fw::uniform_below(rng, hi - lo + 1);
}

bool coin(std::mt19937_64 &rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

fw::StoreRecords random_dag(std::mt19937_64 &rng, std::size_t frames, double edge_p) {
  fw::StoreRecords r;
  auto name = [](std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "F%03zu", i);
    return std::string(buf);
  };
  for (std::size_t i = 0; i < frames; ++i) {
    r.frames.push_back({0, name(i), "Random frame " + name(i) + ".", {}});
    r.elements.push_back({name(i), "Entity", "Participant.", fw::Coreness::core});
  }
  const fw::RelationType others[] = {fw::RelationType::use, fw::RelationType::subframe,
                                     fw::RelationType::see_also, fw::RelationType::precedence};
  for (std::size_t i = 0; i < frames; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (coin(rng, edge_p)) r.relations.push_back({fw::RelationType::inheritance, name(i), name(j)});
      if (coin(rng, edge_p / 2)) {
        // Other types may point either way and form cycles.
        auto t = others[pick(rng, 0, 3)];
        if (coin(rng, 0.5)) {
          r.relations.push_back({t, name(i), name(j)});
        } else {
          r.relations.push_back({t, name(j), name(i)});
        }
      }
    }
  }
  return r;
}

namespace {

const char *kLemmas[] = {"paciente", "marido", "bater",  "pai",   "relatar", "dor",
                         "casa",     "filho",  "medo",   "abuso", "ameaça",  "o",
                         "de",       "em",     "agredir", "mãe",  "estupro", "braço"};

}  // namespace

fw::Corpus random_corpus(const fw::FrameStore &store, std::mt19937_64 &rng,
                         const CorpusShape &shape) {
  const auto &frames = store.frames();
  const std::size_t pool =
      shape.frame_pool ? std::min(shape.frame_pool, frames.size()) : frames.size();
  fw::Corpus corpus;
  for (std::size_t si = 0; si < shape.sentences; ++si) {
    fw::Sentence s;
    s.doc_id = "d" + std::to_string(si / 4);
    s.sent_id = "s" + std::to_string(si % 4);
    s.field_tag = static_cast<fw::FieldTag>(pick(rng, 0, 4));
    const std::size_t n = pick(rng, 1, shape.max_tokens);
    std::uint32_t offset = 0;
    for (std::size_t t = 0; t < n; ++t) {
      std::string lemma = kLemmas[pick(rng, 0, std::size(kLemmas) - 1)];
      fw::Token tok{lemma, lemma, static_cast<fw::Pos>(pick(rng, 0, 4)), offset,
                    offset + static_cast<std::uint32_t>(lemma.size()), {}};
      offset = tok.char_end + 1;
      s.tokens.push_back(std::move(tok));
    }
    std::vector<fw::AnnotationSet> sets;
    const std::size_t k = pick(rng, 0, shape.max_sets);
    auto range = [&](std::size_t max_len) {
      std::uint32_t b = static_cast<std::uint32_t>(pick(rng, 0, n - 1));
      std::uint32_t e = static_cast<std::uint32_t>(
          std::min<std::size_t>(n, b + pick(rng, 1, max_len)));
      return fw::TokenRange{b, e};
    };
    for (std::size_t j = 0; j < k; ++j) {
      fw::AnnotationSet a;
      a.target = range(2);
      if (coin(rng, shape.unknown_frame_rate)) {
        a.frame_name = "Not_a_frame";
      } else {
        const fw::Frame &f = frames[pick(rng, 0, pool - 1)];
        a.frame_name = f.name;
        auto elements = store.elements_of(f.id);
        const std::size_t fes = pick(rng, 0, 3);
        for (std::size_t q = 0; q < fes; ++q) {
          std::string role = elements.empty() || coin(rng, 0.05)
                                 ? "Nonexistent_role"
                                 : elements[pick(rng, 0, elements.size() - 1)]->name;
          a.fes.push_back({role, range(n)});
        }
        if (coin(rng, 0.5)) {
          std::vector<const fw::LexicalUnit *> lus;
          for (const auto &lu : store.lexical_units()) {
            if (lu.frame == f.name) lus.push_back(&lu);
          }
          if (!lus.empty()) a.lu_label = lus[pick(rng, 0, lus.size() - 1)]->label();
        }
      }
      sets.push_back(std::move(a));
    }
    corpus.append(std::move(s), std::move(sets));
  }
  fw::resolve_against(corpus, store);
  return corpus;
}

namespace {

fw::FrameConstraint random_constraint(const fw::FrameStore &store, std::mt19937_64 &rng,
                                      std::size_t pool, bool allow_whitelist,
                                      const std::string *first = nullptr) {
  const auto &frames = store.frames();
  fw::FrameConstraint c;
  if (first) c.declared.push_back(*first);
  const std::size_t extra = pick(rng, first ? 0 : 1, 2);
  for (std::size_t i = 0; i < extra; ++i) {
    const std::string &n = frames[pick(rng, 0, pool - 1)].name;
    if (std::find(c.declared.begin(), c.declared.end(), n) == c.declared.end()) {
      c.declared.push_back(n);
    }
  }
  if (coin(rng, 0.25)) {
    const fw::RelationType types[] = {fw::RelationType::inheritance, fw::RelationType::use,
                                      fw::RelationType::subframe};
    c.expand = fw::ClosureDirective{types[pick(rng, 0, 2)],
                                    coin(rng, 0.5) ? fw::Direction::sources
                                                   : fw::Direction::targets};
  }
  if (allow_whitelist && coin(rng, 0.3)) {
    std::set<std::pair<std::string, fw::Pos>> wl;
    for (const auto &lu : store.lexical_units()) {
      if (std::find(c.declared.begin(), c.declared.end(), lu.frame) != c.declared.end() &&
          coin(rng, 0.6)) {
        wl.emplace(lu.lemma, lu.pos);
      }
    }
    if (!wl.empty()) c.lu_whitelist = std::move(wl);
  }
  return c;
}

}  // namespace

fw::Pattern random_pattern(const fw::FrameStore &store, std::mt19937_64 &rng,
                           const std::string &id) {
  const auto &frames = store.frames();
  // Anchor frames with at least one element so roles can be drawn.
  std::vector<const fw::Frame *> with_roles;
  for (const auto &f : frames) {
    if (!store.elements_of(f.id).empty()) with_roles.push_back(&f);
  }
  const fw::Frame &head = *with_roles[pick(rng, 0, with_roles.size() - 1)];

  fw::Pattern p;
  p.id = id;
  p.name = "random " + id;
  p.scenario = "random";
  p.anchor = random_constraint(store, rng, frames.size(), true, &head.name);
  auto elements = store.elements_of(head.id);
  const std::size_t roles = pick(rng, 0, std::min<std::size_t>(2, elements.size()));
  std::set<std::string> used;
  for (std::size_t i = 0; i < roles; ++i) {
    const std::string &role = elements[pick(rng, 0, elements.size() - 1)]->name;
    if (!used.insert(role).second) continue;
    p.roles.push_back({role, random_constraint(store, rng, frames.size(), true)});
  }
  return fw::compile_pattern(std::move(p), store);
}

std::vector<fw::Match> naive_matches(const fw::Corpus &corpus, const fw::FrameStore &store,
                                     const std::vector<fw::Pattern> &patterns,
                                     fw::FillerAlignment alignment) {
  // Constraint frame sets are recomputed here from the declared frames and
  // the store closure, not taken from the compiled pattern.
  auto frames_of = [&](const fw::FrameConstraint &c) {
    std::set<std::string> out(c.declared.begin(), c.declared.end());
    if (c.expand) {
      for (const auto &d : c.declared) {
        auto more = store.closure(d, c.expand->relation, c.expand->direction);
        out.insert(more.begin(), more.end());
      }
    }
    return out;
  };
  auto admits = [&](const fw::FrameConstraint &c, const std::set<std::string> &names,
                    const fw::AnnotationSet &a) {
    if (!a.frame || !names.count(a.frame_name)) return false;
    if (!c.lu_whitelist) return true;
    if (!a.lu) return false;
    const auto &lu = store.lexical_unit(*a.lu);
    return c.lu_whitelist->count({lu.lemma, lu.pos}) > 0;
  };

  std::vector<std::tuple<std::string, std::string, std::string, fw::SetId, fw::Match>> rows;
  for (const auto &p : patterns) {
    const auto anchor_names = frames_of(p.anchor);
    std::vector<std::set<std::string>> filler_names;
    for (const auto &rc : p.roles) filler_names.push_back(frames_of(rc.filler));

    for (fw::SetId a = 0; a < corpus.sets().size(); ++a) {
      const auto &anchor = corpus.set(a);
      if (!admits(p.anchor, anchor_names, anchor)) continue;
      const auto &s = corpus.sentence(anchor.sentence);
      fw::Match m{p.id, anchor.sentence, a, {}};
      bool ok = true;
      for (std::size_t r = 0; r < p.roles.size() && ok; ++r) {
        std::vector<std::tuple<std::uint32_t, fw::SetId, fw::TokenRange>> witnesses;
        for (const auto &fe : anchor.fes) {
          if (fe.role != p.roles[r].role) continue;
          for (fw::SetId b : s.sets) {
            if (b == a) continue;
            const auto &f = corpus.set(b);
            if (!admits(p.roles[r].filler, filler_names[r], f)) continue;
            const bool hit = alignment == fw::FillerAlignment::contain
                                 ? fe.span.contains(f.target)
                                 : fe.span.overlaps(f.target);
            if (hit) witnesses.emplace_back(f.target.begin, b, fe.span);
          }
        }
        if (witnesses.empty()) {
          ok = false;
        } else {
          auto w = *std::min_element(witnesses.begin(), witnesses.end());
          m.bindings.push_back({p.roles[r].role, std::get<2>(w), std::get<1>(w)});
        }
      }
      if (ok) rows.emplace_back(p.id, s.doc_id, s.sent_id, a, std::move(m));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const auto &x, const auto &y) {
    return std::tie(std::get<0>(x), std::get<1>(x), std::get<2>(x), std::get<3>(x)) <
           std::tie(std::get<0>(y), std::get<1>(y), std::get<2>(y), std::get<3>(y));
  });
  std::vector<fw::Match> out;
  for (auto &r : rows) out.push_back(std::move(std::get<4>(r)));
  return out;
}

std::string random_text(std::mt19937_64 &rng, std::size_t max_len) {
  static const char *words[] = {"Maria", "mora", "em", "Recife", "tel", "99",
                                "Silva", "dor",  "de", "cabeça", "CPF", "Ana"};
  std::string out;
  const std::size_t target = pick(rng, 0, max_len);
  while (out.size() < target) {
    if (!out.empty()) out += ' ';
    out += words[pick(rng, 0, std::size(words) - 1)];
  }
  return out;
}

std::vector<fw::PiiDetection> random_detections(std::mt19937_64 &rng, std::size_t text_len,
                                                std::size_t detectors, std::size_t max_each) {
  std::vector<fw::PiiDetection> out;
  if (text_len == 0) return out;
  for (std::size_t d = 0; d < detectors; ++d) {
    const std::size_t n = pick(rng, 0, max_each);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t b = pick(rng, 0, text_len - 1);
      std::size_t e = std::min(text_len, b + pick(rng, 1, 12));
      out.push_back({"det" + std::to_string(d), {b, e},
                     static_cast<fw::PiiCategory>(pick(rng, 0, 6))});
    }
  }
  return out;
}

}  // namespace fwtest
