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

#include "framewatch/frame_store.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <fstream>
#include <functional>
#include <sstream>
#include <tuple>

#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

template <typename E, std::size_t N>
std::optional<E> parse_enum(std::string_view s,
                            const std::array<std::string_view, N> &names) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  return std::nullopt;
}

constexpr std::array<std::string_view, 5> kPosNames = {"n", "v", "a", "adv",
                                                       "other"};
constexpr std::array<std::string_view, 2> kCorenessNames = {"core",
                                                            "peripheral"};
constexpr std::array<std::string_view, 8> kRelationNames = {
    "inheritance",   "subframe",   "use",            "causative_of",
    "inchoative_of", "precedence", "perspective_of", "see_also"};
constexpr std::array<std::string_view, 2> kDirectionNames = {"sources",
                                                             "targets"};
constexpr std::array<std::string_view, 4> kQualeNames = {
    "agentive", "formal", "constitutive", "telic"};
constexpr std::array<std::string_view, 9> kViolationNames = {
    "duplicate_frame",        "empty_definition",
    "duplicate_frame_element", "dangling_reference",
    "self_loop",              "inheritance_cycle",
    "duplicate_lexical_unit", "lemma_not_in_word_forms",
    "duplicate_qualia_relation"};

auto lu_tuple(const LexicalUnit &lu) {
  return std::tie(lu.lemma, lu.pos, lu.frame);
}

auto qualia_tuple(const QualiaRelation &q) {
  return std::tie(q.source_lu, q.target_lu, q.mediating_frame, q.quale);
}

std::string lu_key_label(const LuKey &k) {
  return k.lemma + "." + std::string(to_string(k.pos)) + "@" + k.frame;
}

// ---------------------------------------------------------------- parsing

const json &require(const json &rec, const char *key, std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end()) {
    throw ParseError(line, std::string("missing field \"") + key + "\"");
  }
  return *it;
}

std::string require_string(const json &rec, const char *key,
                           std::size_t line) {
  const json &v = require(rec, key, line);
  if (!v.is_string()) {
    throw ParseError(line, std::string("field \"") + key + "\" must be a string");
  }
  return v.get<std::string>();
}

std::string optional_string(const json &rec, const char *key,
                            std::size_t line) {
  auto it = rec.find(key);
  if (it == rec.end()) return {};
  if (!it->is_string()) {
    throw ParseError(line, std::string("field \"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

std::set<std::string> optional_string_set(const json &rec, const char *key,
                                          std::size_t line) {
  std::set<std::string> out;
  auto it = rec.find(key);
  if (it == rec.end()) return out;
  if (!it->is_array()) {
    throw ParseError(line, std::string("field \"") + key + "\" must be an array");
  }
  for (const auto &v : *it) {
    if (!v.is_string()) {
      throw ParseError(line, std::string("field \"") + key +
                                 "\" must hold strings");
    }
    out.insert(v.get<std::string>());
  }
  return out;
}

template <typename E>
E require_enum(const json &rec, const char *key, std::size_t line,
               std::optional<E> (*parser)(std::string_view)) {
  std::string s = require_string(rec, key, line);
  auto v = parser(s);
  if (!v) {
    throw ParseError(line, std::string("invalid ") + key + " \"" + s + "\"");
  }
  return *v;
}

LuKey parse_lu_key(const json &rec, const char *key, std::size_t line) {
  const json &v = require(rec, key, line);
  if (!v.is_object()) {
    throw ParseError(line, std::string("field \"") + key + "\" must be an object");
  }
  LuKey k;
  k.lemma = require_string(v, "lemma", line);
  k.pos = require_enum<Pos>(v, "pos", line, parse_pos);
  k.frame = require_string(v, "frame", line);
  return k;
}

ordered_json lu_key_json(const LuKey &k) {
  ordered_json j;
  j["lemma"] = k.lemma;
  j["pos"] = to_string(k.pos);
  j["frame"] = k.frame;
  return j;
}

// ---------------------------------------------------------------- cycles

// Tarjan SCC over the inheritance subgraph; returns one concrete cycle per
// non-trivial component.
std::vector<std::vector<FrameId>> inheritance_cycles(
    std::size_t n, const std::vector<std::vector<FrameId>> &adj) {
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<FrameId> stack;
  std::vector<std::vector<FrameId>> components;
  int counter = 0;

  std::function<void(FrameId)> strongconnect = [&](FrameId v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (FrameId w : adj[v]) {
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<FrameId> comp;
      FrameId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1) components.push_back(std::move(comp));
    }
  };
  for (FrameId v = 0; v < n; ++v) {
    if (index[v] < 0) strongconnect(v);
  }

  std::vector<std::vector<FrameId>> cycles;
  for (auto &comp : components) {
    std::set<FrameId> members(comp.begin(), comp.end());
    FrameId start = *members.begin();
    // BFS inside the component from start back to start.
    std::map<FrameId, FrameId> parent;
    std::deque<FrameId> queue{start};
    std::optional<FrameId> closing;
    while (!queue.empty() && !closing) {
      FrameId u = queue.front();
      queue.pop_front();
      for (FrameId w : adj[u]) {
        if (!members.count(w)) continue;
        if (w == start) {
          closing = u;
          break;
        }
        if (!parent.count(w)) {
          parent[w] = u;
          queue.push_back(w);
        }
      }
    }
    std::vector<FrameId> path;
    for (FrameId u = *closing; u != start; u = parent.at(u)) path.push_back(u);
    path.push_back(start);
    std::reverse(path.begin(), path.end());
    path.push_back(start);
    cycles.push_back(std::move(path));
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::string_view to_string(Pos p) { return kPosNames[static_cast<int>(p)]; }
std::string_view to_string(Coreness c) {
  return kCorenessNames[static_cast<int>(c)];
}
std::string_view to_string(RelationType r) {
  return kRelationNames[static_cast<int>(r)];
}
std::string_view to_string(Direction d) {
  return kDirectionNames[static_cast<int>(d)];
}
std::string_view to_string(Quale q) { return kQualeNames[static_cast<int>(q)]; }
std::string_view to_string(ViolationKind k) {
  return kViolationNames[static_cast<int>(k)];
}

std::optional<Pos> parse_pos(std::string_view s) {
  return parse_enum<Pos>(s, kPosNames);
}
std::optional<Coreness> parse_coreness(std::string_view s) {
  return parse_enum<Coreness>(s, kCorenessNames);
}
std::optional<RelationType> parse_relation_type(std::string_view s) {
  return parse_enum<RelationType>(s, kRelationNames);
}
std::optional<Direction> parse_direction(std::string_view s) {
  return parse_enum<Direction>(s, kDirectionNames);
}
std::optional<Quale> parse_quale(std::string_view s) {
  return parse_enum<Quale>(s, kQualeNames);
}

std::string LexicalUnit::label() const {
  return lemma + "." + std::string(to_string(pos));
}

LoadError::LoadError(std::vector<Violation> violations)
    : Error([&] {
        std::string msg = std::to_string(violations.size()) +
                          " frame store violation(s)";
        if (!violations.empty()) msg += "; first: " + violations.front().message;
        return msg;
      }()),
      violations_(std::move(violations)) {}

FrameStore FrameStore::from_records(StoreRecords records) {
  FrameStore s;
  auto &r = records;
  std::sort(r.frames.begin(), r.frames.end(), [](const Frame &a, const Frame &b) {
    return std::tie(a.name, a.definition, a.domain_tags) <
           std::tie(b.name, b.definition, b.domain_tags);
  });
  for (std::size_t i = 0; i < r.frames.size(); ++i) {
    r.frames[i].id = static_cast<FrameId>(i);
  }
  std::sort(r.elements.begin(), r.elements.end(),
            [](const FrameElement &a, const FrameElement &b) {
              return std::tie(a.frame, a.name, a.coreness, a.definition) <
                     std::tie(b.frame, b.name, b.coreness, b.definition);
            });
  std::sort(r.relations.begin(), r.relations.end(),
            [](const FrameRelation &a, const FrameRelation &b) {
              return std::tie(a.type, a.source, a.target) <
                     std::tie(b.type, b.source, b.target);
            });
  std::sort(r.lexical_units.begin(), r.lexical_units.end(),
            [](const LexicalUnit &a, const LexicalUnit &b) {
              return std::tie(a.lemma, a.pos, a.frame, a.word_forms) <
                     std::tie(b.lemma, b.pos, b.frame, b.word_forms);
            });
  for (std::size_t i = 0; i < r.lexical_units.size(); ++i) {
    r.lexical_units[i].id = static_cast<LuId>(i);
  }
  std::sort(r.qualia.begin(), r.qualia.end(),
            [](const QualiaRelation &a, const QualiaRelation &b) {
              return qualia_tuple(a) < qualia_tuple(b);
            });

  s.records_ = std::move(records);
  const auto &rec = s.records_;
  for (const auto &f : rec.frames) s.frame_by_name_.emplace(f.name, f.id);
  s.elements_by_frame_.resize(rec.frames.size());
  for (std::size_t i = 0; i < rec.elements.size(); ++i) {
    if (auto id = s.find_frame(rec.elements[i].frame)) {
      s.elements_by_frame_[*id].push_back(i);
    }
  }
  for (const auto &rel : rec.relations) {
    auto src = s.find_frame(rel.source);
    auto tgt = s.find_frame(rel.target);
    if (!src || !tgt) continue;
    s.out_edges_[{rel.type, *src}].push_back(*tgt);
    s.in_edges_[{rel.type, *tgt}].push_back(*src);
  }
  for (const auto &lu : rec.lexical_units) {
    s.lu_by_lemma_.emplace(std::make_pair(lu.lemma, lu.pos), lu.id);
    s.lemma_by_form_[case_fold(lu.lemma)].insert({lu.lemma, lu.pos});
    for (const auto &form : lu.word_forms) {
      s.lemma_by_form_[case_fold(form)].insert({lu.lemma, lu.pos});
    }
  }
  return s;
}

std::optional<FrameId> FrameStore::find_frame(std::string_view name) const {
  auto it = frame_by_name_.find(std::string(name));
  if (it == frame_by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<const FrameElement *> FrameStore::elements_of(FrameId id) const {
  std::vector<const FrameElement *> out;
  if (id >= elements_by_frame_.size()) return out;
  for (std::size_t i : elements_by_frame_[id]) {
    out.push_back(&records_.elements[i]);
  }
  return out;
}

bool FrameStore::has_role(FrameId id, std::string_view role) const {
  if (id >= elements_by_frame_.size()) return false;
  for (std::size_t i : elements_by_frame_[id]) {
    if (records_.elements[i].name == role) return true;
  }
  return false;
}

std::set<std::string> FrameStore::closure(std::string_view start,
                                          RelationType type,
                                          Direction direction) const {
  auto start_id = find_frame(start);
  if (!start_id) throw Error("unknown frame \"" + std::string(start) + "\"");
  const auto &edges = direction == Direction::targets ? out_edges_ : in_edges_;
  std::vector<bool> seen(records_.frames.size(), false);
  seen[*start_id] = true;
  std::deque<FrameId> queue{*start_id};
  std::set<std::string> out;
  while (!queue.empty()) {
    FrameId u = queue.front();
    queue.pop_front();
    auto it = edges.find({type, u});
    if (it == edges.end()) continue;
    for (FrameId w : it->second) {
      if (seen[w]) continue;
      seen[w] = true;
      out.insert(records_.frames[w].name);
      queue.push_back(w);
    }
  }
  // A cycle back to the start is still not part of the closure.
  out.erase(std::string(start));
  return out;
}

std::vector<const LexicalUnit *> FrameStore::lookup_lus(std::string_view lemma,
                                                        Pos pos) const {
  std::vector<const LexicalUnit *> out;
  auto [lo, hi] = lu_by_lemma_.equal_range({std::string(lemma), pos});
  for (auto it = lo; it != hi; ++it) {
    out.push_back(&records_.lexical_units[it->second]);
  }
  return out;
}

const LexicalUnit *FrameStore::infer_lu(std::string_view lemma, Pos pos,
                                        std::string_view frame) const {
  for (const LexicalUnit *lu : lookup_lus(lemma, pos)) {
    if (lu->frame == frame) return lu;
  }
  for (const auto &[candidate, cpos] : resolve_word_form(lemma)) {
    if (cpos != pos) continue;
    for (const LexicalUnit *lu : lookup_lus(candidate, cpos)) {
      if (lu->frame == frame) return lu;
    }
  }
  return nullptr;
}

std::set<std::pair<std::string, Pos>> FrameStore::resolve_word_form(
    std::string_view surface_or_lemma) const {
  auto it = lemma_by_form_.find(case_fold(surface_or_lemma));
  if (it == lemma_by_form_.end()) return {};
  return it->second;
}

std::vector<const QualiaRelation *> FrameStore::qualia_from(
    const LuKey &lu) const {
  std::vector<const QualiaRelation *> out;
  for (const auto &q : records_.qualia) {
    if (q.source_lu == lu) out.push_back(&q);
  }
  return out;
}

bool operator==(const FrameStore &a, const FrameStore &b) {
  const auto &x = a.records_;
  const auto &y = b.records_;
  return x.frames == y.frames && x.elements == y.elements &&
         x.relations == y.relations && x.lexical_units == y.lexical_units &&
         x.qualia == y.qualia;
}

std::vector<Violation> validate(const FrameStore &store) {
  std::vector<Violation> out;
  auto add = [&](ViolationKind kind, std::vector<std::string> subjects,
                 std::string message) {
    out.push_back({kind, std::move(subjects), std::move(message)});
  };
  auto has_frame = [&](const std::string &name) {
    return store.find_frame(name).has_value();
  };

  const auto &frames = store.frames();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    if (i > 0 && frames[i].name == frames[i - 1].name &&
        (i < 2 || frames[i - 2].name != frames[i].name)) {
      add(ViolationKind::duplicate_frame, {frames[i].name},
          "frame \"" + frames[i].name + "\" defined more than once");
    }
    if (trim(frames[i].definition).empty()) {
      add(ViolationKind::empty_definition, {frames[i].name},
          "frame \"" + frames[i].name + "\" has an empty definition");
    }
  }

  const auto &elements = store.frame_elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const auto &fe = elements[i];
    if (!has_frame(fe.frame)) {
      add(ViolationKind::dangling_reference, {fe.frame + "." + fe.name},
          "frame element \"" + fe.name + "\" references unknown frame \"" +
              fe.frame + "\"");
    }
    if (i > 0 && elements[i - 1].frame == fe.frame &&
        elements[i - 1].name == fe.name) {
      add(ViolationKind::duplicate_frame_element, {fe.frame + "." + fe.name},
          "frame element \"" + fe.frame + "." + fe.name + "\" is duplicated");
    }
  }

  std::vector<std::vector<FrameId>> inheritance(frames.size());
  for (const auto &rel : store.relations()) {
    std::string edge = rel.source + " -[" + std::string(to_string(rel.type)) +
                       "]-> " + rel.target;
    bool ok = true;
    for (const auto *end : {&rel.source, &rel.target}) {
      if (!has_frame(*end)) {
        ok = false;
        add(ViolationKind::dangling_reference, {*end},
            "relation " + edge + " references unknown frame \"" + *end + "\"");
      }
    }
    if (rel.source == rel.target) {
      add(ViolationKind::self_loop, {rel.source}, "self-loop " + edge);
      continue;
    }
    if (ok && rel.type == RelationType::inheritance) {
      inheritance[*store.find_frame(rel.source)].push_back(
          *store.find_frame(rel.target));
    }
  }
  for (const auto &cycle : inheritance_cycles(frames.size(), inheritance)) {
    std::vector<std::string> names;
    std::string msg = "inheritance cycle: ";
    for (std::size_t i = 0; i < cycle.size(); ++i) {
      names.push_back(frames[cycle[i]].name);
      if (i) msg += " -> ";
      msg += frames[cycle[i]].name;
    }
    add(ViolationKind::inheritance_cycle, std::move(names), std::move(msg));
  }

  const auto &lus = store.lexical_units();
  for (std::size_t i = 0; i < lus.size(); ++i) {
    const auto &lu = lus[i];
    std::string label = lu.label() + "@" + lu.frame;
    if (!has_frame(lu.frame)) {
      add(ViolationKind::dangling_reference, {label},
          "lexical unit " + label + " references unknown frame \"" + lu.frame +
              "\"");
    }
    if (i > 0 && lu_tuple(lus[i - 1]) == lu_tuple(lu)) {
      add(ViolationKind::duplicate_lexical_unit, {label},
          "lexical unit " + label + " is duplicated");
    }
    if (!lu.word_forms.count(lu.lemma)) {
      add(ViolationKind::lemma_not_in_word_forms, {label},
          "lexical unit " + label + " does not list its lemma as a word form");
    }
  }

  auto lu_exists = [&](const LuKey &k) {
    for (const auto *lu : store.lookup_lus(k.lemma, k.pos)) {
      if (lu->frame == k.frame) return true;
    }
    return false;
  };
  const auto &qualia = store.qualia();
  for (std::size_t i = 0; i < qualia.size(); ++i) {
    const auto &q = qualia[i];
    std::string label = lu_key_label(q.source_lu) + " -[" +
                        std::string(to_string(q.quale)) + "/" +
                        q.mediating_frame + "]-> " + lu_key_label(q.target_lu);
    for (const auto *k : {&q.source_lu, &q.target_lu}) {
      if (!lu_exists(*k)) {
        add(ViolationKind::dangling_reference, {lu_key_label(*k)},
            "qualia relation " + label + " references unknown lexical unit " +
                lu_key_label(*k));
      }
    }
    if (!has_frame(q.mediating_frame)) {
      add(ViolationKind::dangling_reference, {q.mediating_frame},
          "qualia relation " + label + " references unknown frame \"" +
              q.mediating_frame + "\"");
    }
    if (i > 0 && qualia_tuple(qualia[i - 1]) == qualia_tuple(q)) {
      add(ViolationKind::duplicate_qualia_relation, {label},
          "qualia relation " + label + " is duplicated");
    }
  }
  return out;
}

StoreRecords parse_store(std::istream &in) {
  StoreRecords r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::parse_error &e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!rec.is_object()) throw ParseError(lineno, "record must be an object");
    std::string kind = require_string(rec, "kind", lineno);
    if (kind == "frame") {
      Frame f;
      f.name = require_string(rec, "name", lineno);
      f.definition = optional_string(rec, "definition", lineno);
      f.domain_tags = optional_string_set(rec, "domains", lineno);
      r.frames.push_back(std::move(f));
    } else if (kind == "frame_element") {
      FrameElement fe;
      fe.frame = require_string(rec, "frame", lineno);
      fe.name = require_string(rec, "name", lineno);
      fe.definition = optional_string(rec, "definition", lineno);
      fe.coreness =
          require_enum<Coreness>(rec, "coreness", lineno, parse_coreness);
      r.elements.push_back(std::move(fe));
    } else if (kind == "frame_relation") {
      FrameRelation rel;
      rel.type =
          require_enum<RelationType>(rec, "type", lineno, parse_relation_type);
      rel.source = require_string(rec, "source", lineno);
      rel.target = require_string(rec, "target", lineno);
      r.relations.push_back(std::move(rel));
    } else if (kind == "lexical_unit") {
      LexicalUnit lu;
      lu.lemma = require_string(rec, "lemma", lineno);
      lu.pos = require_enum<Pos>(rec, "pos", lineno, parse_pos);
      lu.frame = require_string(rec, "frame", lineno);
      lu.word_forms = optional_string_set(rec, "word_forms", lineno);
      // The lemma is always one of its own word forms.
      lu.word_forms.insert(lu.lemma);
      r.lexical_units.push_back(std::move(lu));
    } else if (kind == "qualia_relation") {
      QualiaRelation q;
      q.source_lu = parse_lu_key(rec, "source_lu", lineno);
      q.target_lu = parse_lu_key(rec, "target_lu", lineno);
      q.mediating_frame = require_string(rec, "frame", lineno);
      q.quale = require_enum<Quale>(rec, "quale", lineno, parse_quale);
      r.qualia.push_back(std::move(q));
    } else {
      throw ParseError(lineno, "unknown record kind \"" + kind + "\"");
    }
  }
  return r;
}

FrameStore load_store(std::istream &in) {
  FrameStore store = FrameStore::from_records(parse_store(in));
  auto violations = validate(store);
  if (!violations.empty()) throw LoadError(std::move(violations));
  return store;
}

FrameStore load_store(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open frame store " + path);
  return load_store(in);
}

std::string serialize_store(const FrameStore &store) {
  std::ostringstream out;
  for (const auto &f : store.frames()) {
    ordered_json j;
    j["kind"] = "frame";
    j["name"] = f.name;
    j["definition"] = f.definition;
    if (!f.domain_tags.empty()) j["domains"] = f.domain_tags;
    out << j.dump() << '\n';
  }
  for (const auto &fe : store.frame_elements()) {
    ordered_json j;
    j["kind"] = "frame_element";
    j["frame"] = fe.frame;
    j["name"] = fe.name;
    j["coreness"] = to_string(fe.coreness);
    if (!fe.definition.empty()) j["definition"] = fe.definition;
    out << j.dump() << '\n';
  }
  for (const auto &rel : store.relations()) {
    ordered_json j;
    j["kind"] = "frame_relation";
    j["type"] = to_string(rel.type);
    j["source"] = rel.source;
    j["target"] = rel.target;
    out << j.dump() << '\n';
  }
  for (const auto &lu : store.lexical_units()) {
    ordered_json j;
    j["kind"] = "lexical_unit";
    j["lemma"] = lu.lemma;
    j["pos"] = to_string(lu.pos);
    j["frame"] = lu.frame;
    j["word_forms"] = lu.word_forms;
    out << j.dump() << '\n';
  }
  for (const auto &q : store.qualia()) {
    ordered_json j;
    j["kind"] = "qualia_relation";
    j["source_lu"] = lu_key_json(q.source_lu);
    j["target_lu"] = lu_key_json(q.target_lu);
    j["frame"] = q.mediating_frame;
    j["quale"] = to_string(q.quale);
    out << j.dump() << '\n';
  }
  return out.str();
}

}  // namespace framewatch
