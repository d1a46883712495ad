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

// The frame network: frames, frame elements, typed frame-to-frame relations,
// lexical units with their word forms, and ternary qualia relations.
//
// Records refer to each other by frame name (the human-readable key used in
// every file format). A FrameStore is built from raw records without
// requiring them to be consistent; validate() reports every broken
// invariant and load_store() refuses to hand out a store that has any.

#ifndef FRAMEWATCH_FRAME_STORE_HPP_
#define FRAMEWATCH_FRAME_STORE_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "framewatch/text_util.hpp"

namespace framewatch {

using FrameId = std::uint32_t;
using LuId = std::uint32_t;

enum class Pos { n, v, a, adv, other };
enum class Coreness { core, peripheral };
enum class RelationType {
  inheritance,
  subframe,
  use,
  causative_of,
  inchoative_of,
  precedence,
  perspective_of,
  see_also,
};
enum class Direction { sources, targets };
enum class Quale { agentive, formal, constitutive, telic };

std::string_view to_string(Pos p);
std::string_view to_string(Coreness c);
std::string_view to_string(RelationType r);
std::string_view to_string(Direction d);
std::string_view to_string(Quale q);

// Strict parsers over the enum spellings above; nullopt when unknown.
std::optional<Pos> parse_pos(std::string_view s);
std::optional<Coreness> parse_coreness(std::string_view s);
std::optional<RelationType> parse_relation_type(std::string_view s);
std::optional<Direction> parse_direction(std::string_view s);
std::optional<Quale> parse_quale(std::string_view s);

struct Frame {
  FrameId id = 0;
  std::string name;
  std::string definition;
  std::set<std::string> domain_tags;
  friend bool operator==(const Frame &, const Frame &) = default;
};

struct FrameElement {
  std::string frame;
  std::string name;
  std::string definition;
  Coreness coreness = Coreness::core;
  friend bool operator==(const FrameElement &, const FrameElement &) = default;
};

// source is the more specific / dependent side of the edge.
struct FrameRelation {
  RelationType type = RelationType::inheritance;
  std::string source;
  std::string target;
  friend bool operator==(const FrameRelation &,
                         const FrameRelation &) = default;
};

struct LexicalUnit {
  LuId id = 0;
  std::string lemma;
  Pos pos = Pos::other;
  std::string frame;
  std::set<std::string> word_forms;

  // "lemma.pos", e.g. "bater.v".
  std::string label() const;
  friend bool operator==(const LexicalUnit &, const LexicalUnit &) = default;
};

// Identifies a lexical unit by its unique key.
struct LuKey {
  std::string lemma;
  Pos pos = Pos::other;
  std::string frame;
  friend auto operator<=>(const LuKey &, const LuKey &) = default;
};

struct QualiaRelation {
  LuKey source_lu;
  LuKey target_lu;
  std::string mediating_frame;
  Quale quale = Quale::formal;
  friend bool operator==(const QualiaRelation &,
                         const QualiaRelation &) = default;
};

// Raw, possibly inconsistent store contents.
struct StoreRecords {
  std::vector<Frame> frames;
  std::vector<FrameElement> elements;
  std::vector<FrameRelation> relations;
  std::vector<LexicalUnit> lexical_units;
  std::vector<QualiaRelation> qualia;
};

enum class ViolationKind {
  duplicate_frame,
  empty_definition,
  duplicate_frame_element,
  dangling_reference,
  self_loop,
  inheritance_cycle,
  duplicate_lexical_unit,
  lemma_not_in_word_forms,
  duplicate_qualia_relation,
};
std::string_view to_string(ViolationKind k);

struct Violation {
  ViolationKind kind;
  // Offending names; for inheritance_cycle the cycle in edge order with the
  // first frame repeated at the end.
  std::vector<std::string> subjects;
  std::string message;
};

class LoadError : public Error {
 public:
  explicit LoadError(std::vector<Violation> violations);
  const std::vector<Violation> &violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class FrameStore {
 public:
  FrameStore() = default;

  // Canonicalizes ordering (frames by name, everything else by key) and
  // builds the lookup indexes. Never fails; inconsistencies are left for
  // validate() to report.
  static FrameStore from_records(StoreRecords records);

  const std::vector<Frame> &frames() const { return records_.frames; }
  const std::vector<FrameElement> &frame_elements() const {
    return records_.elements;
  }
  const std::vector<FrameRelation> &relations() const {
    return records_.relations;
  }
  const std::vector<LexicalUnit> &lexical_units() const {
    return records_.lexical_units;
  }
  const std::vector<QualiaRelation> &qualia() const { return records_.qualia; }
  const StoreRecords &records() const { return records_; }

  std::optional<FrameId> find_frame(std::string_view name) const;
  const Frame &frame(FrameId id) const { return records_.frames.at(id); }
  const LexicalUnit &lexical_unit(LuId id) const {
    return records_.lexical_units.at(id);
  }

  std::vector<const FrameElement *> elements_of(FrameId id) const;
  bool has_role(FrameId id, std::string_view role) const;

  // Transitive closure over edges of one relation type, excluding `start`.
  // Throws Error for an unknown frame.
  std::set<std::string> closure(std::string_view start, RelationType type,
                                Direction direction) const;

  std::vector<const LexicalUnit *> lookup_lus(std::string_view lemma,
                                              Pos pos) const;

  // Exact (lemma, pos, frame) first; otherwise `lemma` is treated as a word
  // form and resolved to the LU of `frame` with the same pos.
  const LexicalUnit *infer_lu(std::string_view lemma, Pos pos,
                              std::string_view frame) const;

  // All (lemma, pos) pairs whose word forms contain the input, case-folded.
  std::set<std::pair<std::string, Pos>> resolve_word_form(
      std::string_view surface_or_lemma) const;

  std::vector<const QualiaRelation *> qualia_from(const LuKey &lu) const;

  friend bool operator==(const FrameStore &a, const FrameStore &b);

 private:
  StoreRecords records_;
  std::unordered_map<std::string, FrameId> frame_by_name_;
  std::vector<std::vector<std::size_t>> elements_by_frame_;
  // (type, frame) -> neighbours along source->target and target->source.
  std::map<std::pair<RelationType, FrameId>, std::vector<FrameId>> out_edges_;
  std::map<std::pair<RelationType, FrameId>, std::vector<FrameId>> in_edges_;
  std::multimap<std::pair<std::string, Pos>, LuId> lu_by_lemma_;
  std::unordered_map<std::string, std::set<std::pair<std::string, Pos>>>
      lemma_by_form_;
};

std::vector<Violation> validate(const FrameStore &store);

// Parses the JSON Lines store format. Throws ParseError (line-numbered).
StoreRecords parse_store(std::istream &in);

// Parses, builds and validates. Throws ParseError or LoadError.
FrameStore load_store(const std::string &path);
FrameStore load_store(std::istream &in);

// Canonical JSON Lines serialization; load -> serialize -> load round-trips.
std::string serialize_store(const FrameStore &store);

}  // namespace framewatch

#endif  // FRAMEWATCH_FRAME_STORE_HPP_
