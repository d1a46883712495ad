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

#include "framewatch/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace framewatch {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::vector<SetId> kNoSets;
const std::vector<LemmaPosting> kNoPostings;

std::string get_string(const json &obj, const char *key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw ParseError(line, std::string("missing or non-string field \"") + key +
                               "\"");
  }
  return it->get<std::string>();
}

std::uint32_t get_uint(const json &obj, const char *key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_unsigned()) {
    throw ParseError(line, std::string("missing or non-integer field \"") +
                               key + "\"");
  }
  return it->get<std::uint32_t>();
}

TokenRange get_range(const json &obj, const char *key, std::size_t line,
                     std::size_t token_count) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array() || it->size() != 2 ||
      !(*it)[0].is_number_unsigned() || !(*it)[1].is_number_unsigned()) {
    throw ParseError(line, std::string("field \"") + key +
                               "\" must be a [begin, end] pair");
  }
  TokenRange r{(*it)[0].get<std::uint32_t>(), (*it)[1].get<std::uint32_t>()};
  if (r.begin >= r.end || r.end > token_count) {
    throw ParseError(line, std::string("range \"") + key + "\" [" +
                               std::to_string(r.begin) + ", " +
                               std::to_string(r.end) +
                               ") is empty or outside the sentence");
  }
  return r;
}

ordered_json range_json(const TokenRange &r) {
  return ordered_json::array({r.begin, r.end});
}

void parse_sentence_line(Corpus &corpus, const std::string &line,
                         std::size_t lineno) {
  json rec;
  try {
    rec = json::parse(line);
  } catch (const json::parse_error &e) {
    throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
  }
  if (!rec.is_object()) throw ParseError(lineno, "record must be an object");

  Sentence s;
  s.doc_id = get_string(rec, "doc_id", lineno);
  s.sent_id = get_string(rec, "sent_id", lineno);
  std::string tag = get_string(rec, "field_tag", lineno);
  auto ftag = parse_field_tag(tag);
  if (!ftag) throw ParseError(lineno, "invalid field_tag \"" + tag + "\"");
  s.field_tag = *ftag;

  auto toks = rec.find("tokens");
  if (toks == rec.end() || !toks->is_array() || toks->empty()) {
    throw ParseError(lineno, "sentence must have a non-empty token list");
  }
  for (const auto &t : *toks) {
    if (!t.is_object()) throw ParseError(lineno, "token must be an object");
    Token tok;
    tok.surface = get_string(t, "surface", lineno);
    tok.lemma = get_string(t, "lemma", lineno);
    std::string pos = get_string(t, "pos", lineno);
    auto p = parse_token_pos(pos);
    if (!p) throw ParseError(lineno, "invalid pos \"" + pos + "\"");
    tok.pos = *p;
    if (pos != to_string(*p)) tok.tag = pos;
    tok.char_start = get_uint(t, "start", lineno);
    tok.char_end = get_uint(t, "end", lineno);
    if (tok.char_start >= tok.char_end) {
      throw ParseError(lineno, "token \"" + tok.surface +
                                   "\" has an empty character range");
    }
    if (!s.tokens.empty() && tok.char_start < s.tokens.back().char_end) {
      throw ParseError(lineno, "token \"" + tok.surface +
                                   "\" overlaps or precedes its predecessor");
    }
    s.tokens.push_back(std::move(tok));
  }

  std::vector<AnnotationSet> sets;
  auto jsets = rec.find("sets");
  if (jsets != rec.end()) {
    if (!jsets->is_array()) throw ParseError(lineno, "\"sets\" must be an array");
    for (const auto &js : *jsets) {
      if (!js.is_object()) throw ParseError(lineno, "set must be an object");
      AnnotationSet a;
      a.frame_name = get_string(js, "frame", lineno);
      a.target = get_range(js, "target", lineno, s.tokens.size());
      if (auto lu = js.find("lu"); lu != js.end()) {
        if (!lu->is_string()) throw ParseError(lineno, "\"lu\" must be a string");
        a.lu_label = lu->get<std::string>();
      }
      if (auto fes = js.find("fes"); fes != js.end()) {
        if (!fes->is_array()) throw ParseError(lineno, "\"fes\" must be an array");
        for (const auto &jf : *fes) {
          if (!jf.is_object()) throw ParseError(lineno, "fe must be an object");
          a.fes.push_back({get_string(jf, "role", lineno),
                           get_range(jf, "span", lineno, s.tokens.size())});
        }
      }
      sets.push_back(std::move(a));
    }
  }
  corpus.append(std::move(s), std::move(sets), lineno);
}

}  // namespace

std::string_view to_string(FieldTag t) {
  switch (t) {
    case FieldTag::S: return "S";
    case FieldTag::O: return "O";
    case FieldTag::A: return "A";
    case FieldTag::P: return "P";
    case FieldTag::other: return "other";
  }
  return "other";
}

std::optional<FieldTag> parse_field_tag(std::string_view s) {
  if (s == "S") return FieldTag::S;
  if (s == "O") return FieldTag::O;
  if (s == "A") return FieldTag::A;
  if (s == "P") return FieldTag::P;
  if (s == "other") return FieldTag::other;
  return std::nullopt;
}

std::optional<Pos> parse_token_pos(std::string_view s) {
  if (auto p = parse_pos(s)) return p;
  if (s == "NOUN" || s == "PROPN") return Pos::n;
  if (s == "VERB" || s == "AUX") return Pos::v;
  if (s == "ADJ") return Pos::a;
  if (s == "ADV") return Pos::adv;
  static constexpr std::string_view kOtherUpos[] = {
      "ADP", "CCONJ", "SCONJ", "DET", "INTJ", "NUM",
      "PART", "PRON", "PUNCT", "SYM", "X"};
  for (auto u : kOtherUpos) {
    if (s == u) return Pos::other;
  }
  return std::nullopt;
}

std::string Sentence::text() const {
  if (tokens.empty()) return {};
  const std::uint32_t base = tokens.front().char_start;
  std::string out(tokens.back().char_end - base, ' ');
  for (const auto &t : tokens) {
    std::size_t width = t.char_end - t.char_start;
    out.replace(t.char_start - base, width,
                t.surface.substr(0, width) +
                    std::string(width - std::min(width, t.surface.size()), ' '));
  }
  return out;
}

CharSpan Sentence::char_span(const TokenRange &r) const {
  const std::uint32_t base = tokens.front().char_start;
  return {tokens.at(r.begin).char_start - base,
          tokens.at(r.end - 1).char_end - base};
}

std::optional<SentenceIndex> Corpus::find(std::string_view doc_id,
                                          std::string_view sent_id) const {
  auto it = by_key_.find({std::string(doc_id), std::string(sent_id)});
  if (it == by_key_.end()) return std::nullopt;
  return it->second;
}

SentenceIndex Corpus::append(Sentence sentence, std::vector<AnnotationSet> sets,
                             std::size_t line) {
  auto key = std::make_pair(sentence.doc_id, sentence.sent_id);
  if (by_key_.count(key)) {
    throw ParseError(line, "duplicate sentence (" + sentence.doc_id + ", " +
                               sentence.sent_id + ")");
  }
  const auto idx = static_cast<SentenceIndex>(sentences_.size());
  sentence.sets.clear();
  for (auto &a : sets) {
    a.id = static_cast<SetId>(sets_.size());
    a.sentence = idx;
    sentence.sets.push_back(a.id);
    sets_.push_back(std::move(a));
  }
  by_key_.emplace(std::move(key), idx);
  sentences_.push_back(std::move(sentence));
  return idx;
}

Corpus read_corpus(std::istream &in) {
  Corpus corpus;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    parse_sentence_line(corpus, line, lineno);
  }
  return corpus;
}

Corpus read_corpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path);
  return read_corpus(in);
}

std::vector<Warning> resolve_against(Corpus &corpus, const FrameStore &store) {
  std::vector<Warning> warnings;
  for (auto &a : corpus.sets_) {
    const Sentence &s = corpus.sentences_[a.sentence];
    auto warn = [&](std::string msg) {
      warnings.push_back({0, s.doc_id, s.sent_id, std::move(msg)});
    };
    a.frame = store.find_frame(a.frame_name);
    a.lu.reset();
    if (!a.frame) {
      warn("annotation set " + std::to_string(a.id) + ": unknown frame \"" +
           a.frame_name + "\" (kept, excluded from matching)");
      continue;
    }
    for (const auto &fe : a.fes) {
      if (!store.has_role(*a.frame, fe.role)) {
        warn("annotation set " + std::to_string(a.id) + ": frame \"" +
             a.frame_name + "\" has no element \"" + fe.role + "\"");
      }
    }
    if (a.lu_label) {
      const std::string &label = *a.lu_label;
      auto dot = label.rfind('.');
      std::optional<Pos> pos;
      if (dot != std::string::npos && dot > 0) pos = parse_pos(label.substr(dot + 1));
      if (!pos) {
        warn("annotation set " + std::to_string(a.id) + ": malformed lu \"" +
             label + "\"");
        continue;
      }
      if (const auto *lu = store.infer_lu(label.substr(0, dot), *pos, a.frame_name)) {
        a.lu = lu->id;
      } else {
        warn("annotation set " + std::to_string(a.id) + ": lu \"" + label +
             "\" is not listed under frame \"" + a.frame_name + "\"");
      }
    } else {
      std::string lemma;
      for (std::uint32_t t = a.target.begin; t < a.target.end; ++t) {
        if (!lemma.empty()) lemma += ' ';
        lemma += s.tokens[t].lemma;
      }
      const Pos pos = s.tokens[a.target.begin].pos;
      if (const auto *lu = store.infer_lu(lemma, pos, a.frame_name)) {
        a.lu = lu->id;
      }
    }
  }
  return warnings;
}

IngestResult ingest(std::istream &in, const FrameStore &store) {
  IngestResult r{read_corpus(in), {}};
  r.warnings = resolve_against(r.corpus, store);
  return r;
}

IngestResult ingest(const std::string &path, const FrameStore &store) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path);
  return ingest(in, store);
}

std::string serialize_sentence(const Corpus &corpus, SentenceIndex i) {
  const Sentence &s = corpus.sentence(i);
  ordered_json j;
  j["doc_id"] = s.doc_id;
  j["sent_id"] = s.sent_id;
  j["field_tag"] = to_string(s.field_tag);
  ordered_json toks = ordered_json::array();
  for (const auto &t : s.tokens) {
    ordered_json jt;
    jt["surface"] = t.surface;
    jt["lemma"] = t.lemma;
    jt["pos"] = t.tag.empty() ? std::string(to_string(t.pos)) : t.tag;
    jt["start"] = t.char_start;
    jt["end"] = t.char_end;
    toks.push_back(std::move(jt));
  }
  j["tokens"] = std::move(toks);
  ordered_json sets = ordered_json::array();
  for (SetId id : s.sets) {
    const AnnotationSet &a = corpus.set(id);
    ordered_json js;
    js["frame"] = a.frame_name;
    js["target"] = range_json(a.target);
    if (a.lu_label) js["lu"] = *a.lu_label;
    ordered_json fes = ordered_json::array();
    for (const auto &fe : a.fes) {
      ordered_json jf;
      jf["role"] = fe.role;
      jf["span"] = range_json(fe.span);
      fes.push_back(std::move(jf));
    }
    js["fes"] = std::move(fes);
    sets.push_back(std::move(js));
  }
  j["sets"] = std::move(sets);
  return j.dump();
}

std::string serialize_corpus(const Corpus &corpus) {
  std::string out;
  for (SentenceIndex i = 0; i < corpus.sentences().size(); ++i) {
    out += serialize_sentence(corpus, i);
    out += '\n';
  }
  return out;
}

const std::vector<SetId> &CorpusIndex::sets_for_frame(
    std::string_view frame) const {
  auto it = by_frame_.find(frame);
  return it == by_frame_.end() ? kNoSets : it->second;
}

const std::vector<LemmaPosting> &CorpusIndex::postings_for_lemma(
    std::string_view lemma) const {
  auto it = by_lemma_.find(lemma);
  return it == by_lemma_.end() ? kNoPostings : it->second;
}

CorpusIndex build_index(const Corpus &corpus) {
  CorpusIndex idx;
  const auto &sentences = corpus.sentences();
  idx.order_.resize(sentences.size());
  std::iota(idx.order_.begin(), idx.order_.end(), SentenceIndex{0});
  std::sort(idx.order_.begin(), idx.order_.end(),
            [&](SentenceIndex a, SentenceIndex b) {
              const auto &x = sentences[a];
              const auto &y = sentences[b];
              return std::tie(x.doc_id, x.sent_id) < std::tie(y.doc_id, y.sent_id);
            });
  idx.rank_.resize(sentences.size());
  for (std::uint32_t r = 0; r < idx.order_.size(); ++r) idx.rank_[idx.order_[r]] = r;

  idx.by_sentence_.resize(sentences.size());
  for (SentenceIndex si : idx.order_) {
    const Sentence &s = sentences[si];
    idx.by_sentence_[si] = s.sets;
    std::sort(idx.by_sentence_[si].begin(), idx.by_sentence_[si].end());
    for (SetId id : idx.by_sentence_[si]) {
      idx.by_frame_[corpus.set(id).frame_name].push_back(id);
    }
    for (std::uint32_t t = 0; t < s.tokens.size(); ++t) {
      idx.by_lemma_[s.tokens[t].lemma].push_back({si, t});
    }
  }
  return idx;
}

CorpusStats stats(const Corpus &corpus) {
  if (corpus.empty()) throw Error("corpus statistics undefined for an empty corpus");
  CorpusStats st;
  st.sentence_count = corpus.sentences().size();
  st.set_count = corpus.sets().size();
  for (const auto &s : corpus.sentences()) st.word_count += s.tokens.size();
  st.sets_per_sentence =
      static_cast<double>(st.set_count) / static_cast<double>(st.sentence_count);
  return st;
}

}  // namespace framewatch
