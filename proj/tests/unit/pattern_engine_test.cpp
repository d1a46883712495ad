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

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/fixtures.hpp"

namespace fw = framewatch;
using fwtest::data_path;
using fwtest::fixture_store;

namespace {

fw::CompileResult compile_text(const std::string &text) {
  std::istringstream in(text);
  return fw::compile_patterns(in, fixture_store());
}

const char *kPhysical =
    R"({"id":"phys","name":"Physical violence","scenario":"general_violence",)"
    R"("anchor":{"frames":["Cause_harm"]},)"
    R"("roles":[{"role":"Agent","filler":{"frames":["Kinship","Personal_relationship"]}}]})";

fw::Corpus load(const std::string &relative) {
  return fw::ingest(data_path(relative), fixture_store()).corpus;
}

std::string local_of(const fw::Corpus &c, fw::SetId id) {
  const auto &sets = c.sentence(c.set(id).sentence).sets;
  return std::to_string(std::find(sets.begin(), sets.end(), id) - sets.begin());
}

std::vector<std::string> golden_rows() {
  std::ifstream in(std::string(FRAMEWATCH_DATA_DIR) + "/../tests/golden/fixture_matches.tsv");
  std::vector<std::string> rows;
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line[0] != '#') rows.push_back(line);
  }
  return rows;
}

std::string row_of(const fw::Match &m, const fw::Corpus &c) {
  const auto &s = c.sentence(m.sentence);
  std::string out = m.pattern_id + "\t" + s.doc_id + "\t" + s.sent_id + "\t" + local_of(c, m.anchor) + "\t";
  for (std::size_t i = 0; i < m.bindings.size(); ++i) {
    if (i) out += ",";
    out += m.bindings[i].role + "=" + local_of(c, m.bindings[i].filler);
  }
  return out;
}

std::vector<fw::Pattern> random_patterns(std::mt19937_64 &rng, std::size_t n) {
  std::vector<fw::Pattern> out;
  for (std::size_t i = 0; i < n; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "r%02zu", i);
    out.push_back(fwtest::random_pattern(fixture_store(), rng, id));
  }
  return out;
}

}  // namespace

TEST_SUITE("pattern_engine") {

TEST_CASE("the violence pack compiles to eight patterns") {
  auto r = fw::compile_patterns(data_path("patterns/gbv_pack.jsonl"), fixture_store());
  REQUIRE(r.patterns.size() == 8);
  CHECK(r.warnings.empty());
  CHECK(r.patterns[4].name ==
        "Physical violence by family member or person related to the victim");
  CHECK(r.patterns[4].description() ==
        "Cause_harm [Agent <- Kinship | Personal_relationship]");
  CHECK_FALSE(r.patterns[4].reconstructed);
  CHECK(r.patterns[0].reconstructed);
}

TEST_CASE("the psychological pack compiles with whitelists") {
  auto r = fw::compile_patterns(data_path("patterns/psychological.jsonl"), fixture_store());
  REQUIRE(r.patterns.size() == 3);
  REQUIRE(r.patterns[0].anchor.lu_ids);
  CHECK(r.patterns[0].anchor.lu_ids->size() == 1);
  CHECK(r.patterns[1].anchor.lu_ids->size() == 2);
  CHECK(r.patterns[0].description() ==
        "Domain {psicológico.a} [Predicate <- Experience_bodily_harm | Cause_harm | Violence_scenario]");
}

TEST_CASE("a misspelled frame is a compile error with a suggestion") {
  std::string text = kPhysical;
  text.replace(text.find("Cause_harm"), 10, "Kause_harm");
  try {
    compile_text(text);
    FAIL("expected a compile error");
  } catch (const fw::CompileError &e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(e.problems()[0].find("did you mean \"Cause_harm\"") != std::string::npos);
  }
}

TEST_CASE("expanding Undergoing over inheritance sources reaches bodily harm") {
  auto r = compile_text(
      R"({"id":"u","name":"u","anchor":{"frames":["Undergoing"],)"
      R"("expand":{"relation":"inheritance","direction":"sources"}}})");
  CHECK(r.patterns[0].anchor.frame_names ==
        std::set<std::string>{"Undergoing", "Experience_bodily_harm"});
}

TEST_CASE("role checks against the anchor frames") {
  CHECK_THROWS_AS(compile_text(
                      R"({"id":"x","name":"x","anchor":{"frames":["Fear"]},)"
                      R"("roles":[{"role":"Agent","filler":{"frames":["Kinship"]}}]})"),
                  fw::CompileError);
  auto r = compile_text(
      R"({"id":"x","name":"x","anchor":{"frames":["Cause_harm","Fear"]},)"
      R"("roles":[{"role":"Agent","filler":{"frames":["Kinship"]}}]})");
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("Fear") != std::string::npos);
}

TEST_CASE("compile problems are collected across lines") {
  std::string text = std::string(kPhysical) + "\n" + kPhysical + "\n" +
                     R"({"id":"e","name":"e","anchor":{"frames":[]}})" + "\n" +
                     R"({"id":"w","name":"w","anchor":{"frames":["Fear"],"lus":[["bater","v"]]}})";
  try {
    compile_text(text);
    FAIL("expected a compile error");
  } catch (const fw::CompileError &e) {
    CHECK(e.problems().size() == 3);
  }
}

TEST_CASE("malformed pattern lines are parse errors") {
  for (const char *text : {"{", R"({"id":"a","anchor":{"frames":["Fear"]}})",
                           R"({"id":"a","name":"a"})",
                           R"({"id":"a","name":"a","anchor":{"frames":"Fear"}})",
                           R"({"id":"a","name":"a","anchor":{"frames":["Fear"],"expand":{"relation":"kin","direction":"sources"}}})",
                           R"({"id":"a","name":"a","anchor":{"frames":["Fear"],"lus":[["medo"]]}})"}) {
    CHECK_THROWS_AS(compile_text(text), fw::ParseError);
  }
}

TEST_CASE("husband sentence: agent bound over the husband set") {
  auto c = load("examples/husband_hits_her.jsonl");
  auto p = compile_text(kPhysical).patterns;
  auto ms = fw::match_sentence(c, 0, p[0]);
  REQUIRE(ms.size() == 1);
  CHECK(c.set(ms[0].anchor).frame_name == "Cause_harm");
  REQUIRE(ms[0].bindings.size() == 1);
  const auto &b = ms[0].bindings[0];
  CHECK(b.role == "Agent");
  CHECK(c.set(b.filler).frame_name == "Personal_relationship");
  const auto &s = c.sentence(0);
  auto filler = s.char_span(c.set(b.filler).target);
  CHECK(s.text().substr(filler.begin, filler.size()) == "marido");
  CHECK(b.fe_span.contains(c.set(b.filler).target));
}

TEST_CASE("husband sentence: no kinship victim") {
  auto c = load("examples/husband_hits_her.jsonl");
  auto p = compile_text(
      R"({"id":"v","name":"v","anchor":{"frames":["Cause_harm"]},)"
      R"("roles":[{"role":"Victim","filler":{"frames":["Kinship"]}}]})");
  CHECK(fw::match_sentence(c, 0, p.patterns[0]).empty());
}

TEST_CASE("two satisfying anchors in one sentence give two matches") {
  auto c = load("corpus/fixture.jsonl");
  auto p = compile_text(kPhysical).patterns;
  auto s = *c.find("d08", "s2");
  CHECK(fw::match_sentence(c, s, p[0]).size() == 2);
}

TEST_CASE("the filler must sit inside the role span unless overlap is allowed") {
  fw::Corpus c;
  fw::Sentence s;
  s.doc_id = "d";
  s.sent_id = "1";
  for (std::uint32_t i = 0; i < 4; ++i) s.tokens.push_back({"w", "w", fw::Pos::n, 2 * i, 2 * i + 1, {}});
  fw::AnnotationSet harm, kin;
  harm.frame_name = "Cause_harm";
  harm.target = {0, 1};
  harm.fes = {{"Agent", {1, 3}}};
  kin.frame_name = "Kinship";
  kin.target = {2, 4};
  c.append(s, {harm, kin});
  fw::resolve_against(c, fixture_store());
  auto p = compile_text(kPhysical).patterns[0];
  CHECK(fw::match_sentence(c, 0, p, fw::FillerAlignment::contain).empty());
  CHECK(fw::match_sentence(c, 0, p, fw::FillerAlignment::any_overlap).size() == 1);
}

TEST_CASE("an anchor never fills its own role") {
  fw::Corpus c;
  fw::Sentence s;
  s.doc_id = "d";
  s.sent_id = "1";
  s.tokens = {{"pai", "pai", fw::Pos::n, 0, 3, {}}};
  fw::AnnotationSet a;
  a.frame_name = "Cause_harm";
  a.target = {0, 1};
  a.fes = {{"Agent", {0, 1}}};
  c.append(s, {a});
  fw::resolve_against(c, fixture_store());
  auto p = compile_text(
      R"({"id":"self","name":"self","anchor":{"frames":["Cause_harm"]},)"
      R"("roles":[{"role":"Agent","filler":{"frames":["Cause_harm"]}}]})");
  CHECK(fw::match_sentence(c, 0, p.patterns[0]).empty());
}

TEST_CASE("witness is the leftmost filler, ties to the smaller set id") {
  auto c = load("corpus/fixture.jsonl");
  auto p = compile_text(kPhysical).patterns;
  auto s = *c.find("d08", "s1");
  auto ms = fw::match_sentence(c, s, p[0]);
  REQUIRE(ms.size() == 1);
  CHECK(c.set(ms[0].bindings[0].filler).frame_name == "Personal_relationship");
}

TEST_CASE("empty pattern list gives no matches") {
  auto c = load("corpus/fixture.jsonl");
  CHECK(fw::match_corpus(c, fw::build_index(c), {}).empty());
}

TEST_CASE("fixture corpus matches the hand-checked golden list") {
  auto c = load("corpus/fixture.jsonl");
  auto patterns = fw::compile_patterns(data_path("patterns/gbv_pack.jsonl"), fixture_store()).patterns;
  auto psych = fw::compile_patterns(data_path("patterns/psychological.jsonl"), fixture_store()).patterns;
  patterns.insert(patterns.end(), psych.begin(), psych.end());
  auto ms = fw::match_corpus(c, fw::build_index(c), patterns);
  std::vector<std::string> rows;
  for (const auto &m : ms) rows.push_back(row_of(m, c));
  CHECK(rows == golden_rows());
  CHECK(ms == fw::match_corpus_bruteforce(c, fixture_store(), patterns));
}

TEST_CASE("symptom sentence ingests with six sets and matches a body part role") {
  auto r = fw::ingest(data_path("examples/chest_pain.jsonl"), fixture_store());
  CHECK(r.warnings.empty());
  REQUIRE(r.corpus.sets().size() == 6);
  auto p = fw::compile_patterns(data_path("patterns/examples.jsonl"), fixture_store()).patterns;
  auto ms = fw::match_corpus(r.corpus, fw::build_index(r.corpus), p);
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].pattern_id == "ex-symptoms");
  CHECK(r.corpus.set(ms[0].anchor).frame_name == "Symptoms");
  CHECK(r.corpus.set(ms[0].bindings[0].filler).frame_name == "Body_parts");
}

TEST_CASE("match record fields") {
  auto c = load("examples/husband_hits_her.jsonl");
  auto p = compile_text(kPhysical).patterns;
  auto ms = fw::match_sentence(c, 0, p[0]);
  REQUIRE(ms.size() == 1);
  CHECK(fw::match_id(ms[0], c) == "phys#d01#s1#1");
  auto j = nlohmann::json::parse(fw::match_record(ms[0], c, fixture_store(), p[0]));
  CHECK(j["match_id"] == "phys#d01#s1#1");
  CHECK(j["text"] == "Paciente relata que o marido bate nela quando fica nervoso.");
  CHECK(j["anchor"]["frame"] == "Cause_harm");
  CHECK(j["anchor"]["lu"] == "bater.v");
  CHECK(j["bindings"][0]["role"] == "Agent");
  CHECK(j["bindings"][0]["span"] == nlohmann::json::array({3, 5}));
  CHECK(j["bindings"][0]["filler_frame"] == "Personal_relationship");
}

TEST_CASE("retention boundary") {
  auto part = fw::retention_filter({{"a", 29}, {"b", 30}, {"c", 0}, {"d", 31}});
  CHECK(part.kept == std::vector<std::string>{"b", "d"});
  CHECK(part.discarded == std::vector<std::string>{"a", "c"});
  CHECK(fw::retention_filter({{"a", 5}}, 5).kept.size() == 1);
}

TEST_CASE("count_matches lists patterns without matches") {
  auto p = compile_text(kPhysical).patterns;
  auto counts = fw::count_matches({}, p);
  CHECK(counts == std::map<std::string, std::size_t>{{"phys", 0}});
}

TEST_CASE("inspection sample") {
  std::vector<fw::Match> ms;
  for (fw::SetId i = 0; i < 1000; ++i) ms.push_back({"p", 0, i, {}});
  std::vector<fw::Match> fifty(ms.begin(), ms.begin() + 50);
  CHECK(fw::sample_for_inspection(fifty, 100, 1) == fifty);

  auto a = fw::sample_for_inspection(ms, 100, 42);
  CHECK(a.size() == 100);
  CHECK(a == fw::sample_for_inspection(ms, 100, 42));
  CHECK(a != fw::sample_for_inspection(ms, 100, 43));
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1].anchor < a[i].anchor);
}

TEST_CASE("inspection sample is uniform within three sigma") {
  // Each of 1000 items is drawn with p = 0.1 per trial.
  std::vector<fw::Match> ms;
  for (fw::SetId i = 0; i < 1000; ++i) ms.push_back({"p", 0, i, {}});
  std::vector<int> hits(1000, 0);
  const int trials = 10000;
  for (int t = 0; t < trials; ++t) {
    for (const auto &m : fw::sample_for_inspection(ms, 100, t)) ++hits[m.anchor];
  }
  const double mean = trials * 0.1;
  const double sigma = std::sqrt(trials * 0.1 * 0.9);
  // Per item, |x - mean| <= 3 sigma fails with p ~ 0.0027, so expect a few
  // outliers among 1000; the chi-square over all items must stay in range.
  int outside = 0;
  double chi2 = 0;
  for (int h : hits) {
    outside += std::abs(h - mean) > 3 * sigma;
    chi2 += (h - mean) * (h - mean) / (mean * 0.9);
  }
  CHECK(outside <= 10);
  // 999 degrees of freedom: mean 999, sd ~44.7.
  CHECK(std::abs(chi2 - 999) < 3 * 44.7);
}

TEST_CASE("property: indexed, brute-force and naive matchers agree") {
  std::mt19937_64 rng(20260);
  std::size_t total = 0, with_roles = 0;
  for (int trial = 0; trial < 20; ++trial) {
    fwtest::CorpusShape shape{fwtest::pick(rng, 1, 300), 6, 12, 0.03,
                              trial % 2 ? 10u : 0u};
    auto c = fwtest::random_corpus(fixture_store(), rng, shape);
    auto patterns = random_patterns(rng, 20);
    auto idx = fw::build_index(c);
    for (auto align : {fw::FillerAlignment::contain, fw::FillerAlignment::any_overlap}) {
      auto indexed = fw::match_corpus(c, idx, patterns, {align, 1});
      CHECK(indexed == fw::match_corpus_bruteforce(c, fixture_store(), patterns, align));
      CHECK(indexed == fwtest::naive_matches(c, fixture_store(), patterns, align));
      total += indexed.size();
      for (const auto &m : indexed) with_roles += !m.bindings.empty();
    }
  }
  MESSAGE("matches compared: " << total << ", with bindings: " << with_roles);
  CHECK(with_roles > 100);
}

TEST_CASE("property: removing a role never removes a match") {
  std::mt19937_64 rng(31);
  std::size_t compared = 0;
  for (int trial = 0; trial < 20; ++trial) {
    auto c = fwtest::random_corpus(fixture_store(), rng, {200, 6, 12, 0.0, 10});
    auto idx = fw::build_index(c);
    for (auto &p : random_patterns(rng, 10)) {
      if (p.roles.empty()) continue;
      auto with = fw::match_corpus(c, idx, {p});
      auto fewer = p;
      fewer.roles.erase(fewer.roles.begin() + fwtest::pick(rng, 0, fewer.roles.size() - 1));
      auto without = fw::match_corpus(c, idx, {fewer});
      std::set<fw::SetId> a, b;
      for (const auto &m : with) a.insert(m.anchor);
      for (const auto &m : without) b.insert(m.anchor);
      CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
      compared += a.size();
    }
  }
  CHECK(compared > 0);
}

TEST_CASE("property: anchors and bindings are sound") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = fwtest::random_corpus(fixture_store(), rng, {300, 6, 12, 0.02, 10});
    auto patterns = random_patterns(rng, 20);
    std::map<std::string, const fw::Pattern *> by_id;
    for (const auto &p : patterns) by_id[p.id] = &p;
    for (const auto &m : fw::match_corpus(c, fw::build_index(c), patterns)) {
      const auto &p = *by_id.at(m.pattern_id);
      const auto &anchor = c.set(m.anchor);
      CHECK(p.anchor.frame_names.count(anchor.frame_name));
      CHECK(m.sentence == anchor.sentence);
      REQUIRE(m.bindings.size() == p.roles.size());
      for (std::size_t i = 0; i < m.bindings.size(); ++i) {
        const auto &filler = c.set(m.bindings[i].filler);
        CHECK(m.bindings[i].fe_span.contains(filler.target));
        CHECK(filler.sentence == m.sentence);
        CHECK(p.roles[i].filler.frame_names.count(filler.frame_name));
      }
    }
  }
}

TEST_CASE("property: worker count does not change the output") {
  std::mt19937_64 rng(41);
  auto c = fwtest::random_corpus(fixture_store(), rng, {2000, 6, 12, 0.02, 10});
  auto patterns = random_patterns(rng, 20);
  auto idx = fw::build_index(c);
  auto one = fw::match_corpus(c, idx, patterns, {fw::FillerAlignment::contain, 1});
  CHECK_FALSE(one.empty());
  for (unsigned w : {2u, 3u, 8u, 64u}) {
    CHECK(fw::match_corpus(c, idx, patterns, {fw::FillerAlignment::contain, w}) == one);
  }
}

}  // TEST_SUITE
