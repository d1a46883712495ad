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

#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "support/fixtures.hpp"

namespace fw = framewatch;
using fwtest::data_path;
using fwtest::fixture_store;

namespace {

fw::IngestResult ingest_text(const std::string &text) {
  std::istringstream in(text);
  return fw::ingest(in, fixture_store());
}

std::string husband_line() {
  return fwtest::slurp(data_path("examples/husband_hits_her.jsonl"));
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("husband sentence ingests with three sets and no warnings") {
  auto r = ingest_text(husband_line());
  CHECK(r.warnings.empty());
  REQUIRE(r.corpus.sentences().size() == 1);
  const auto &s = r.corpus.sentence(0);
  CHECK(s.text() == "Paciente relata que o marido bate nela quando fica nervoso.");
  CHECK(s.sets.size() == 3);

  const auto &harm = r.corpus.set(s.sets[1]);
  CHECK(harm.frame_name == "Cause_harm");
  REQUIRE(harm.lu);
  CHECK(fixture_store().lexical_unit(*harm.lu).label() == "bater.v");
  REQUIRE(harm.fes.size() == 2);
  CHECK(harm.fes[0].role == "Agent");
  CHECK(s.text().substr(s.char_span(harm.fes[0].span).begin,
                        s.char_span(harm.fes[0].span).size()) == "o marido");
}

TEST_CASE("empty input gives an empty corpus") {
  auto r = ingest_text("");
  CHECK(r.corpus.empty());
  CHECK(r.warnings.empty());
  CHECK(fw::build_index(r.corpus).frame_index().empty());
}

TEST_CASE("unknown frame is kept with one warning") {
  std::string line = husband_line();
  line.replace(line.find("\"Statement\""), 11, "\"Statment\"");
  auto r = ingest_text(line);
  CHECK(r.warnings.size() == 1);
  CHECK(r.corpus.sets().size() == 3);
  CHECK_FALSE(r.corpus.set(0).frame);
}

TEST_CASE("unknown role and unlisted lu are warnings, not failures") {
  std::string line = husband_line();
  line.replace(line.find("\"Speaker\""), 9, "\"Talker\"");
  auto r = ingest_text(line);
  CHECK(r.warnings.size() == 1);

  auto j = nlohmann::json::parse(husband_line());
  j["sets"][1]["lu"] = "voar.v";
  auto r2 = ingest_text(j.dump());
  CHECK(r2.warnings.size() == 1);
  CHECK_FALSE(r2.corpus.set(1).lu);
}

TEST_CASE("malformed lines abort with their line number") {
  auto good = husband_line();
  auto j = nlohmann::json::parse(good);
  j["sent_id"] = "s2";
  j["sets"][0]["target"] = {5, 40};
  try {
    ingest_text(good + j.dump() + "\n");
    FAIL("expected a parse error");
  } catch (const fw::ParseError &e) {
    CHECK(e.line() == 2);
  }

  auto no_tokens = nlohmann::json::parse(good);
  no_tokens["tokens"] = nlohmann::json::array();
  no_tokens["sets"] = nlohmann::json::array();
  CHECK_THROWS_AS(ingest_text(no_tokens.dump()), fw::ParseError);

  auto backwards = nlohmann::json::parse(good);
  backwards["tokens"][1]["start"] = 0;
  CHECK_THROWS_AS(ingest_text(backwards.dump()), fw::ParseError);

  auto bad_tag = nlohmann::json::parse(good);
  bad_tag["field_tag"] = "Q";
  CHECK_THROWS_AS(ingest_text(bad_tag.dump()), fw::ParseError);
}

TEST_CASE("duplicate sentence key is rejected") {
  auto line = husband_line();
  CHECK_THROWS_AS(ingest_text(line + line), fw::ParseError);
}

TEST_CASE("index of the husband sentence has three frame keys") {
  auto r = ingest_text(husband_line());
  auto idx = fw::build_index(r.corpus);
  CHECK(idx.frame_index().size() == 3);
  CHECK(idx.sets_for_frame("Cause_harm").size() == 1);
  CHECK(idx.sets_for_frame("Fear").empty());
  CHECK(idx.postings_for_lemma("marido").size() == 1);
  CHECK(idx == fw::build_index(r.corpus));
}

TEST_CASE("two sentences sharing a frame give a posting list of two") {
  auto r = fw::ingest(data_path("corpus/fixture.jsonl"), fixture_store());
  auto idx = fw::build_index(r.corpus);
  CHECK(idx.sets_for_frame("Fear").size() == 2);
  CHECK(idx.sets_for_frame("Referral_scenario").size() == 1);
}

TEST_CASE("fixture stats") {
  auto r = fw::ingest(data_path("corpus/fixture.jsonl"), fixture_store());
  CHECK(r.warnings.size() == 1);
  auto st = fw::stats(r.corpus);
  CHECK(st.sentence_count == 20);
  CHECK(st.set_count == 60);
  CHECK(st.sets_per_sentence == doctest::Approx(3.0));
}

TEST_CASE("stats ratio and the empty-corpus error") {
  fw::Corpus c;
  CHECK_THROWS_AS(fw::stats(c), fw::Error);

  fw::Sentence s;
  s.doc_id = "d";
  s.sent_id = "1";
  s.tokens = {{"Dor", "dor", fw::Pos::n, 0, 3, {}}};
  c.append(s, {});
  CHECK(fw::stats(c).sets_per_sentence == 0.0);

  fw::AnnotationSet a;
  a.target = {0, 1};
  a.frame_name = "Symptoms";
  fw::Corpus two;
  s.sent_id = "x";
  two.append(s, {a, a});
  s.sent_id = "y";
  two.append(s, {a, a, a});
  CHECK(fw::stats(two).sets_per_sentence == doctest::Approx(2.5));
}

TEST_CASE("serialize after ingest reproduces the canonical form") {
  const std::string text = fwtest::slurp(data_path("corpus/fixture.jsonl"));
  auto r = ingest_text(text);
  const std::string once = fw::serialize_corpus(r.corpus);
  auto again = ingest_text(once);
  CHECK(fw::serialize_corpus(again.corpus) == once);

  // Field by field against the input records.
  std::istringstream a(text), b(once);
  std::string la, lb;
  while (std::getline(a, la) && std::getline(b, lb)) {
    auto ja = nlohmann::json::parse(la), jb = nlohmann::json::parse(lb);
    CHECK(ja["doc_id"] == jb["doc_id"]);
    CHECK(ja["tokens"] == jb["tokens"]);
    REQUIRE(ja["sets"].size() == jb["sets"].size());
    for (std::size_t i = 0; i < ja["sets"].size(); ++i) {
      CHECK(ja["sets"][i]["frame"] == jb["sets"][i]["frame"]);
      CHECK(ja["sets"][i]["target"] == jb["sets"][i]["target"]);
      CHECK(ja["sets"][i]["fes"] == jb["sets"][i]["fes"]);
    }
  }
}

TEST_CASE("random corpora round-trip through serialization") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = fwtest::random_corpus(fixture_store(), rng, {60, 6, 10, 0.05, 0});
    const std::string once = fw::serialize_corpus(c);
    auto again = ingest_text(once);
    CHECK(fw::serialize_corpus(again.corpus) == once);
  }
}

TEST_CASE("every posting points at a set carrying the indexed frame") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = fwtest::random_corpus(fixture_store(), rng, {800, 6, 12, 0.05, 0});
    auto idx = fw::build_index(c);
    std::size_t posted = 0;
    for (const auto &[frame, ids] : idx.frame_index()) {
      for (std::size_t i = 0; i < ids.size(); ++i) {
        REQUIRE(ids[i] < c.sets().size());
        CHECK(c.set(ids[i]).frame_name == frame);
        if (i) {
          const auto &p = c.sentence(c.set(ids[i - 1]).sentence);
          const auto &q = c.sentence(c.set(ids[i]).sentence);
          CHECK(std::tie(p.doc_id, p.sent_id, ids[i - 1]) < std::tie(q.doc_id, q.sent_id, ids[i]));
        }
      }
      posted += ids.size();
    }
    CHECK(posted == c.sets().size());

    std::size_t lemma_postings = 0, tokens = 0;
    std::set<std::string> lemmas;
    for (fw::SentenceIndex s = 0; s < c.sentences().size(); ++s) {
      CHECK(idx.sets_for_sentence(s) == c.sentence(s).sets);
      tokens += c.sentence(s).tokens.size();
      for (const auto &t : c.sentence(s).tokens) lemmas.insert(t.lemma);
    }
    for (const auto &l : lemmas) {
      for (const auto &p : idx.postings_for_lemma(l)) {
        CHECK(c.sentence(p.sentence).tokens.at(p.token).lemma == l);
        ++lemma_postings;
      }
    }
    CHECK(lemma_postings == tokens);
    CHECK(idx.lemma_count() == lemmas.size());
  }
}

TEST_CASE("stats equal a brute-force recount") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto c = fwtest::random_corpus(fixture_store(), rng, {fwtest::pick(rng, 1, 200), 6, 12, 0.05, 0});
    // Words are tokens, punctuation included.
    std::size_t sets = 0, words = 0;
    for (const auto &s : c.sentences()) {
      sets += s.sets.size();
      words += s.tokens.size();
    }
    auto st = fw::stats(c);
    CHECK(st.sentence_count == c.sentences().size());
    CHECK(st.set_count == sets);
    CHECK(st.word_count == words);
    CHECK(st.sets_per_sentence == doctest::Approx(double(sets) / c.sentences().size()));
  }
}

TEST_CASE("universal tags map onto lexical unit parts of speech") {
  CHECK(fw::parse_token_pos("NOUN") == fw::Pos::n);
  CHECK(fw::parse_token_pos("PROPN") == fw::Pos::n);
  CHECK(fw::parse_token_pos("VERB") == fw::Pos::v);
  CHECK(fw::parse_token_pos("ADJ") == fw::Pos::a);
  CHECK(fw::parse_token_pos("ADV") == fw::Pos::adv);
  CHECK(fw::parse_token_pos("PUNCT") == fw::Pos::other);
  CHECK_FALSE(fw::parse_token_pos("NOUNISH"));
}

}  // TEST_SUITE
