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

// framewatch: command-line driver.

#include <algorithm>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "framewatch/anonymizer.hpp"
#include "framewatch/corpus.hpp"
#include "framewatch/eval_harness.hpp"
#include "framewatch/frame_store.hpp"
#include "framewatch/journal.hpp"
#include "framewatch/keyness.hpp"
#include "framewatch/pattern_engine.hpp"
#include "framewatch/review_service.hpp"
#include "json.hpp"

namespace fw = framewatch;
using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

// Writes to `path`, or stdout for "" and "-".
class Output {
 public:
  explicit Output(const std::string &path) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw fw::Error("cannot write " + path);
    }
  }
  std::ostream &stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  for (auto &part : fw::split(s, ',')) {
    std::string t(fw::trim(part));
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

fw::PrecisionOptions precision_options(const std::string &r2_correct) {
  fw::PrecisionOptions opts;
  if (r2_correct.empty()) return opts;
  opts.r2_correct.clear();
  for (const auto &name : split_list(r2_correct)) {
    auto v = fw::parse_verdict(name);
    if (!v || !fw::verdict_belongs_to(*v, fw::Round::r2)) {
      throw fw::Error("--r2-correct takes round-2 verdicts, not \"" + name + "\"");
    }
    opts.r2_correct.insert(*v);
  }
  return opts;
}

fw::Round round_option(const std::string &s) {
  auto r = fw::parse_round(s);
  if (!r) throw fw::Error("round must be 1 or 2");
  return *r;
}

// ---------------------------------------------------------- validate-store

int cmd_validate_store(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw fw::Error("cannot open store " + path);
  auto store = fw::FrameStore::from_records(fw::parse_store(in));
  auto violations = fw::validate(store);
  for (const auto &v : violations) {
    std::cout << fw::to_string(v.kind) << ": " << v.message << "\n";
  }
  if (!violations.empty()) {
    std::cerr << violations.size() << " violation(s)\n";
    return 1;
  }
  std::cout << "ok: " << store.frames().size() << " frames, "
            << store.frame_elements().size() << " frame elements, "
            << store.relations().size() << " relations, "
            << store.lexical_units().size() << " lexical units, "
            << store.qualia().size() << " qualia relations\n";
  return 0;
}

// ------------------------------------------------------------------ ingest

int cmd_ingest(const std::string &path, const std::string &store_path) {
  auto store = fw::load_store(store_path);
  auto result = fw::ingest(path, store);
  for (const auto &w : result.warnings) {
    std::cout << "warning: " << w.doc_id << "/" << w.sent_id << ": " << w.message << "\n";
  }
  if (result.corpus.empty()) {
    std::cout << "sentences\t0\n";
    return 0;
  }
  auto st = fw::stats(result.corpus);
  char ratio[32];
  std::snprintf(ratio, sizeof ratio, "%.2f", st.sets_per_sentence);
  std::cout << "sentences\t" << st.sentence_count << "\n"
            << "sets\t" << st.set_count << "\n"
            << "sets_per_sentence\t" << ratio << "\n"
            << "words\t" << st.word_count << "\n"
            << "warnings\t" << result.warnings.size() << "\n";
  return 0;
}

// --------------------------------------------------------------- anonymize

struct AnonymizeArgs {
  std::string input, policy, audit, output, gazetteer, rules, common_words, names;
};

fw::RedactionPolicy read_policy(const std::string &path) {
  fw::RedactionPolicy policy;
  if (path.empty()) return policy;
  std::ifstream in(path);
  if (!in) throw fw::Error("cannot open policy " + path);
  json j = json::parse(in);
  if (j.contains("min_agreeing_detectors")) {
    policy.min_agreeing_detectors = j["min_agreeing_detectors"].get<int>();
  }
  if (j.contains("merge_overlaps")) policy.merge_overlaps = j["merge_overlaps"].get<bool>();
  if (j.contains("replacement_token")) {
    policy.replacement_token = j["replacement_token"].get<std::string>();
  }
  fw::check_policy(policy);
  return policy;
}

int cmd_anonymize(const AnonymizeArgs &a) {
  const fw::RedactionPolicy policy = read_policy(a.policy);
  std::vector<std::unique_ptr<fw::Detector>> owned;
  owned.push_back(std::make_unique<fw::RegexDetector>(
      "regex", a.rules.empty() ? fw::RegexDetector::default_rules()
                               : fw::RegexDetector::read_rules(a.rules)));
  if (!a.gazetteer.empty()) {
    owned.push_back(
        std::make_unique<fw::GazetteerDetector>("gazetteer", fw::read_lines_file(a.gazetteer)));
  }
  std::unique_ptr<fw::NameFlagger> flagger;
  if (!a.common_words.empty() || !a.names.empty()) {
    flagger = std::make_unique<fw::NameFlagger>(
        a.common_words.empty() ? std::vector<std::string>{} : fw::read_lines_file(a.common_words),
        a.names.empty() ? std::vector<std::string>{} : fw::read_lines_file(a.names));
  }

  std::ifstream in(a.input);
  if (!in) throw fw::Error("cannot open " + a.input);
  Output out(a.output);
  Output audit(a.audit);
  std::string line;
  std::size_t lineno = 0, texts = 0, redacted = 0, flagged = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (fw::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw fw::ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("text") || !j["text"].is_string()) {
      throw fw::ParseError(lineno, "expected {\"id\", \"text\"}");
    }
    const std::string text = j["text"].get<std::string>();
    const json id = j["id"];

    // Precomputed detections stand in for external models, one detector
    // id per model.
    std::map<std::string, std::vector<fw::PiiDetection>> external;
    if (j.contains("detections")) {
      for (const auto &d : j["detections"]) {
        auto cat = fw::parse_pii_category(d.value("category", "other"));
        if (!cat) throw fw::ParseError(lineno, "unknown PII category");
        const std::string det = d.at("detector").get<std::string>();
        external[det].push_back(
            {det, {d.at("begin").get<std::size_t>(), d.at("end").get<std::size_t>()}, *cat});
      }
    }
    std::vector<std::unique_ptr<fw::Detector>> replay;
    std::vector<const fw::Detector *> detectors;
    for (const auto &d : owned) detectors.push_back(d.get());
    for (auto &[det, list] : external) {
      replay.push_back(std::make_unique<fw::PrecomputedDetector>(det, list));
      detectors.push_back(replay.back().get());
    }
    std::vector<fw::DetectorFailure> failures;
    auto detections = fw::run_detectors(text, detectors, &failures);
    for (const auto &f : failures) {
      std::cerr << "line " << lineno << ": detector " << f.detector_id << " failed: "
                << f.message << "\n";
    }
    auto result = fw::vote_and_redact(text, detections, policy);
    ++texts;
    redacted += result.audit.redacted_count();

    ordered_json o;
    o["id"] = id;
    o["text"] = result.text;
    out.stream() << o.dump() << "\n";

    for (const auto &e : result.audit.entries) {
      ordered_json r;
      r["id"] = id;
      r["begin"] = e.span.begin;
      r["end"] = e.span.end;
      r["detectors"] = e.detector_ids;
      r["categories"] = ordered_json::array();
      for (auto c : e.categories) r["categories"].push_back(fw::to_string(c));
      r["action"] = fw::to_string(e.action);
      audit.stream() << r.dump() << "\n";
    }
    if (flagger) {
      // Offsets refer to the redacted text; flags are never applied.
      std::vector<fw::CharSpan> tokens;
      const auto &tok = policy.replacement_token;
      for (auto at = result.text.find(tok); !tok.empty() && at != std::string::npos;
           at = result.text.find(tok, at + tok.size())) {
        tokens.push_back({at, at + tok.size()});
      }
      for (const auto &span : flagger->flag(result.text)) {
        bool inside_token = std::any_of(tokens.begin(), tokens.end(), [&](const fw::CharSpan &t) {
          return span.begin < t.end && t.begin < span.end;
        });
        if (inside_token) continue;
        ordered_json r;
        r["id"] = id;
        r["begin"] = span.begin;
        r["end"] = span.end;
        r["detectors"] = {"name_list"};
        r["categories"] = {"person_name"};
        r["action"] = "flagged_only";
        r["on"] = "redacted_text";
        audit.stream() << r.dump() << "\n";
        ++flagged;
      }
    }
  }
  std::cerr << texts << " text(s), " << redacted << " redaction(s), " << flagged
            << " name flag(s) for review\n";
  return 0;
}

// ----------------------------------------------------------------- keyness

int cmd_keyness(const std::string &focus, const std::string &reference, std::size_t k,
                double smoothing, int max_n, const std::string &output) {
  auto f = fw::count_terms(fw::read_corpus(focus), max_n);
  auto r = fw::count_terms(fw::read_corpus(reference), max_n);
  auto result = fw::keyness_scores(f, r, smoothing);
  if (k < 1) throw fw::Error("-k must be at least 1");
  Output out(output);
  out.stream() << fw::keyness_tsv(result, k);
  return 0;
}

// ------------------------------------------------------------------- match

struct MatchArgs {
  std::string store, corpus, patterns, output, overlap = "contain", sample_out;
  bool oracle = false;
  std::size_t min_matches = 30, cap = 100;
  unsigned workers = 1;
  std::uint64_t seed = 0;
  bool filter = false;
};

int cmd_match(const MatchArgs &a) {
  auto store = fw::load_store(a.store);
  auto ingested = fw::ingest(a.corpus, store);
  if (!ingested.warnings.empty()) {
    std::cerr << ingested.warnings.size() << " corpus warning(s); run `framewatch ingest` for details\n";
  }
  auto compiled = fw::compile_patterns(a.patterns, store);
  for (const auto &w : compiled.warnings) std::cerr << "warning: " << w << "\n";
  fw::FillerAlignment alignment;
  if (a.overlap == "contain") {
    alignment = fw::FillerAlignment::contain;
  } else if (a.overlap == "any") {
    alignment = fw::FillerAlignment::any_overlap;
  } else {
    throw fw::Error("--overlap must be any or contain");
  }

  const auto &corpus = ingested.corpus;
  std::vector<fw::Match> matches;
  if (a.oracle) {
    matches = fw::match_corpus_bruteforce(corpus, store, compiled.patterns, alignment);
  } else {
    auto index = fw::build_index(corpus);
    matches = fw::match_corpus(corpus, index, compiled.patterns, {alignment, a.workers});
  }

  auto counts = fw::count_matches(matches, compiled.patterns);
  auto partition = fw::retention_filter(counts, a.min_matches);
  std::set<std::string> kept(partition.kept.begin(), partition.kept.end());
  std::map<std::string, const fw::Pattern *> by_id;
  for (const auto &p : compiled.patterns) by_id[p.id] = &p;

  std::cerr << "pattern\tmatches\tretained\n";
  for (const auto &[id, n] : counts) {
    std::cerr << id << "\t" << n << "\t" << (kept.count(id) ? "yes" : "no") << "\n";
  }

  Output out(a.output);
  for (const auto &m : matches) {
    if (a.filter && !kept.count(m.pattern_id)) continue;
    out.stream() << fw::match_record(m, corpus, store, *by_id.at(m.pattern_id)) << "\n";
  }

  if (!a.sample_out.empty()) {
    Output sample(a.sample_out);
    std::map<std::string, std::vector<fw::Match>> per_pattern;
    for (const auto &m : matches) per_pattern[m.pattern_id].push_back(m);
    for (const auto &[id, list] : per_pattern) {
      for (const auto &m : fw::sample_for_inspection(list, a.cap, a.seed)) {
        sample.stream() << fw::match_record(m, corpus, store, *by_id.at(id)) << "\n";
      }
    }
  }
  return 0;
}

// -------------------------------------------------------------------- eval

struct EvalArgs {
  std::string journal, matches, round = "1", annotators, format = "text", counts, pattern,
      r2_correct;
  std::uint64_t seed = 0;
  bool partial = false, global_dedupe = false;
  std::size_t top = 6;
};

int cmd_eval_assign(const EvalArgs &a) {
  fw::Journal journal(a.journal);
  const fw::Round round = round_option(a.round);
  auto state = journal.snapshot();
  std::vector<fw::Batch> batches;
  if (round == fw::Round::r1) {
    auto all = fw::read_match_records(a.matches);
    auto unique = fw::dedupe(all, !a.global_dedupe);
    std::cerr << all.size() << " match(es), " << unique.size() << " after removing duplicates\n";
    std::vector<std::string> ids;
    for (const auto &m : unique) ids.push_back(m.match_id);
    batches = fw::assign_round1(ids, split_list(a.annotators), a.seed);
  } else {
    const auto *r1 = state->batches_for(fw::Round::r1);
    if (!r1) throw fw::Error("round 1 has not been assigned");
    std::vector<std::string> annotators = split_list(a.annotators);
    if (annotators.empty()) {
      for (const auto &b : *r1) annotators.push_back(b.annotator);
    }
    batches = fw::assign_round2(*r1, state->r1_verdicts(), annotators, a.seed);
  }
  journal.record_batches(round, batches);
  for (const auto &b : batches) {
    std::cout << b.annotator << "\t" << b.match_ids.size() << "\n";
  }
  return 0;
}

std::vector<std::string> read_tsv_line(const std::string &line) { return fw::split(line, '\t'); }

int cmd_eval_table(const EvalArgs &a) {
  fw::PrecisionTable table;
  if (!a.counts.empty()) {
    std::vector<std::tuple<std::string, std::uint64_t, std::uint64_t>> rows;
    for (const auto &line : fw::read_lines_file(a.counts)) {
      auto f = read_tsv_line(line);
      if (f.size() != 3) throw fw::Error("counts line needs pattern<TAB>correct<TAB>error: " + line);
      rows.emplace_back(f[0], std::stoull(f[1]), std::stoull(f[2]));
    }
    table = fw::precision_from_counts(rows);
  } else {
    fw::Journal journal(a.journal);
    auto state = journal.snapshot();
    auto all = fw::read_match_records(a.matches);
    const auto round = round_option(a.round);
    const auto opts = precision_options(a.r2_correct);
    if (a.partial) {
      table = fw::live_precision(*state, all, round, opts);
    } else {
      table = fw::precision_table(fw::evaluated_matches(*state, all), state->judgment_list(),
                                  round, opts);
    }
  }
  if (a.format == "tsv") {
    std::cout << fw::precision_tsv(table);
  } else if (a.format == "text") {
    std::cout << fw::precision_text(table);
    if (table.incomplete) std::cout << "(incomplete: " << table.unjudged.size() << " unjudged)\n";
  } else {
    throw fw::Error("--format must be tsv or text");
  }
  return 0;
}

int cmd_eval_errors(const EvalArgs &a) {
  fw::ErrorDistribution dist;
  if (!a.counts.empty()) {
    std::vector<std::pair<std::string, std::uint64_t>> rows;
    for (const auto &line : fw::read_lines_file(a.counts)) {
      auto f = read_tsv_line(line);
      if (f.size() != 2) throw fw::Error("counts line needs type<TAB>count: " + line);
      rows.emplace_back(f[0], std::stoull(f[1]));
    }
    dist = fw::error_distribution_from_counts(rows, a.top);
  } else {
    fw::Journal journal(a.journal);
    auto state = journal.snapshot();
    auto all = fw::read_match_records(a.matches);
    dist = fw::live_errors(*state, all, a.pattern, a.top);
  }
  if (a.format == "tsv") {
    std::cout << fw::error_tsv(dist);
  } else if (a.format == "text") {
    std::cout << fw::error_text(dist);
  } else {
    throw fw::Error("--format must be tsv or text");
  }
  return 0;
}

// ------------------------------------------------------------------- serve

struct ServeArgs {
  std::string journal, matches, corpus, tokens, host = "127.0.0.1", static_dir, r2_correct;
  int port = 8080;
};

fw::HttpFrontend *g_frontend = nullptr;

void on_signal(int) {
  if (g_frontend) g_frontend->stop();
}

int cmd_serve(const ServeArgs &a) {
  fw::require_anonymized(a.corpus);
  auto corpus = fw::read_corpus(a.corpus);
  fw::Journal journal(a.journal);
  fw::ReviewService service(corpus, fw::read_match_records(a.matches), journal,
                            fw::read_tokens_toml(a.tokens), precision_options(a.r2_correct));
  fw::HttpFrontend frontend(service, a.static_dir);
  const int port = frontend.bind(a.host, a.port);
  std::cerr << "serving on http://" << a.host << ":" << port << "\n";
  g_frontend = &frontend;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  frontend.listen();
  g_frontend = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Frame-semantic pattern surveillance over annotated clinical text"};
  app.require_subcommand(1);
  int status = 0;

  std::string store_path;
  auto *validate = app.add_subcommand("validate-store", "Check a frame store for violations");
  validate->add_option("path", store_path, "Frame store (JSON Lines)")->required();
  validate->callback([&] { status = cmd_validate_store(store_path); });

  std::string corpus_path, ingest_store;
  auto *ingest = app.add_subcommand("ingest", "Load a corpus and print statistics and warnings");
  ingest->add_option("path", corpus_path, "Corpus (JSON Lines)")->required();
  ingest->add_option("--store", ingest_store, "Frame store")->required();
  ingest->callback([&] { status = cmd_ingest(corpus_path, ingest_store); });

  AnonymizeArgs an;
  auto *anonymize = app.add_subcommand("anonymize", "Vote-based PII redaction");
  anonymize->add_option("input", an.input, "Texts as JSON Lines {id, text, detections?}")
      ->required();
  anonymize->add_option("--policy", an.policy, "Redaction policy (JSON)");
  anonymize->add_option("--audit", an.audit, "Audit output (JSON Lines)")->required();
  anonymize->add_option("-o,--output", an.output, "Redacted texts (default stdout)");
  anonymize->add_option("--gazetteer", an.gazetteer, "Known places, one per line");
  anonymize->add_option("--rules", an.rules, "Regex rules, category<TAB>pattern per line");
  anonymize->add_option("--common-words", an.common_words, "Frequency list of common words");
  anonymize->add_option("--names", an.names, "List of known personal names");
  anonymize->callback([&] { status = cmd_anonymize(an); });

  std::string focus, reference, keyness_out;
  std::size_t k = 2000;
  double smoothing = 1.0;
  int max_n = 3;
  auto *keyness = app.add_subcommand("keyness", "Rank terms of a focus corpus");
  keyness->add_option("--focus", focus, "Focus corpus")->required();
  keyness->add_option("--reference", reference, "Reference corpus")->required();
  keyness->add_option("-k", k, "Number of candidates")->capture_default_str();
  keyness->add_option("-N,--smoothing", smoothing, "Smoothing constant")->capture_default_str();
  keyness->add_option("--max-n", max_n, "Longest n-gram")->capture_default_str();
  keyness->add_option("-o,--output", keyness_out, "TSV output (default stdout)");
  keyness->callback([&] { status = cmd_keyness(focus, reference, k, smoothing, max_n, keyness_out); });

  MatchArgs ma;
  auto *match = app.add_subcommand("match", "Match patterns against a corpus");
  match->add_option("--store", ma.store, "Frame store")->required();
  match->add_option("--corpus", ma.corpus, "Corpus")->required();
  match->add_option("--patterns", ma.patterns, "Pattern file")->required();
  match->add_option("-o,--output", ma.output, "Match records (default stdout)");
  match->add_flag("--oracle", ma.oracle, "Use the brute-force matcher");
  match->add_option("--overlap", ma.overlap, "Filler alignment: contain or any")
      ->capture_default_str();
  auto *min_opt = match->add_option("--min-matches", ma.min_matches,
                                    "Retention threshold; when given, drops discarded patterns")
                      ->capture_default_str();
  match->add_option("--workers", ma.workers, "Matching threads")->capture_default_str();
  match->add_option("--sample-out", ma.sample_out, "Write per-pattern inspection samples");
  match->add_option("--cap", ma.cap, "Sample size per pattern")->capture_default_str();
  match->add_option("--seed", ma.seed, "Sampling seed")->capture_default_str();
  match->callback([&] {
    ma.filter = min_opt->count() > 0;
    status = cmd_match(ma);
  });

  EvalArgs ea;
  auto *eval = app.add_subcommand("eval", "Two-round human evaluation");
  eval->require_subcommand(1);
  auto *assign = eval->add_subcommand("assign", "Assign batches for a round");
  auto *table = eval->add_subcommand("table", "Precision table");
  auto *errors = eval->add_subcommand("errors", "Error-type distribution");
  for (auto *sub : {assign, table, errors}) {
    sub->add_option("--journal", ea.journal, "Judgment journal");
    sub->add_option("--matches", ea.matches, "Match records");
  }
  assign->add_option("--round", ea.round, "1 or 2")->capture_default_str();
  assign->add_option("--annotators", ea.annotators, "Comma-separated annotator names");
  assign->add_option("--seed", ea.seed, "Shuffle seed")->capture_default_str();
  assign->add_flag("--global-dedupe", ea.global_dedupe,
                   "Remove duplicate texts across patterns, not only within one");
  table->add_option("--round", ea.round, "1 or 2")->capture_default_str();
  table->add_option("--format", ea.format, "text or tsv")->capture_default_str();
  table->add_option("--counts", ea.counts, "pattern<TAB>correct<TAB>error instead of a journal");
  table->add_flag("--partial", ea.partial, "Tabulate judged matches only");
  table->add_option("--r2-correct", ea.r2_correct,
                    "Round-2 verdicts counted as correct (default gbv_other_pattern,partial)");
  errors->add_option("--pattern", ea.pattern, "Restrict to one pattern id");
  errors->add_option("--top", ea.top, "Types listed before \"Other\"")->capture_default_str();
  errors->add_option("--format", ea.format, "text or tsv")->capture_default_str();
  errors->add_option("--counts", ea.counts, "type<TAB>count instead of a journal");
  assign->callback([&] {
    if (ea.journal.empty() || (ea.matches.empty() && ea.round != "2" && ea.round != "r2")) {
      throw CLI::ValidationError("assign needs --journal and, for round 1, --matches");
    }
    status = cmd_eval_assign(ea);
  });
  table->callback([&] {
    if (ea.counts.empty() && (ea.journal.empty() || ea.matches.empty())) {
      throw CLI::ValidationError("table needs --counts, or --journal and --matches");
    }
    status = cmd_eval_table(ea);
  });
  errors->callback([&] {
    if (ea.counts.empty() && (ea.journal.empty() || ea.matches.empty())) {
      throw CLI::ValidationError("errors needs --counts, or --journal and --matches");
    }
    status = cmd_eval_errors(ea);
  });

  ServeArgs sa;
  auto *serve = app.add_subcommand("serve", "Review API for annotators");
  serve->add_option("--journal", sa.journal, "Judgment journal")->required();
  serve->add_option("--matches", sa.matches, "Match records")->required();
  serve->add_option("--corpus", sa.corpus, "Anonymized corpus with a manifest")->required();
  serve->add_option("--tokens", sa.tokens, "Annotator tokens (TOML)")->required();
  serve->add_option("--port", sa.port, "Port (0 picks a free one)")->capture_default_str();
  serve->add_option("--host", sa.host, "Bind address")->capture_default_str();
  serve->add_option("--static", sa.static_dir, "Directory of UI assets");
  serve->add_option("--r2-correct", sa.r2_correct, "Round-2 verdicts counted as correct");
  serve->callback([&] { status = cmd_serve(sa); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e);
  } catch (const fw::LoadError &e) {
    for (const auto &v : e.violations()) {
      std::cerr << fw::to_string(v.kind) << ": " << v.message << "\n";
    }
    std::cerr << "framewatch: store has " << e.violations().size() << " violation(s)\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "framewatch: " << e.what() << "\n";
    return 1;
  }
  return status;
}
