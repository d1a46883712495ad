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

// HTTP facade for annotators.
//
//   GET  /api/batches/{annotator}?round=r1   pending fragments, batch order
//   POST /api/judgments                      record a verdict
//   GET  /api/tables/precision?round=r1      live precision table
//   GET  /api/tables/errors[?pattern=id]     live error distribution
//
// Every request carries "Authorization: Bearer <token>". ReviewService
// holds the request logic and is usable without sockets; HttpFrontend
// binds it to a port.

#ifndef FRAMEWATCH_REVIEW_SERVICE_HPP_
#define FRAMEWATCH_REVIEW_SERVICE_HPP_

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "framewatch/corpus.hpp"
#include "framewatch/eval_harness.hpp"
#include "framewatch/journal.hpp"

namespace framewatch {

// annotator -> token, from a file such as
//
//   [tokens]
//   ana = "s3cret"
//
// Only string values, comments and the [tokens] table are accepted.
std::map<std::string, std::string> parse_tokens_toml(std::istream &in);
std::map<std::string, std::string> read_tokens_toml(const std::string &path);

// Path of the manifest that attests a corpus file: "<corpus>.manifest.json".
std::string manifest_path(const std::string &corpus_path);
// Throws Error unless the manifest exists and has "anonymized": true.
void require_anonymized(const std::string &corpus_path);

struct Response {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class ReviewService {
 public:
  // Every match must resolve to a sentence of `corpus`. Throws Error.
  ReviewService(const Corpus &corpus, std::vector<MatchRecord> matches, Journal &journal,
                std::map<std::string, std::string> tokens, PrecisionOptions options = {});

  Response get_batch(const std::string &authorization, const std::string &annotator,
                     const std::string &round) const;
  Response post_judgment(const std::string &authorization, const std::string &body);
  // format "json" (default) or "tsv".
  Response get_precision(const std::string &authorization, const std::string &round,
                         const std::string &format) const;
  Response get_errors(const std::string &authorization, const std::string &pattern,
                      const std::string &format) const;

  // JSON fragment view: text plus target, fe and filler highlights.
  std::string fragment_view(const std::string &match_id) const;

 private:
  const std::string *authenticate(const std::string &authorization) const;
  const MatchRecord *find_match(const std::string &id) const;

  const Corpus &corpus_;
  std::vector<MatchRecord> matches_;
  std::map<std::string, std::size_t> by_id_;
  std::vector<SentenceIndex> sentence_of_;
  Journal &journal_;
  std::map<std::string, std::string> annotator_of_token_;
  std::map<std::string, std::string> token_of_annotator_;
  PrecisionOptions options_;
};

// Live tables over a journal snapshot, shared by the CLI and the service so
// both print the same bytes.
PrecisionTable live_precision(const JournalState &state, const std::vector<MatchRecord> &all,
                              Round round, const PrecisionOptions &options);
ErrorDistribution live_errors(const JournalState &state, const std::vector<MatchRecord> &all,
                              const std::string &pattern_id, std::size_t keep_top = 6);

class HttpFrontend {
 public:
  explicit HttpFrontend(ReviewService &service, std::string static_dir = {});
  ~HttpFrontend();

  // Binds and returns the port (a free one when `port` is 0). Throws Error.
  int bind(const std::string &host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace framewatch

#endif  // FRAMEWATCH_REVIEW_SERVICE_HPP_
