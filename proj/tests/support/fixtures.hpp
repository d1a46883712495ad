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

// Shared fixtures and seeded generators for the unit and acceptance tests.

#ifndef FRAMEWATCH_TESTS_SUPPORT_FIXTURES_HPP_
#define FRAMEWATCH_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "framewatch/anonymizer.hpp"
#include "framewatch/corpus.hpp"
#include "framewatch/frame_store.hpp"
#include "framewatch/pattern_engine.hpp"

namespace fwtest {

namespace fw = framewatch;

std::string data_path(const std::string &relative);
std::string slurp(const std::string &path);

// The 30-frame violence/healthcare store, loaded once.
const fw::FrameStore &fixture_store();

// A fresh path under the system temp dir; the file does not exist yet.
std::string temp_path(const std::string &stem);

// Uniform in [lo, hi].
std::size_t pick(std::mt19937_64 &rng, std::size_t lo, std::size_t hi);
bool coin(std::mt19937_64 &rng, double p);

// Frames F000..F<n-1> with random inheritance edges from higher to lower
// index (so acyclic) plus random edges of the other relation types.
fw::StoreRecords random_dag(std::mt19937_64 &rng, std::size_t frames, double edge_p);

struct CorpusShape {
  std::size_t sentences = 500;
  std::size_t max_sets = 6;
  std::size_t max_tokens = 12;
  // Share of sets whose frame is not in the store.
  double unknown_frame_rate = 0.02;
  // Frames are drawn from the first `frame_pool` store frames, more hits
  // when small; 0 means all of them.
  std::size_t frame_pool = 0;
};

// Sentences d<k>/s<j> with random tokens, targets, FE spans (sometimes with
// roles the frame lacks) and LU labels, resolved against `store`.
fw::Corpus random_corpus(const fw::FrameStore &store, std::mt19937_64 &rng,
                         const CorpusShape &shape);

// A compiled random pattern over the store: 1-2 anchor frames, optional
// closure and LU whitelist, 0-2 roles taken from the first anchor frame.
fw::Pattern random_pattern(const fw::FrameStore &store, std::mt19937_64 &rng,
                           const std::string &id);

// Matching from the definition alone: every anchor set, every role, every
// FE instance, every other set of the sentence. Sorted like match_corpus.
std::vector<fw::Match> naive_matches(const fw::Corpus &corpus, const fw::FrameStore &store,
                                     const std::vector<fw::Pattern> &patterns,
                                     fw::FillerAlignment alignment);

// Random text of words and spaces, and random detections on it.
std::string random_text(std::mt19937_64 &rng, std::size_t max_len);
std::vector<fw::PiiDetection> random_detections(std::mt19937_64 &rng, std::size_t text_len,
                                                std::size_t detectors, std::size_t max_each);

}  // namespace fwtest

#endif  // FRAMEWATCH_TESTS_SUPPORT_FIXTURES_HPP_
