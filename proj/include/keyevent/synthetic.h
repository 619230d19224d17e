// Copyright 2026 The keyevent Authors
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

// Synthetic theme corpora with planted key events.
//
// Every planted event owns a 1-3 day window and a set of signature phrases
// that its documents use heavily. All documents share theme phrases,
// background phrases and filler vocabulary; a few rare distractor phrases
// appear in background documents only. Vectors
// are generated directly (no encoder): a document of event e is
// onehot(e) + 0.5 * theme + noise, a background document is
// onehot(background slot) + 0.5 * theme + noise, and signature phrases of one
// event share a direction in both halves of the phrase vector. The exact
// scheme is written to the metadata file.

#ifndef KEYEVENT_SYNTHETIC_H_
#define KEYEVENT_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "keyevent/corpus.h"
#include "keyevent/embeddings.h"
#include "keyevent/evaluation.h"

namespace keyevent {

struct SynthConfig {
  int num_events = 3;
  int docs_per_event = 30;
  int noise_docs = 100;
  int span_days = 60;
  int dim = 16;  // document vector dimension; phrase vectors use 2 * dim
  int signature_phrases = 10;
  double signature_rate = 1.0;  // chance an event doc uses a given signature
  int theme_phrases = 3;        // in almost every document
  int background_phrases = 100;  // in a fifth of all documents
  int distractor_phrases = 8;   // rare, background documents only
  double date_in_lead = 0.5;  // event docs naming their event date up front
  double redate_fraction = 0.0;  // event docs moved outside their window
  double doc_noise = 0.15;
  double phrase_noise = 0.03;
  std::uint64_t seed = 0;
  std::string start_date = "2024-03-01";
};

struct SynthEvent {
  std::string id;
  DaySpan window;  // day offsets from the corpus origin
  std::vector<std::string> signatures;
  std::vector<std::string> synonyms;  // one per signature
};

struct SynthCorpus {
  Corpus corpus;
  GroundTruth truth;
  std::vector<SynthEvent> events;
  std::vector<std::string> phrases;  // full candidate list
  EmbeddingTable phrase_vectors;
  EmbeddingTable doc_vectors;
  std::vector<std::string> redated;  // ids of re-dated event docs
  nlohmann::json metadata;
};

// Throws UsageError for counts below 1 (noise_docs may be 0) or windows that
// do not fit into span_days.
SynthCorpus generate_synthetic(const SynthConfig& config);

// corpus.jsonl, truth.jsonl, phrases.txt, phrase_vectors.tsv,
// doc_vectors.tsv and synth_meta.json inside `dir` (created if needed).
void write_synthetic(const SynthCorpus& synth, const std::filesystem::path& dir);

}  // namespace keyevent

#endif  // KEYEVENT_SYNTHETIC_H_
