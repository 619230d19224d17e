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

// End-to-end orchestration: configuration, stages and run reports.

#ifndef KEYEVENT_PIPELINE_H_
#define KEYEVENT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyevent/corpus.h"
#include "keyevent/doc_selection.h"
#include "keyevent/embeddings.h"
#include "keyevent/evaluation.h"
#include "keyevent/event_graph.h"
#include "keyevent/peak_detection.h"
#include "keyevent/phrase_mining.h"

namespace keyevent {

struct PipelineConfig {
  int n_t = 3;
  double keep_fraction = 0.70;
  double peak_quantile = 0.03;
  double w_const = 3.0;
  double edge_floor = 0.0;
  int min_community = 2;
  double resolution = 1.0;
  double tau = 0.95;
  int pseudo_top = 10;
  int r = 2;
  int S = 50;
  int n_add = 5;
  int iterations = 2;
  std::uint64_t seed = 0;
  std::string endpoint;   // empty: vectors must come from files
  std::string cache_dir;  // empty: no disk cache
  int ngram_max_len = 3;     // fallback mining when no phrase list is given
  int ngram_min_count = 3;

  bool operator==(const PipelineConfig&) const = default;
};

// Field names accepted by set_config_value and written by write_config.
const std::vector<std::string>& config_keys();

// Parses `value` into the named field. Throws UsageError for unknown keys or
// unparsable values.
void set_config_value(PipelineConfig& config, std::string_view key,
                      std::string_view value);

// Throws UsageError naming the first field outside its valid range.
void validate(const PipelineConfig& config);

// Flat "key = value" lines; '#' starts a comment. Later lines win.
PipelineConfig read_config(std::istream& in, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path,
                           PipelineConfig base = {});
void write_config(const PipelineConfig& config, std::ostream& out);

// Runs `body`, prefixing any error message with "<stage>: " while keeping
// its type.
void run_stage(std::string_view stage, const std::function<void()>& body);

struct PhraseStage {
  OccurrenceIndex index;                 // every listed or mined phrase
  std::vector<CandidatePhrase> scored;   // index order
  std::vector<CandidatePhrase> kept;     // tf-idf filtered, rank order
};

// Uses `phrase_list` when non-empty, otherwise mines fallback n-grams.
PhraseStage mine_phrases(const Corpus& corpus,
                         std::span<const std::string> phrase_list,
                         const PipelineConfig& config);

std::vector<PeakPhrase> detect_peaks(const Corpus& corpus,
                                     const PhraseStage& phrases,
                                     const PipelineConfig& config);

struct PipelineResult {
  PhraseStage phrases;
  std::vector<PeakPhrase> peaks;
  PeakPhraseGraph graph;
  std::vector<CandidateEvent> candidates;
  SelectionResult selection;
  std::string audit;  // JSONL
};

// In-memory pipeline over vectors that are already loaded.
PipelineResult run_stages(const PipelineConfig& config, const Corpus& corpus,
                          std::span<const std::string> phrase_list,
                          const EmbeddingTable& phrase_vectors,
                          const EmbeddingTable& doc_vectors);

// Fills in vectors missing from the tables from the configured endpoint (and
// cache). A no-op without an endpoint.
void acquire_embeddings(const PipelineConfig& config, const Corpus& corpus,
                        std::span<const std::string> phrases,
                        EmbeddingTable& phrase_vectors,
                        EmbeddingTable& doc_vectors);

// Ranks the event's phrases by mentions inside its documents.
std::vector<std::string> top_event_phrases(const KeyEvent& event,
                                           const Corpus& corpus,
                                           const OccurrenceIndex& index,
                                           std::size_t limit = 10);

void write_key_events_text(std::span<const KeyEvent> events,
                           const Corpus& corpus, const OccurrenceIndex& index,
                           std::ostream& out);
void write_key_events_jsonl(std::span<const KeyEvent> events,
                            const Corpus& corpus, std::ostream& out);
std::vector<KeyEvent> read_key_events_jsonl(std::istream& in,
                                            const Corpus& corpus);
void write_outliers(std::span<const std::string> ids, const Corpus& corpus,
                    std::ostream& out);

// Creates a fresh directory: `explicit_dir` if given (suffixed -1, -2, ...
// when it exists), else <base>/<UTC timestamp>-<seed>.
std::filesystem::path create_run_dir(const std::filesystem::path& base,
                                     std::uint64_t seed,
                                     const std::filesystem::path& explicit_dir = {});

struct RunInputs {
  std::filesystem::path corpus;
  std::filesystem::path phrases;         // optional
  std::filesystem::path phrase_vectors;  // optional with an endpoint
  std::filesystem::path doc_vectors;     // optional with an endpoint
  std::filesystem::path truth;           // optional
};

// Full run writing every artifact into `run_dir` (created when missing). Returns
// the final result; metrics are written only when a truth file is given.
PipelineResult run_pipeline(const PipelineConfig& config, const RunInputs& inputs,
                            const std::filesystem::path& run_dir);

}  // namespace keyevent

#endif  // KEYEVENT_PIPELINE_H_
