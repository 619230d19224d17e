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

// Iterative key event document selection.
//
// Each candidate event yields pseudo-labelled documents by phrase matching
// inside its estimated span. An ensemble of linear classifiers, each trained
// on the pseudo positives plus r times as many sampled negatives, scores every
// document; a document joins the event with the highest positive mean score.
// Out-of-span members are then filtered by publication-day clustering and
// lead-3 date mentions, and the loop refines its pseudo labels (dropping
// negatively scored ones, adding the top retrieved documents) and promotes
// filtered clusters to new candidate events.

#ifndef KEYEVENT_DOC_SELECTION_H_
#define KEYEVENT_DOC_SELECTION_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "keyevent/corpus.h"
#include "keyevent/embeddings.h"
#include "keyevent/event_graph.h"
#include "keyevent/phrase_mining.h"
#include "keyevent/svm.h"

namespace keyevent {

struct PseudoLabelSet {
  std::string event_id;
  std::vector<std::string> positives;  // best match first
  std::map<std::string, std::size_t> match_scores;
};

struct ClassifierEnsemble {
  std::string event_id;
  std::vector<LinearModel> members;
  int r = 2;
  std::uint64_t seed = 0;

  // Mean member decision value.
  double score(std::span<const double> x) const;
};

struct KeyEvent {
  std::string id;
  std::vector<ScoredDoc> documents;  // score descending
  std::set<std::string> phrases;
  DaySpan span;
};

struct Enrichment {
  std::set<std::string> phrases;
  std::vector<std::string> skipped;  // phrases without a vector
};

// Adds every pool phrase whose best cosine to an event phrase is >= tau.
Enrichment enrich_phrases(const std::set<std::string>& event_phrases,
                          std::span<const CandidatePhrase> pool,
                          const EmbeddingTable& phrase_vectors,
                          double tau = 0.95);

// Documents dated inside `span`, scored by their total number of mentions of
// `phrases`; keeps the best `pseudo_top` with a positive score, ties broken by
// earlier publication day then id. Empty when nothing matches.
PseudoLabelSet generate_pseudo_labels(std::string event_id, const DaySpan& span,
                                      const std::set<std::string>& phrases,
                                      const Corpus& corpus,
                                      const OccurrenceIndex& index,
                                      std::size_t pseudo_top = 10);

struct EnsembleOptions {
  int r = 2;
  int members = 50;
  std::uint64_t seed = 0;
  SvmOptions svm;
};

struct TrainingAudit {
  std::vector<std::size_t> samples_per_member;
  std::size_t negative_draws = 0;
};

// Member m draws r * |positives| negatives uniformly without replacement from
// the documents that are not positives, with seed derive_seed(seed, m).
// Throws UsageError when |positives| < 2 and DataError when the corpus has
// fewer than (r + 1) * |positives| documents or a vector is missing.
ClassifierEnsemble train_ensemble(const PseudoLabelSet& positives,
                                  const Corpus& corpus,
                                  const EmbeddingTable& doc_vectors,
                                  const EnsembleOptions& options,
                                  TrainingAudit* audit = nullptr);

struct Assignment {
  std::vector<KeyEvent> events;          // one per ensemble, same order
  std::vector<std::string> unassigned;   // no positive score anywhere
  std::vector<std::vector<double>> scores;  // [doc][event]
};

// Scores every document with every ensemble; a document goes to the first
// event with the maximal mean score if that score is positive.
Assignment score_and_assign(std::span<const ClassifierEnsemble> ensembles,
                            const Corpus& corpus,
                            const EmbeddingTable& doc_vectors);

struct PostFilterResult {
  KeyEvent event;
  std::vector<std::vector<std::string>> filtered_clusters;
};

// Out-of-span members are grouped into clusters of same-or-adjacent
// publication days. A member is removed when its cluster holds two or more
// documents, or when its lead-3 sentences mention no date inside the span.
PostFilterResult temporal_post_filter(const KeyEvent& event,
                                      const Corpus& corpus);

// Ensemble score of a pseudo-labelled document: (event index, doc id).
using PseudoScoreFn = std::function<double(std::size_t, const std::string&)>;

struct RefineResult {
  std::vector<PseudoLabelSet> pseudo;        // same order as the events
  std::vector<CandidateEvent> new_events;    // from filtered clusters
  std::vector<std::size_t> new_event_source; // index of the originating event
};

// (1) drops pseudo positives with a negative score, (2) appends the top
// `n_add` retrieved documents of each event that are not pseudo positives
// yet, (3) turns each filtered cluster of two or more documents into a
// candidate event whose phrases are the cluster's `top_phrases` best tf-idf
// phrases and whose span covers the cluster's publication days.
RefineResult refine_iteration(
    std::span<const KeyEvent> events, std::span<const PseudoLabelSet> pseudo,
    const PseudoScoreFn& pseudo_score,
    std::span<const std::vector<std::vector<std::string>>> filtered_clusters,
    const Corpus& corpus, const OccurrenceIndex& index, std::size_t n_add = 5,
    std::size_t top_phrases = 5);

// Cluster phrases ranked by (1 + ln tf_cluster) * ln(|D| / df_corpus).
std::vector<std::pair<std::string, double>> cluster_phrases(
    std::span<const std::string> doc_ids, const Corpus& corpus,
    const OccurrenceIndex& index, std::size_t top);

struct SelectionConfig {
  double tau = 0.95;
  std::size_t pseudo_top = 10;
  int r = 2;
  int ensemble_size = 50;
  std::size_t n_add = 5;
  int iterations = 2;
  std::size_t cluster_phrases = 5;
  std::uint64_t seed = 0;
  SvmOptions svm;
};

struct SelectionInputs {
  const Corpus& corpus;
  const OccurrenceIndex& index;            // over the full phrase vocabulary
  std::span<const CandidatePhrase> pool;   // candidate phrases for enrichment
  const EmbeddingTable& phrase_vectors;
  const EmbeddingTable& doc_vectors;
};

struct SelectionResult {
  std::vector<KeyEvent> events;     // non-empty events, in id order
  std::vector<std::string> outliers;
};

// Full loop for config.iterations rounds. Events whose pseudo set has fewer
// than two documents are dropped. `audit`, when given, receives one JSON
// object per line describing every pseudo-label change and new event.
SelectionResult run_selection_loop(std::span<const CandidateEvent> candidates,
                                   const SelectionInputs& inputs,
                                   const SelectionConfig& config,
                                   std::ostream* audit = nullptr);

// Phrase matching only: each document goes to the candidate whose enriched
// phrases it mentions most inside that candidate's span.
std::vector<KeyEvent> phrase_matching_events(
    std::span<const CandidateEvent> candidates, const SelectionInputs& inputs,
    double tau = 0.95);

}  // namespace keyevent

#endif  // KEYEVENT_DOC_SELECTION_H_
