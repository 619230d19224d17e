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

// Topic-time peak phrase graph and candidate event detection.
//
// Nodes are peak phrases. Two same-day nodes are joined by the geometric mean
// of their truncated day-restricted npmi and truncated embedding cosine (at
// most 1). The same phrase on consecutive days is joined by a constant
// weight w_const > 1, which keeps multi-day events together.

#ifndef KEYEVENT_EVENT_GRAPH_H_
#define KEYEVENT_EVENT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "keyevent/corpus.h"
#include "keyevent/embeddings.h"
#include "keyevent/louvain.h"
#include "keyevent/peak_detection.h"

namespace keyevent {

struct PeakPhraseGraph {
  std::vector<PeakPhrase> nodes;  // sorted by (phrase, day), unique
  std::map<std::pair<std::size_t, std::size_t>, double> edges;  // i < j
  double w_const = 3.0;

  double weight(std::size_t i, std::size_t j) const;
  std::optional<std::size_t> node_index(std::string_view phrase, int day) const;
  WeightedGraph to_weighted() const;
};

// Normalized PMI of two same-day peak phrases over the documents of that day.
// Zero co-occurrence yields -1; co-occurrence in every document of the day
// yields 1. Throws UsageError for different days and DataError when the day
// has no documents.
double npmi(const PeakPhrase& a, const PeakPhrase& b, const Corpus& corpus,
            const OccurrenceIndex& index);

// sqrt(max(npmi, 0) * max(cos, 0)).
double same_day_weight(double npmi_value, double cos_value);
double same_day_weight(const PeakPhrase& a, const PeakPhrase& b,
                       double npmi_value, double cos_value);

// Throws UsageError unless w_const > 1, and DataError listing every peak
// phrase without a vector in `phrase_vectors`. Same-day edges whose weight is
// not above `edge_floor` (and never zero) are omitted, as are all same-day
// edges on days without documents.
PeakPhraseGraph build_graph(std::span<const PeakPhrase> peaks,
                            const Corpus& corpus, const OccurrenceIndex& index,
                            const EmbeddingTable& phrase_vectors,
                            double w_const = 3.0, double edge_floor = 0.0);

struct CandidateEvent {
  std::set<std::string> phrases;
  DaySpan span;
  std::vector<PeakPhrase> members;  // empty for events built from documents
};

// Partitions the graph (Louvain unless `detector` is given), drops
// communities with fewer than `min_size` nodes, and orders the rest by span.
std::vector<CandidateEvent> detect_communities(
    const PeakPhraseGraph& graph, std::size_t min_size = 2,
    double resolution = 1.0, std::uint64_t seed = 0,
    const CommunityDetector* detector = nullptr);

// TSV edge list: phrase_i, date_i, phrase_j, date_j, weight.
void write_graph(const PeakPhraseGraph& graph, const Corpus& corpus,
                 std::ostream& out);
// Rebuilds a graph from its nodes and an edge list written by write_graph.
PeakPhraseGraph read_graph(std::istream& in, std::span<const PeakPhrase> nodes,
                           const Corpus& corpus, double w_const);

// One line per event: id, first date, last date, phrases, member nodes.
// Phrases and nodes are " | "-separated; nodes are written phrase@date.
void write_events(std::span<const CandidateEvent> events, const Corpus& corpus,
                  std::ostream& out);
std::vector<CandidateEvent> read_events(std::istream& in, const Corpus& corpus);

}  // namespace keyevent

#endif  // KEYEVENT_EVENT_GRAPH_H_
