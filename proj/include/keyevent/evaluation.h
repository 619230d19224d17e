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

// Event-level k-precision, k-recall and k-F1.
//
// A predicted event k-matches a truth event when strictly more than k/2 of
// its top-k documents belong to it. Precision counts distinct matched truth
// events over the predictions with at least k documents; recall counts them
// over all truth events.

#ifndef KEYEVENT_EVALUATION_H_
#define KEYEVENT_EVALUATION_H_

#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "keyevent/doc_selection.h"

namespace keyevent {

struct TruthEvent {
  std::string id;
  std::set<std::string> doc_ids;
};

struct GroundTruth {
  std::vector<TruthEvent> events;
};

// JSONL: {"event_id": ..., "doc_ids": [...]} per line. Throws DataError on
// malformed lines, empty events, duplicate event ids or an empty file.
GroundTruth read_ground_truth(std::istream& in);
GroundTruth load_ground_truth(const std::filesystem::path& path);
void write_ground_truth(const GroundTruth& truth, std::ostream& out);

bool kmatch(std::span<const ScoredDoc> ranked, const std::set<std::string>& truth,
            int k);

struct KMetrics {
  int k = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t matched = 0;      // distinct truth events matched
  std::size_t predictions = 0;  // predictions with >= k documents
};

KMetrics k_metrics(std::span<const KeyEvent> predicted, const GroundTruth& truth,
                   int k);

// Header plus one row per k: k, precision, recall, f1, matched, predictions.
void write_metrics(std::span<const KMetrics> rows, std::ostream& out);

}  // namespace keyevent

#endif  // KEYEVENT_EVALUATION_H_
