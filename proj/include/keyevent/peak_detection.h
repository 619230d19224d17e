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

// Temporal term frequency / inverse time frequency scoring of (phrase, day)
// pairs, and selection of peak phrases from the scored pairs.

#ifndef KEYEVENT_PEAK_DETECTION_H_
#define KEYEVENT_PEAK_DETECTION_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "keyevent/corpus.h"
#include "keyevent/phrase_mining.h"

namespace keyevent {

struct PeakPhrase {
  std::string phrase;
  int day = 0;
  double ttf = 0.0;
  double itf = 1.0;
  double score = 0.0;  // ttf * ln(itf)

  // Node identity is (phrase, day); scores are payload.
  bool same_node(const PeakPhrase& o) const {
    return phrase == o.phrase && day == o.day;
  }
};

// (1/n_t) * sum_{i<n_t} (1 - i/n_t) * freq_{day+i}. Days after span_end
// contribute nothing.
double ttf(std::string_view phrase, int day, const OccurrenceIndex& index,
           int n_t, int span_end);

// Calendar days in the span over days on which the phrase occurs. Throws
// UsageError for a phrase that never occurs.
double itf(std::string_view phrase, const DaySpan& span,
           const OccurrenceIndex& index);

double ttf_itf(std::string_view phrase, int day, const OccurrenceIndex& index,
               int n_t, const DaySpan& span);

// Every in-span (phrase, day) pair with ttf > 0, for the given phrases.
// Output sorted by phrase then day.
std::vector<PeakPhrase> score_pairs(std::span<const CandidatePhrase> candidates,
                                    const OccurrenceIndex& index,
                                    const DaySpan& span, int n_t = 3);

struct PeakSelection {
  enum class Mode { kQuantile, kCount };
  Mode mode = Mode::kQuantile;
  double quantile = 0.03;
  std::size_t count = 0;

  static PeakSelection top_quantile(double q) {
    return {Mode::kQuantile, q, 0};
  }
  static PeakSelection top_count(std::size_t n) { return {Mode::kCount, 0.0, n}; }
};

// Keeps the best positively scored pairs: ceil(q * #pairs with ttf > 0) in
// quantile mode, or a fixed count. Ranked by score descending, then phrase,
// then day.
std::vector<PeakPhrase> select_peaks(std::span<const PeakPhrase> scored,
                                     const PeakSelection& selection = {});

// TSV: phrase, date (ISO), ttf, itf, score.
void write_peaks(std::span<const PeakPhrase> peaks, const Corpus& corpus,
                 std::ostream& out);
std::vector<PeakPhrase> read_peaks(std::istream& in, const Corpus& corpus);

}  // namespace keyevent

#endif  // KEYEVENT_PEAK_DETECTION_H_
