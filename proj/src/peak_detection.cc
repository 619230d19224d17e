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

#include "keyevent/peak_detection.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "keyevent/error.h"
#include "keyevent/format.h"

namespace keyevent {

double ttf(std::string_view phrase, int day, const OccurrenceIndex& index,
           int n_t, int span_end) {
  if (n_t < 1) throw UsageError("n_t must be >= 1");
  const auto& counts = index.day_counts(phrase);
  double sum = 0.0;
  for (int i = 0; i < n_t; ++i) {
    const int t = day + i;
    if (t > span_end) break;
    const auto it = counts.find(t);
    if (it == counts.end()) continue;
    sum += (1.0 - static_cast<double>(i) / n_t) * static_cast<double>(it->second);
  }
  return sum / n_t;
}

double itf(std::string_view phrase, const DaySpan& span,
           const OccurrenceIndex& index) {
  std::size_t active = 0;
  for (const auto& [day, count] : index.day_counts(phrase)) {
    if (count > 0 && span.contains(day)) ++active;
  }
  if (active == 0) {
    throw UsageError("itf of phrase '" + std::string(phrase) +
                     "' that never occurs in the span");
  }
  return static_cast<double>(span.width()) / static_cast<double>(active);
}

double ttf_itf(std::string_view phrase, int day, const OccurrenceIndex& index,
               int n_t, const DaySpan& span) {
  return ttf(phrase, day, index, n_t, span.last) *
         std::log(itf(phrase, span, index));
}

std::vector<PeakPhrase> score_pairs(std::span<const CandidatePhrase> candidates,
                                    const OccurrenceIndex& index,
                                    const DaySpan& span, int n_t) {
  if (n_t < 1) throw UsageError("n_t must be >= 1");
  std::vector<std::string> phrases;
  for (const auto& c : candidates) phrases.push_back(c.phrase);
  std::sort(phrases.begin(), phrases.end());
  phrases.erase(std::unique(phrases.begin(), phrases.end()), phrases.end());

  std::vector<PeakPhrase> out;
  for (const auto& phrase : phrases) {
    const auto& counts = index.day_counts(phrase);
    std::set<int> days;
    for (const auto& [day, count] : counts) {
      if (!span.contains(day) || count == 0) continue;
      for (int t = std::max(span.first, day - n_t + 1); t <= day; ++t) {
        days.insert(t);
      }
    }
    if (days.empty()) continue;
    const double phrase_itf = itf(phrase, span, index);
    const double log_itf = std::log(phrase_itf);
    for (int day : days) {
      const double f = ttf(phrase, day, index, n_t, span.last);
      if (f <= 0.0) continue;
      out.push_back({phrase, day, f, phrase_itf, f * log_itf});
    }
  }
  return out;
}

std::vector<PeakPhrase> select_peaks(std::span<const PeakPhrase> scored,
                                     const PeakSelection& selection) {
  std::size_t budget = selection.count;
  if (selection.mode == PeakSelection::Mode::kQuantile) {
    if (!(selection.quantile > 0.0 && selection.quantile <= 1.0)) {
      throw UsageError("peak quantile must lie in (0, 1]");
    }
    std::size_t with_ttf = 0;
    for (const auto& p : scored) with_ttf += p.ttf > 0.0;
    budget = static_cast<std::size_t>(std::ceil(
        selection.quantile * static_cast<double>(with_ttf) - 1e-9));
  }
  std::vector<PeakPhrase> positive;
  for (const auto& p : scored) {
    if (p.score > 0.0) positive.push_back(p);
  }
  std::sort(positive.begin(), positive.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.phrase != b.phrase) return a.phrase < b.phrase;
    return a.day < b.day;
  });
  positive.resize(std::min(budget, positive.size()));
  return positive;
}

void write_peaks(std::span<const PeakPhrase> peaks, const Corpus& corpus,
                 std::ostream& out) {
  out << "phrase\tdate\tttf\titf\tscore\n";
  for (const auto& p : peaks) {
    out << p.phrase << '\t' << format_iso(corpus.date_of(p.day)) << '\t'
        << format_double(p.ttf) << '\t' << format_double(p.itf) << '\t'
        << format_double(p.score) << '\n';
  }
}

std::vector<PeakPhrase> read_peaks(std::istream& in, const Corpus& corpus) {
  std::vector<PeakPhrase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("phrase\t", 0) == 0) continue;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      throw DataError("peak line " + std::to_string(line_no) +
                      ": expected 5 fields");
    }
    const auto date = parse_iso_date(f[1]);
    if (!date) {
      throw DataError("peak line " + std::to_string(line_no) + ": bad date");
    }
    PeakPhrase p;
    p.phrase = f[0];
    p.day = corpus.day_of(to_epoch_days(*date));
    p.ttf = parse_double(f[2], "ttf", line_no);
    p.itf = parse_double(f[3], "itf", line_no);
    p.score = parse_double(f[4], "score", line_no);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace keyevent
