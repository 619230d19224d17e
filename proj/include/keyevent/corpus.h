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

// Dated news corpus: ingestion, theme retrieval and phrase occurrence
// counting. Days are integer offsets from the corpus origin (the earliest
// publication date at ingestion), so document-free days are ordinary days.

#ifndef KEYEVENT_CORPUS_H_
#define KEYEVENT_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "keyevent/dates.h"
#include "keyevent/text.h"

namespace keyevent {

using DocIndex = std::size_t;

// Inclusive day range. A default-constructed span is empty.
struct DaySpan {
  int first = 0;
  int last = -1;

  bool empty() const { return last < first; }
  int width() const { return empty() ? 0 : last - first + 1; }
  bool contains(int day) const { return day >= first && day <= last; }

  bool operator==(const DaySpan&) const = default;
};

struct Document {
  std::string id;
  int day = 0;
  CivilDate date;
  std::string title;
  std::string raw_text;
  std::vector<std::string> raw_sentences;
  std::vector<Tokens> sentences;

  std::size_t num_tokens() const;
  // First `n` raw sentences (fewer if the document is shorter).
  std::string lead(std::size_t n = 3) const;
};

// Builds a document from raw text. Sentences that normalize to no tokens are
// dropped. Throws DataError when nothing remains.
Document make_document(std::string id, const CivilDate& date, std::string title,
                       std::string text, int origin_days);

class Corpus {
 public:
  Corpus() = default;

  // `origin_days` is the epoch day of offset 0. Every document's `day` must
  // equal to_epoch_days(date) - origin_days. Throws DataError on duplicate ids.
  Corpus(std::vector<Document> documents, int origin_days);

  std::size_t size() const { return documents_.size(); }
  bool empty() const { return documents_.empty(); }
  const std::vector<Document>& documents() const { return documents_; }
  const Document& operator[](DocIndex i) const { return documents_[i]; }

  std::optional<DocIndex> find(std::string_view id) const;

  // [min day, max day] over documents; empty for an empty corpus.
  DaySpan span() const { return span_; }

  // Documents published on `day` (empty outside the span or on quiet days).
  std::span<const DocIndex> docs_on(int day) const;

  int origin_days() const { return origin_days_; }
  CivilDate date_of(int day) const { return from_epoch_days(origin_days_ + day); }
  // Day offset of an absolute epoch day.
  int day_of(int epoch_days) const { return epoch_days - origin_days_; }

 private:
  std::vector<Document> documents_;
  std::unordered_map<std::string, DocIndex> by_id_;
  std::vector<std::vector<DocIndex>> day_index_;
  DaySpan span_;
  int origin_days_ = 0;
};

// JSONL, one object per line: {"id", "date": "YYYY-MM-DD", "title"?, "text"}.
// Errors name the offending (1-based) line.
Corpus read_corpus(std::istream& in);
Corpus ingest_corpus(const std::filesystem::path& path);
void write_corpus(const Corpus& corpus, std::ostream& out);

// ---------------------------------------------------------------------------
// Theme retrieval

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct RetrievalCutoff {
  enum class Mode { kThreshold, kTopFraction };
  Mode mode = Mode::kThreshold;
  // Threshold: keep score > value. Top fraction: keep the best
  // ceil(value * n) of the n positively scored in-window documents.
  double value = 0.0;
};

struct ScoredDoc {
  std::string id;
  double score = 0.0;
};

struct ThemeRetrieval {
  Corpus corpus;                   // original document order, same origin
  std::vector<ScoredDoc> ranking;  // retained docs, best first
};

// Okapi BM25 with the always-positive idf ln(1 + (N - n + 0.5) / (n + 0.5)).
// Query terms are tokenized and deduplicated.
std::vector<double> bm25_scores(const Corpus& corpus,
                                std::span<const std::string> query,
                                const Bm25Params& params = {});

ThemeRetrieval retrieve_theme(const Corpus& corpus,
                              std::span<const std::string> query,
                              const DaySpan& date_window,
                              const RetrievalCutoff& cutoff = {},
                              const Bm25Params& params = {});

// ---------------------------------------------------------------------------
// Phrase occurrence index

struct Posting {
  DocIndex doc = 0;
  std::size_t count = 0;
};

// Exact counts of contiguous token-sequence matches within sentences;
// overlapping matches count at every start position. Immutable once built.
class OccurrenceIndex {
 public:
  OccurrenceIndex() = default;

  static OccurrenceIndex build(const Corpus& corpus,
                               std::span<const std::string> phrases);

  // Normalized, deduplicated phrases in first-seen order.
  const std::vector<std::string>& phrases() const { return phrases_; }
  bool contains(std::string_view phrase) const;

  std::size_t doc_freq(std::string_view phrase, DocIndex doc) const;
  std::size_t day_freq(std::string_view phrase, int day) const;
  std::size_t total_freq(std::string_view phrase) const;
  std::size_t doc_count(std::string_view phrase) const;

  // Documents containing the phrase, ascending by index.
  std::span<const Posting> postings(std::string_view phrase) const;
  // Per-day summed counts for days with a positive count.
  const std::map<int, std::size_t>& day_counts(std::string_view phrase) const;

  std::vector<DocIndex> doc_presence(std::string_view phrase) const;
  std::vector<int> day_presence(std::string_view phrase) const;

 private:
  struct Entry {
    std::vector<Posting> postings;
    std::map<int, std::size_t> by_day;
    std::size_t total = 0;
  };
  const Entry* entry(std::string_view phrase) const;

  std::vector<std::string> phrases_;
  std::unordered_map<std::string, std::size_t> ids_;
  std::vector<Entry> entries_;
};

}  // namespace keyevent

#endif  // KEYEVENT_CORPUS_H_
