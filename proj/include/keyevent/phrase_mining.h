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

#ifndef KEYEVENT_PHRASE_MINING_H_
#define KEYEVENT_PHRASE_MINING_H_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "keyevent/corpus.h"

namespace keyevent {

struct CandidatePhrase {
  std::string phrase;
  std::size_t total_freq = 0;
  std::size_t doc_count = 0;
  double tfidf = 0.0;
};

using StopwordSet = std::set<std::string, std::less<>>;

// Built-in English list (~120 function words).
const StopwordSet& default_stopwords();

// One word per line; blank lines and lines starting with '#' are ignored.
StopwordSet read_stopwords(const std::filesystem::path& path);

// One phrase per line, normalized with the corpus tokenizer; duplicates and
// lines without tokens are dropped.
std::vector<std::string> read_phrase_list(std::istream& in);
std::vector<std::string> read_phrase_list(const std::filesystem::path& path);

// Every contiguous n-gram of 1..max_len tokens inside a sentence occurring at
// least min_count times, minus those that start or end with a stopword.
// Sorted by phrase.
std::vector<CandidatePhrase> mine_fallback_ngrams(
    const Corpus& corpus, int max_len, int min_count,
    const StopwordSet& stopwords = default_stopwords());

// (1 + ln total_freq) * ln(num_docs / doc_count). Throws UsageError when the
// phrase never occurs.
double corpus_tfidf(std::size_t total_freq, std::size_t doc_count,
                    std::size_t num_docs);
double corpus_tfidf(const CandidatePhrase& phrase, const OccurrenceIndex& index,
                    std::size_t num_docs);

// Statistics and tf-idf for every indexed phrase that occurs at least once,
// in index order.
std::vector<CandidatePhrase> score_phrases(const OccurrenceIndex& index,
                                           std::size_t num_docs);

// Keeps the top ceil(keep_fraction * N) phrases by tf-idf, ties broken by
// higher total_freq and then by phrase text. Output is in that rank order.
std::vector<CandidatePhrase> filter_candidates(
    std::vector<CandidatePhrase> phrases, double keep_fraction = 0.70);

// TSV: phrase, total_freq, doc_count, tfidf.
void write_candidates(std::span<const CandidatePhrase> phrases,
                      std::ostream& out);
std::vector<CandidatePhrase> read_candidates(std::istream& in);

}  // namespace keyevent

#endif  // KEYEVENT_PHRASE_MINING_H_
