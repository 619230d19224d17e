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

#include "keyevent/phrase_mining.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "keyevent/error.h"
#include "keyevent/format.h"

namespace keyevent {

const StopwordSet& default_stopwords() {
  static const StopwordSet kWords = {
      "a",       "about",   "above",  "after",   "again",  "against", "all",
      "also",    "am",      "an",     "and",     "any",    "are",     "as",
      "at",      "be",      "because", "been",   "before", "being",   "below",
      "between", "both",    "but",    "by",      "can",    "could",   "did",
      "do",      "does",    "doing",  "down",    "during", "each",    "few",
      "for",     "from",    "further", "had",    "has",    "have",    "having",
      "he",      "her",     "here",   "hers",    "herself", "him",    "himself",
      "his",     "how",     "i",      "if",      "in",     "into",    "is",
      "it",      "its",     "itself", "just",    "me",     "more",    "most",
      "my",      "myself",  "no",     "nor",     "not",    "now",     "of",
      "off",     "on",      "once",   "only",    "or",     "other",   "our",
      "ours",    "out",     "over",   "own",     "said",   "same",    "says",
      "she",     "should",  "so",     "some",    "such",   "than",    "that",
      "the",     "their",   "theirs", "them",    "then",   "there",   "these",
      "they",    "this",    "those",  "through", "to",     "too",     "under",
      "until",   "up",      "very",   "was",     "we",     "were",    "what",
      "when",    "where",   "which",  "while",   "who",    "whom",    "why",
      "will",    "with",    "would",  "you",     "your",   "yours",
  };
  return kWords;
}

StopwordSet read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open stopword file " + path.string());
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    for (auto& tok : tokenize(line)) words.insert(std::move(tok));
  }
  return words;
}

std::vector<std::string> read_phrase_list(std::istream& in) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  std::string line;
  while (std::getline(in, line)) {
    std::string norm = normalize_phrase(line);
    if (norm.empty() || !seen.insert(norm).second) continue;
    out.push_back(std::move(norm));
  }
  return out;
}

std::vector<std::string> read_phrase_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open phrase file " + path.string());
  return read_phrase_list(in);
}

std::vector<CandidatePhrase> mine_fallback_ngrams(const Corpus& corpus,
                                                  int max_len, int min_count,
                                                  const StopwordSet& stopwords) {
  if (max_len < 1) throw UsageError("max_len must be >= 1");
  if (min_count < 1) throw UsageError("min_count must be >= 1");

  struct Stats {
    std::size_t total = 0;
    std::size_t docs = 0;
    DocIndex last_doc = static_cast<DocIndex>(-1);
  };
  std::unordered_map<std::string, Stats> counts;
  std::string key;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    for (const auto& sentence : corpus[d].sentences) {
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        if (stopwords.contains(sentence[i])) continue;
        key.clear();
        for (std::size_t len = 1;
             len <= static_cast<std::size_t>(max_len) && i + len <= sentence.size();
             ++len) {
          const std::string& tail = sentence[i + len - 1];
          if (len > 1) key.push_back(' ');
          key += tail;
          if (stopwords.contains(tail)) continue;
          Stats& s = counts[key];
          ++s.total;
          if (s.last_doc != d) {
            ++s.docs;
            s.last_doc = d;
          }
        }
      }
    }
  }

  std::vector<CandidatePhrase> out;
  for (const auto& [phrase, s] : counts) {
    if (s.total < static_cast<std::size_t>(min_count)) continue;
    out.push_back({phrase, s.total, s.docs,
                   corpus_tfidf(s.total, s.docs, corpus.size())});
  }
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.phrase < b.phrase; });
  return out;
}

double corpus_tfidf(std::size_t total_freq, std::size_t doc_count,
                    std::size_t num_docs) {
  if (total_freq == 0 || doc_count == 0) {
    throw UsageError("tf-idf of a phrase that never occurs");
  }
  return (1.0 + std::log(static_cast<double>(total_freq))) *
         std::log(static_cast<double>(num_docs) /
                  static_cast<double>(doc_count));
}

double corpus_tfidf(const CandidatePhrase& phrase, const OccurrenceIndex& index,
                    std::size_t num_docs) {
  return corpus_tfidf(index.total_freq(phrase.phrase),
                      index.doc_count(phrase.phrase), num_docs);
}

std::vector<CandidatePhrase> score_phrases(const OccurrenceIndex& index,
                                           std::size_t num_docs) {
  std::vector<CandidatePhrase> out;
  for (const auto& p : index.phrases()) {
    const std::size_t total = index.total_freq(p);
    if (total == 0) continue;
    const std::size_t docs = index.doc_count(p);
    out.push_back({p, total, docs, corpus_tfidf(total, docs, num_docs)});
  }
  return out;
}

std::vector<CandidatePhrase> filter_candidates(
    std::vector<CandidatePhrase> phrases, double keep_fraction) {
  if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
    throw UsageError("keep_fraction must lie in (0, 1]");
  }
  std::sort(phrases.begin(), phrases.end(), [](const auto& a, const auto& b) {
    if (a.tfidf != b.tfidf) return a.tfidf > b.tfidf;
    if (a.total_freq != b.total_freq) return a.total_freq > b.total_freq;
    return a.phrase < b.phrase;
  });
  const auto keep = static_cast<std::size_t>(std::ceil(
      keep_fraction * static_cast<double>(phrases.size()) - 1e-9));
  phrases.resize(std::min(keep, phrases.size()));
  return phrases;
}

void write_candidates(std::span<const CandidatePhrase> phrases,
                      std::ostream& out) {
  out << "phrase\ttotal_freq\tdoc_count\ttfidf\n";
  for (const auto& p : phrases) {
    out << p.phrase << '\t' << p.total_freq << '\t' << p.doc_count << '\t'
        << format_double(p.tfidf) << '\n';
  }
}

std::vector<CandidatePhrase> read_candidates(std::istream& in) {
  std::vector<CandidatePhrase> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("phrase\t", 0) == 0) continue;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 4) {
      throw DataError("candidate line " + std::to_string(line_no) +
                      ": expected 4 fields");
    }
    CandidatePhrase c;
    c.phrase = fields[0];
    c.total_freq = parse_size(fields[1], "total_freq", line_no);
    c.doc_count = parse_size(fields[2], "doc_count", line_no);
    c.tfidf = parse_double(fields[3], "tfidf", line_no);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace keyevent
