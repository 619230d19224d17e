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

#include "keyevent/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "keyevent/error.h"
#include "json.hpp"

namespace keyevent {

using json = nlohmann::json;

std::size_t Document::num_tokens() const {
  std::size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

std::string Document::lead(std::size_t n) const {
  std::string out;
  for (std::size_t i = 0; i < raw_sentences.size() && i < n; ++i) {
    if (i) out.push_back(' ');
    out += raw_sentences[i];
  }
  return out;
}

Document make_document(std::string id, const CivilDate& date, std::string title,
                       std::string text, int origin_days) {
  Document doc;
  doc.id = std::move(id);
  doc.date = date;
  doc.day = to_epoch_days(date) - origin_days;
  doc.title = std::move(title);
  for (auto& sentence : split_sentences(text)) {
    Tokens tokens = tokenize(sentence);
    if (tokens.empty()) continue;
    doc.raw_sentences.push_back(std::move(sentence));
    doc.sentences.push_back(std::move(tokens));
  }
  doc.raw_text = std::move(text);
  if (doc.sentences.empty()) {
    throw DataError("document '" + doc.id + "' has no tokens");
  }
  return doc;
}

Corpus::Corpus(std::vector<Document> documents, int origin_days)
    : documents_(std::move(documents)), origin_days_(origin_days) {
  by_id_.reserve(documents_.size());
  int lo = std::numeric_limits<int>::max();
  int hi = std::numeric_limits<int>::min();
  for (DocIndex i = 0; i < documents_.size(); ++i) {
    const Document& d = documents_[i];
    if (!by_id_.emplace(d.id, i).second) {
      throw DataError("duplicate document id '" + d.id + "'");
    }
    if (d.day != to_epoch_days(d.date) - origin_days_) {
      throw DataError("document '" + d.id + "' day offset disagrees with date");
    }
    lo = std::min(lo, d.day);
    hi = std::max(hi, d.day);
  }
  if (documents_.empty()) return;
  span_ = DaySpan{lo, hi};
  day_index_.resize(static_cast<std::size_t>(span_.width()));
  for (DocIndex i = 0; i < documents_.size(); ++i) {
    day_index_[static_cast<std::size_t>(documents_[i].day - lo)].push_back(i);
  }
}

std::optional<DocIndex> Corpus::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::span<const DocIndex> Corpus::docs_on(int day) const {
  if (!span_.contains(day)) return {};
  return day_index_[static_cast<std::size_t>(day - span_.first)];
}

// ---------------------------------------------------------------------------
// JSONL

namespace {

struct RawRecord {
  std::string id;
  CivilDate date;
  std::string title;
  std::string text;
  std::size_t line = 0;
};

[[noreturn]] void fail_line(std::size_t line, const std::string& what) {
  throw DataError("corpus line " + std::to_string(line) + ": " + what);
}

std::string required_string(const json& obj, const char* key,
                            std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail_line(line, std::string("missing \"") + key + "\"");
  if (!it->is_string()) {
    fail_line(line, std::string("\"") + key + "\" must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

Corpus read_corpus(std::istream& in) {
  std::vector<RawRecord> records;
  std::set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      fail_line(line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line_no, "record is not a JSON object");
    RawRecord rec;
    rec.line = line_no;
    rec.id = required_string(obj, "id", line_no);
    if (rec.id.empty()) fail_line(line_no, "empty id");
    const std::string date = required_string(obj, "date", line_no);
    const auto parsed = parse_iso_date(date);
    if (!parsed) fail_line(line_no, "unparseable date '" + date + "'");
    rec.date = *parsed;
    if (const auto it = obj.find("title"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) fail_line(line_no, "\"title\" must be a string");
      rec.title = it->get<std::string>();
    }
    rec.text = required_string(obj, "text", line_no);
    if (!seen.insert(rec.id).second) {
      fail_line(line_no, "duplicate id '" + rec.id + "'");
    }
    records.push_back(std::move(rec));
  }

  int origin = 0;
  if (!records.empty()) {
    origin = std::numeric_limits<int>::max();
    for (const auto& r : records) origin = std::min(origin, to_epoch_days(r.date));
  }
  std::vector<Document> docs;
  docs.reserve(records.size());
  for (auto& r : records) {
    try {
      docs.push_back(make_document(std::move(r.id), r.date, std::move(r.title),
                                   std::move(r.text), origin));
    } catch (const DataError& e) {
      fail_line(r.line, e.what());
    }
  }
  return Corpus(std::move(docs), origin);
}

Corpus ingest_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file " + path.string());
  return read_corpus(in);
}

void write_corpus(const Corpus& corpus, std::ostream& out) {
  for (const Document& d : corpus.documents()) {
    json obj;
    obj["id"] = d.id;
    obj["date"] = format_iso(d.date);
    obj["title"] = d.title;
    obj["text"] = d.raw_text;
    out << obj.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// BM25

namespace {

std::vector<std::string> query_terms(std::span<const std::string> query) {
  std::set<std::string> terms;
  for (const auto& q : query) {
    for (auto& t : tokenize(q)) terms.insert(std::move(t));
  }
  return {terms.begin(), terms.end()};
}

}  // namespace

std::vector<double> bm25_scores(const Corpus& corpus,
                                std::span<const std::string> query,
                                const Bm25Params& params) {
  const auto terms = query_terms(query);
  if (terms.empty()) throw UsageError("retrieval query has no terms");
  const std::size_t n_docs = corpus.size();
  std::vector<double> scores(n_docs, 0.0);
  if (n_docs == 0) return scores;

  // tf[t][d]
  std::vector<std::vector<std::size_t>> tf(terms.size(),
                                           std::vector<std::size_t>(n_docs));
  double total_len = 0.0;
  for (DocIndex d = 0; d < n_docs; ++d) {
    total_len += static_cast<double>(corpus[d].num_tokens());
    for (const auto& sentence : corpus[d].sentences) {
      for (const auto& tok : sentence) {
        const auto it = std::lower_bound(terms.begin(), terms.end(), tok);
        if (it != terms.end() && *it == tok) ++tf[it - terms.begin()][d];
      }
    }
  }
  const double avgdl = total_len / static_cast<double>(n_docs);

  for (std::size_t t = 0; t < terms.size(); ++t) {
    std::size_t df = 0;
    for (auto c : tf[t]) df += c > 0;
    if (df == 0) continue;
    const double idf = std::log(
        1.0 + (static_cast<double>(n_docs - df) + 0.5) / (static_cast<double>(df) + 0.5));
    for (DocIndex d = 0; d < n_docs; ++d) {
      if (tf[t][d] == 0) continue;
      const double f = static_cast<double>(tf[t][d]);
      const double dl = static_cast<double>(corpus[d].num_tokens());
      scores[d] += idf * f * (params.k1 + 1.0) /
                   (f + params.k1 * (1.0 - params.b + params.b * dl / avgdl));
    }
  }
  return scores;
}

ThemeRetrieval retrieve_theme(const Corpus& corpus,
                              std::span<const std::string> query,
                              const DaySpan& date_window,
                              const RetrievalCutoff& cutoff,
                              const Bm25Params& params) {
  if (cutoff.mode == RetrievalCutoff::Mode::kTopFraction &&
      !(cutoff.value > 0.0 && cutoff.value <= 1.0)) {
    throw UsageError("top fraction must lie in (0, 1]");
  }
  const auto scores = bm25_scores(corpus, query, params);

  std::vector<DocIndex> candidates;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    if (!date_window.contains(corpus[d].day)) continue;
    if (cutoff.mode == RetrievalCutoff::Mode::kThreshold) {
      if (scores[d] > cutoff.value) candidates.push_back(d);
    } else if (scores[d] > 0.0) {
      candidates.push_back(d);
    }
  }
  std::sort(candidates.begin(), candidates.end(), [&](DocIndex a, DocIndex b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return corpus[a].id < corpus[b].id;
  });
  if (cutoff.mode == RetrievalCutoff::Mode::kTopFraction) {
    const auto keep = static_cast<std::size_t>(
        std::ceil(cutoff.value * static_cast<double>(candidates.size()) - 1e-9));
    candidates.resize(std::min(keep, candidates.size()));
  }

  ThemeRetrieval out;
  for (DocIndex d : candidates) out.ranking.push_back({corpus[d].id, scores[d]});
  std::vector<DocIndex> kept = candidates;
  std::sort(kept.begin(), kept.end());
  std::vector<Document> docs;
  docs.reserve(kept.size());
  for (DocIndex d : kept) docs.push_back(corpus[d]);
  out.corpus = Corpus(std::move(docs), corpus.origin_days());
  return out;
}

// ---------------------------------------------------------------------------
// Occurrence index

OccurrenceIndex OccurrenceIndex::build(const Corpus& corpus,
                                       std::span<const std::string> phrases) {
  OccurrenceIndex index;
  std::size_t max_len = 0;
  for (const auto& raw : phrases) {
    const Tokens tokens = tokenize(raw);
    if (tokens.empty()) continue;
    std::string norm = join_tokens(tokens);
    if (index.ids_.emplace(norm, index.phrases_.size()).second) {
      index.phrases_.push_back(std::move(norm));
      max_len = std::max(max_len, tokens.size());
    }
  }
  index.entries_.resize(index.phrases_.size());

  std::vector<std::size_t> local(index.phrases_.size(), 0);
  std::vector<std::size_t> touched;
  std::string key;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    for (const auto& sentence : corpus[d].sentences) {
      for (std::size_t i = 0; i < sentence.size(); ++i) {
        key.clear();
        for (std::size_t len = 1; len <= max_len && i + len <= sentence.size();
             ++len) {
          if (len > 1) key.push_back(' ');
          key += sentence[i + len - 1];
          const auto it = index.ids_.find(key);
          if (it == index.ids_.end()) continue;
          if (local[it->second]++ == 0) touched.push_back(it->second);
        }
      }
    }
    for (std::size_t p : touched) {
      Entry& e = index.entries_[p];
      e.postings.push_back({d, local[p]});
      e.by_day[corpus[d].day] += local[p];
      e.total += local[p];
      local[p] = 0;
    }
    touched.clear();
  }
  return index;
}

const OccurrenceIndex::Entry* OccurrenceIndex::entry(
    std::string_view phrase) const {
  const auto it = ids_.find(std::string(phrase));
  return it == ids_.end() ? nullptr : &entries_[it->second];
}

bool OccurrenceIndex::contains(std::string_view phrase) const {
  return entry(phrase) != nullptr;
}

std::size_t OccurrenceIndex::doc_freq(std::string_view phrase,
                                      DocIndex doc) const {
  const Entry* e = entry(phrase);
  if (!e) return 0;
  const auto it = std::lower_bound(
      e->postings.begin(), e->postings.end(), doc,
      [](const Posting& p, DocIndex d) { return p.doc < d; });
  return it != e->postings.end() && it->doc == doc ? it->count : 0;
}

std::size_t OccurrenceIndex::day_freq(std::string_view phrase, int day) const {
  const Entry* e = entry(phrase);
  if (!e) return 0;
  const auto it = e->by_day.find(day);
  return it == e->by_day.end() ? 0 : it->second;
}

std::size_t OccurrenceIndex::total_freq(std::string_view phrase) const {
  const Entry* e = entry(phrase);
  return e ? e->total : 0;
}

std::size_t OccurrenceIndex::doc_count(std::string_view phrase) const {
  const Entry* e = entry(phrase);
  return e ? e->postings.size() : 0;
}

std::span<const Posting> OccurrenceIndex::postings(
    std::string_view phrase) const {
  const Entry* e = entry(phrase);
  if (!e) return {};
  return e->postings;
}

const std::map<int, std::size_t>& OccurrenceIndex::day_counts(
    std::string_view phrase) const {
  static const std::map<int, std::size_t> kEmpty;
  const Entry* e = entry(phrase);
  return e ? e->by_day : kEmpty;
}

std::vector<DocIndex> OccurrenceIndex::doc_presence(
    std::string_view phrase) const {
  std::vector<DocIndex> out;
  for (const auto& p : postings(phrase)) out.push_back(p.doc);
  return out;
}

std::vector<int> OccurrenceIndex::day_presence(std::string_view phrase) const {
  std::vector<int> out;
  for (const auto& [day, count] : day_counts(phrase)) out.push_back(day);
  return out;
}

}  // namespace keyevent
