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

#include "keyevent/pipeline.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "keyevent/error.h"
#include "keyevent/format.h"
#include "keyevent/rng.h"

namespace keyevent {
namespace {

namespace fs = std::filesystem;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

int to_int(std::string_view key, std::string_view value) {
  try {
    return static_cast<int>(parse_int(value, key, 0));
  } catch (const DataError&) {
    throw UsageError("config " + std::string(key) + ": not an integer: " +
                     std::string(value));
  }
}

double to_double(std::string_view key, std::string_view value) {
  try {
    return parse_double(value, key, 0);
  } catch (const DataError&) {
    throw UsageError("config " + std::string(key) + ": not a number: " +
                     std::string(value));
  }
}

std::uint64_t to_u64(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (value.empty() || ec != std::errc() || ptr != end) {
    throw UsageError("config " + std::string(key) +
                     ": not an unsigned integer: " + std::string(value));
  }
  return v;
}

void require(bool ok, const char* message) {
  if (!ok) throw UsageError(std::string("config: ") + message);
}

template <typename Table>
Table load_table(const fs::path& path) {
  if (path.empty()) return Table{};
  return load_embeddings(path);
}

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  body(out);
  if (!out) throw DataError("write failed: " + path.string());
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "n_t",        "keep_fraction", "peak_quantile", "w_const",
      "edge_floor", "min_community", "resolution",    "tau",
      "pseudo_top", "r",             "S",             "n_add",
      "iterations", "seed",          "endpoint",      "cache_dir",
      "ngram_max_len", "ngram_min_count"};
  return keys;
}

void set_config_value(PipelineConfig& c, std::string_view key,
                      std::string_view value) {
  if (key == "n_t") c.n_t = to_int(key, value);
  else if (key == "keep_fraction") c.keep_fraction = to_double(key, value);
  else if (key == "peak_quantile") c.peak_quantile = to_double(key, value);
  else if (key == "w_const") c.w_const = to_double(key, value);
  else if (key == "edge_floor") c.edge_floor = to_double(key, value);
  else if (key == "min_community") c.min_community = to_int(key, value);
  else if (key == "resolution") c.resolution = to_double(key, value);
  else if (key == "tau") c.tau = to_double(key, value);
  else if (key == "pseudo_top") c.pseudo_top = to_int(key, value);
  else if (key == "r") c.r = to_int(key, value);
  else if (key == "S") c.S = to_int(key, value);
  else if (key == "n_add") c.n_add = to_int(key, value);
  else if (key == "iterations") c.iterations = to_int(key, value);
  else if (key == "seed") c.seed = to_u64(key, value);
  else if (key == "endpoint") c.endpoint = std::string(value);
  else if (key == "cache_dir") c.cache_dir = std::string(value);
  else if (key == "ngram_max_len") c.ngram_max_len = to_int(key, value);
  else if (key == "ngram_min_count") c.ngram_min_count = to_int(key, value);
  else throw UsageError("unknown config key: " + std::string(key));
}

void validate(const PipelineConfig& c) {
  require(c.n_t >= 1, "n_t must be at least 1");
  require(c.keep_fraction > 0.0 && c.keep_fraction <= 1.0,
          "keep_fraction must lie in (0, 1]");
  require(c.peak_quantile > 0.0 && c.peak_quantile <= 1.0,
          "peak_quantile must lie in (0, 1]");
  require(c.w_const > 1.0, "w_const must exceed 1");
  require(c.edge_floor >= 0.0, "edge_floor must be non-negative");
  require(c.min_community >= 1, "min_community must be at least 1");
  require(c.resolution > 0.0, "resolution must be positive");
  require(c.tau > 0.0 && c.tau <= 1.0, "tau must lie in (0, 1]");
  require(c.pseudo_top >= 1, "pseudo_top must be at least 1");
  require(c.r >= 1, "r must be at least 1");
  require(c.S >= 1, "S must be at least 1");
  require(c.n_add >= 1, "n_add must be at least 1");
  require(c.iterations >= 1, "iterations must be at least 1");
  require(c.ngram_max_len >= 1, "ngram_max_len must be at least 1");
  require(c.ngram_min_count >= 1, "ngram_min_count must be at least 1");
}

PipelineConfig read_config(std::istream& in, PipelineConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line.substr(0, line.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError("config line " + std::to_string(line_no) +
                       ": expected key = value");
    }
    set_config_value(base, trim(std::string_view(text).substr(0, eq)),
                     trim(std::string_view(text).substr(eq + 1)));
  }
  return base;
}

PipelineConfig load_config(const fs::path& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config " + path.string());
  return read_config(in, std::move(base));
}

void write_config(const PipelineConfig& c, std::ostream& out) {
  out << "n_t = " << c.n_t << '\n'
      << "keep_fraction = " << format_double(c.keep_fraction) << '\n'
      << "peak_quantile = " << format_double(c.peak_quantile) << '\n'
      << "w_const = " << format_double(c.w_const) << '\n'
      << "edge_floor = " << format_double(c.edge_floor) << '\n'
      << "min_community = " << c.min_community << '\n'
      << "resolution = " << format_double(c.resolution) << '\n'
      << "tau = " << format_double(c.tau) << '\n'
      << "pseudo_top = " << c.pseudo_top << '\n'
      << "r = " << c.r << '\n'
      << "S = " << c.S << '\n'
      << "n_add = " << c.n_add << '\n'
      << "iterations = " << c.iterations << '\n'
      << "seed = " << c.seed << '\n'
      << "endpoint = " << c.endpoint << '\n'
      << "cache_dir = " << c.cache_dir << '\n'
      << "ngram_max_len = " << c.ngram_max_len << '\n'
      << "ngram_min_count = " << c.ngram_min_count << '\n';
}

void run_stage(std::string_view stage, const std::function<void()>& body) {
  const std::string tag = std::string(stage) + ": ";
  try {
    body();
  } catch (const UsageError& e) {
    throw UsageError(tag + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + e.what());
  } catch (const ServiceError& e) {
    throw ServiceError(tag + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(tag + e.what());
  }
}

PhraseStage mine_phrases(const Corpus& corpus,
                         std::span<const std::string> phrase_list,
                         const PipelineConfig& config) {
  if (corpus.empty()) throw DataError("corpus is empty");
  std::vector<std::string> phrases(phrase_list.begin(), phrase_list.end());
  if (phrases.empty()) {
    for (auto& c : mine_fallback_ngrams(corpus, config.ngram_max_len,
                                        config.ngram_min_count)) {
      phrases.push_back(std::move(c.phrase));
    }
  }
  if (phrases.empty()) throw DataError("no candidate phrases");
  PhraseStage out;
  out.index = OccurrenceIndex::build(corpus, phrases);
  out.scored = score_phrases(out.index, corpus.size());
  if (out.scored.empty()) throw DataError("no candidate phrase occurs in the corpus");
  out.kept = filter_candidates(out.scored, config.keep_fraction);
  return out;
}

std::vector<PeakPhrase> detect_peaks(const Corpus& corpus,
                                     const PhraseStage& phrases,
                                     const PipelineConfig& config) {
  const auto scored =
      score_pairs(phrases.kept, phrases.index, corpus.span(), config.n_t);
  return select_peaks(scored, PeakSelection::top_quantile(config.peak_quantile));
}

PipelineResult run_stages(const PipelineConfig& config, const Corpus& corpus,
                          std::span<const std::string> phrase_list,
                          const EmbeddingTable& phrase_vectors,
                          const EmbeddingTable& doc_vectors) {
  validate(config);
  PipelineResult out;
  run_stage("mine-phrases",
            [&] { out.phrases = mine_phrases(corpus, phrase_list, config); });
  run_stage("detect-peaks",
            [&] { out.peaks = detect_peaks(corpus, out.phrases, config); });
  run_stage("build-graph", [&] {
    out.graph = build_graph(out.peaks, corpus, out.phrases.index, phrase_vectors,
                            config.w_const, config.edge_floor);
  });
  run_stage("detect-events", [&] {
    out.candidates = detect_communities(
        out.graph, static_cast<std::size_t>(config.min_community),
        config.resolution, derive_seed(config.seed, "louvain"));
  });
  run_stage("select-docs", [&] {
    if (out.candidates.empty()) return;
    SelectionConfig sc;
    sc.tau = config.tau;
    sc.pseudo_top = static_cast<std::size_t>(config.pseudo_top);
    sc.r = config.r;
    sc.ensemble_size = config.S;
    sc.n_add = static_cast<std::size_t>(config.n_add);
    sc.iterations = config.iterations;
    sc.seed = derive_seed(config.seed, "selection");
    SelectionInputs inputs{corpus, out.phrases.index, out.phrases.kept,
                           phrase_vectors, doc_vectors};
    std::ostringstream audit;
    out.selection = run_selection_loop(out.candidates, inputs, sc, &audit);
    out.audit = audit.str();
  });
  if (out.candidates.empty()) {
    for (const auto& d : corpus.documents()) out.selection.outliers.push_back(d.id);
  }
  return out;
}

void acquire_embeddings(const PipelineConfig& config, const Corpus& corpus,
                        std::span<const std::string> phrases,
                        EmbeddingTable& phrase_vectors,
                        EmbeddingTable& doc_vectors) {
  if (config.endpoint.empty()) return;
  const ServiceEndpoint endpoint = ServiceEndpoint::parse(config.endpoint);
  std::optional<EmbeddingCache> cache;
  FetchOptions options;
  if (!config.cache_dir.empty()) {
    cache.emplace(config.cache_dir, endpoint.model_id);
    options.cache = &*cache;
  }
  std::vector<EmbedRequest> requests;
  for (const auto& p : phrases) {
    if (!phrase_vectors.contains(p)) requests.push_back(phrase_request(p, corpus));
  }
  fetch_missing(phrase_vectors, EmbedKind::kPhrase, requests, endpoint, options);
  requests.clear();
  for (const auto& d : corpus.documents()) {
    if (!doc_vectors.contains(d.id)) requests.push_back(document_request(d));
  }
  fetch_missing(doc_vectors, EmbedKind::kDocument, requests, endpoint, options);
}

std::vector<std::string> top_event_phrases(const KeyEvent& event,
                                           const Corpus& corpus,
                                           const OccurrenceIndex& index,
                                           std::size_t limit) {
  std::vector<std::pair<std::string, std::size_t>> counts;
  for (const auto& p : event.phrases) {
    std::size_t n = 0;
    for (const auto& sd : event.documents) {
      if (auto d = corpus.find(sd.id)) n += index.doc_freq(p, *d);
    }
    counts.emplace_back(p, n);
  }
  std::stable_sort(counts.begin(), counts.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (const auto& [p, n] : counts) {
    if (out.size() == limit) break;
    out.push_back(p);
  }
  return out;
}

void write_key_events_text(std::span<const KeyEvent> events,
                           const Corpus& corpus, const OccurrenceIndex& index,
                           std::ostream& out) {
  out << events.size() << " key events\n";
  for (const auto& e : events) {
    out << '\n'
        << e.id << "  " << format_iso(corpus.date_of(e.span.first)) << " .. "
        << format_iso(corpus.date_of(e.span.last)) << "  (" << e.documents.size()
        << " documents)\n";
    out << "  phrases:";
    const auto top = top_event_phrases(e, corpus, index);
    for (std::size_t i = 0; i < top.size(); ++i) {
      out << (i == 0 ? " " : ", ") << top[i];
    }
    out << '\n';
    for (std::size_t i = 0; i < e.documents.size(); ++i) {
      const auto& sd = e.documents[i];
      const Document& doc = corpus[*corpus.find(sd.id)];
      out << "  " << (i + 1) << ". " << format_fixed(sd.score, 4) << "  "
          << format_iso(doc.date) << "  " << sd.id << "  " << doc.title << '\n';
    }
  }
}

void write_key_events_jsonl(std::span<const KeyEvent> events,
                            const Corpus& corpus, std::ostream& out) {
  for (const auto& e : events) {
    nlohmann::json docs = nlohmann::json::array();
    for (const auto& sd : e.documents) {
      docs.push_back({{"id", sd.id}, {"score", sd.score}});
    }
    nlohmann::json record = {{"event_id", e.id},
                             {"start", format_iso(corpus.date_of(e.span.first))},
                             {"end", format_iso(corpus.date_of(e.span.last))},
                             {"phrases", e.phrases},
                             {"documents", docs}};
    out << record.dump() << '\n';
  }
}

std::vector<KeyEvent> read_key_events_jsonl(std::istream& in,
                                            const Corpus& corpus) {
  std::vector<KeyEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "key events line " + std::to_string(line_no) + ": ";
    try {
      const auto j = nlohmann::json::parse(line);
      KeyEvent e;
      e.id = j.at("event_id").get<std::string>();
      for (const char* field : {"start", "end"}) {
        const auto date = parse_iso_date(j.at(field).get<std::string>());
        if (!date) throw DataError(where + "bad date");
        const int day = corpus.day_of(to_epoch_days(*date));
        (std::string_view(field) == "start" ? e.span.first : e.span.last) = day;
      }
      for (const auto& p : j.at("phrases")) e.phrases.insert(p.get<std::string>());
      for (const auto& d : j.at("documents")) {
        e.documents.push_back({d.at("id").get<std::string>(), d.at("score").get<double>()});
      }
      events.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(where + ex.what());
    }
  }
  return events;
}

void write_outliers(std::span<const std::string> ids, const Corpus& corpus,
                    std::ostream& out) {
  out << "id\tdate\ttitle\n";
  for (const auto& id : ids) {
    const auto d = corpus.find(id);
    if (!d) throw DataError("outlier not in corpus: " + id);
    const Document& doc = corpus[*d];
    out << id << '\t' << format_iso(doc.date) << '\t' << doc.title << '\n';
  }
}

fs::path create_run_dir(const fs::path& base, std::uint64_t seed,
                        const fs::path& explicit_dir) {
  fs::path target = explicit_dir;
  if (target.empty()) {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof(stamp), "%Y%m%dT%H%M%SZ", &utc);
    target = base / (std::string(stamp) + "-" + std::to_string(seed));
  }
  if (!target.parent_path().empty()) fs::create_directories(target.parent_path());
  fs::path candidate = target;
  for (int suffix = 1; !fs::create_directory(candidate); ++suffix) {
    candidate = target;
    candidate += "-" + std::to_string(suffix);
  }
  return candidate;
}

PipelineResult run_pipeline(const PipelineConfig& config, const RunInputs& inputs,
                            const fs::path& run_dir) {
  validate(config);
  Corpus corpus;
  std::vector<std::string> phrase_list;
  EmbeddingTable phrase_vectors, doc_vectors;
  std::optional<GroundTruth> truth;
  run_stage("ingest", [&] {
    corpus = ingest_corpus(inputs.corpus);
    if (!inputs.phrases.empty()) phrase_list = read_phrase_list(inputs.phrases);
    if (!inputs.truth.empty()) truth = load_ground_truth(inputs.truth);
  });
  run_stage("embeddings", [&] {
    phrase_vectors = load_table<EmbeddingTable>(inputs.phrase_vectors);
    doc_vectors = load_table<EmbeddingTable>(inputs.doc_vectors);
    if (!config.endpoint.empty()) {
      const PhraseStage phrases = mine_phrases(corpus, phrase_list, config);
      std::vector<std::string> wanted;
      for (const auto& c : phrases.kept) wanted.push_back(c.phrase);
      acquire_embeddings(config, corpus, wanted, phrase_vectors, doc_vectors);
    }
  });

  PipelineResult result =
      run_stages(config, corpus, phrase_list, phrase_vectors, doc_vectors);

  run_stage("report", [&] {
    fs::create_directories(run_dir);
    write_file(run_dir / "config.txt", [&](std::ostream& o) { write_config(config, o); });
    write_file(run_dir / "phrases.tsv",
               [&](std::ostream& o) { write_candidates(result.phrases.kept, o); });
    write_file(run_dir / "peaks.tsv",
               [&](std::ostream& o) { write_peaks(result.peaks, corpus, o); });
    write_file(run_dir / "graph.tsv",
               [&](std::ostream& o) { write_graph(result.graph, corpus, o); });
    write_file(run_dir / "communities.tsv",
               [&](std::ostream& o) { write_events(result.candidates, corpus, o); });
    write_file(run_dir / "audit.jsonl", [&](std::ostream& o) { o << result.audit; });
    write_file(run_dir / "key_events.txt", [&](std::ostream& o) {
      write_key_events_text(result.selection.events, corpus, result.phrases.index, o);
    });
    write_file(run_dir / "key_events.jsonl", [&](std::ostream& o) {
      write_key_events_jsonl(result.selection.events, corpus, o);
    });
    write_file(run_dir / "outliers.tsv", [&](std::ostream& o) {
      write_outliers(result.selection.outliers, corpus, o);
    });
  });
  if (truth) {
    run_stage("evaluate", [&] {
      std::vector<KMetrics> rows;
      for (int k : {5, 10}) rows.push_back(k_metrics(result.selection.events, *truth, k));
      write_file(run_dir / "metrics.tsv", [&](std::ostream& o) { write_metrics(rows, o); });
    });
  }
  return result;
}

}  // namespace keyevent
