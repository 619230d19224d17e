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

// keyevent: key event mining from a theme corpus.
//
// Exit codes: 0 success, 1 usage error, 2 data or service error,
// 3 internal error.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "keyevent/corpus.h"
#include "keyevent/doc_selection.h"
#include "keyevent/embeddings.h"
#include "keyevent/error.h"
#include "keyevent/evaluation.h"
#include "keyevent/event_graph.h"
#include "keyevent/format.h"
#include "keyevent/peak_detection.h"
#include "keyevent/phrase_mining.h"
#include "keyevent/pipeline.h"
#include "keyevent/rng.h"
#include "keyevent/synthetic.h"

namespace fs = std::filesystem;
using namespace keyevent;

namespace {

struct ConfigFlags {
  std::string file;
  std::map<std::string, std::string> overrides;

  void attach(CLI::App* app) {
    app->add_option("--config", file, "key = value config file");
    for (const auto& key : config_keys()) {
      std::string flag = "--" + key;
      for (char& ch : flag) {
        if (ch == '_') ch = '-';
      }
      app->add_option_function<std::string>(
          flag, [this, key](const std::string& v) { overrides[key] = v; },
          "overrides " + key);
    }
  }

  // Flags win over the file, the file over defaults.
  PipelineConfig resolve() const {
    PipelineConfig config;
    if (!file.empty()) config = load_config(file);
    for (const auto& key : config_keys()) {
      if (auto it = overrides.find(key); it != overrides.end()) {
        set_config_value(config, key, it->second);
      }
    }
    validate(config);
    return config;
  }
};

void with_output(const std::string& path, const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  body(out);
}

template <typename T>
T read_file(const std::string& path, const std::function<T(std::istream&)>& parse) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  return parse(in);
}

EmbeddingTable optional_table(const std::string& path) {
  return path.empty() ? EmbeddingTable{} : load_embeddings(path);
}

DaySpan parse_window(const Corpus& corpus, const std::string& from,
                     const std::string& to) {
  DaySpan window = corpus.span();
  if (!from.empty()) {
    const auto d = parse_iso_date(from);
    if (!d) throw UsageError("bad --from date: " + from);
    window.first = corpus.day_of(to_epoch_days(*d));
  }
  if (!to.empty()) {
    const auto d = parse_iso_date(to);
    if (!d) throw UsageError("bad --to date: " + to);
    window.last = corpus.day_of(to_epoch_days(*d));
  }
  return window;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e)) return 1;
  if (dynamic_cast<const DataError*>(&e)) return 2;
  if (dynamic_cast<const ServiceError*>(&e)) return 2;
  return 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Key event mining from a theme news corpus"};
  app.require_subcommand(1);

  // ingest
  std::string ingest_in, ingest_out;
  auto* ingest = app.add_subcommand("ingest", "validate and normalize a JSONL corpus");
  ingest->add_option("input", ingest_in, "corpus JSONL")->required();
  ingest->add_option("-o,--output", ingest_out, "normalized corpus JSONL");
  ingest->callback([&] {
    run_stage("ingest", [&] {
      const Corpus corpus = ingest_corpus(ingest_in);
      if (!ingest_out.empty()) with_output(ingest_out, [&](std::ostream& o) { write_corpus(corpus, o); });
      std::cout << corpus.size() << " documents, "
                << format_iso(corpus.date_of(corpus.span().first)) << " .. "
                << format_iso(corpus.date_of(corpus.span().last)) << '\n';
    });
  });

  // retrieve
  std::string ret_corpus, ret_query, ret_from, ret_to, ret_out, ret_ranking;
  double ret_threshold = 0.0, ret_fraction = 0.0;
  auto* retrieve = app.add_subcommand("retrieve", "BM25 theme retrieval into a sub-corpus");
  retrieve->add_option("--corpus", ret_corpus)->required();
  retrieve->add_option("--query", ret_query, "theme query text")->required();
  retrieve->add_option("--from", ret_from, "first date (YYYY-MM-DD)");
  retrieve->add_option("--to", ret_to, "last date (YYYY-MM-DD)");
  auto* thr = retrieve->add_option("--threshold", ret_threshold, "keep BM25 score > value");
  retrieve->add_option("--top-fraction", ret_fraction, "keep the best fraction instead")
      ->excludes(thr);
  retrieve->add_option("-o,--output", ret_out, "sub-corpus JSONL")->required();
  retrieve->add_option("--ranking", ret_ranking, "ranked ids and scores TSV");
  retrieve->callback([&] {
    run_stage("retrieve", [&] {
      const Corpus corpus = ingest_corpus(ret_corpus);
      RetrievalCutoff cutoff;
      if (retrieve->count("--top-fraction") > 0) {
        cutoff = {RetrievalCutoff::Mode::kTopFraction, ret_fraction};
      } else {
        cutoff = {RetrievalCutoff::Mode::kThreshold, ret_threshold};
      }
      const Tokens query = tokenize(ret_query);
      if (query.empty()) throw UsageError("query has no terms");
      const auto result =
          retrieve_theme(corpus, query, parse_window(corpus, ret_from, ret_to), cutoff);
      with_output(ret_out, [&](std::ostream& o) { write_corpus(result.corpus, o); });
      if (!ret_ranking.empty()) {
        with_output(ret_ranking, [&](std::ostream& o) {
          for (const auto& sd : result.ranking) o << sd.id << '\t' << format_double(sd.score) << '\n';
        });
      }
      std::cout << result.corpus.size() << " of " << corpus.size() << " documents retained\n";
    });
  });

  // mine-phrases
  ConfigFlags mine_cfg;
  std::string mine_corpus, mine_list, mine_out;
  auto* mine = app.add_subcommand("mine-phrases", "candidate phrases filtered by corpus tf-idf");
  mine->add_option("--corpus", mine_corpus)->required();
  mine->add_option("--phrases", mine_list, "phrase list (else n-gram mining)");
  mine->add_option("-o,--output", mine_out, "candidates TSV");
  mine_cfg.attach(mine);
  mine->callback([&] {
    const PipelineConfig config = mine_cfg.resolve();
    run_stage("mine-phrases", [&] {
      const Corpus corpus = ingest_corpus(mine_corpus);
      std::vector<std::string> list;
      if (!mine_list.empty()) list = read_phrase_list(fs::path(mine_list));
      const PhraseStage stage = mine_phrases(corpus, list, config);
      with_output(mine_out, [&](std::ostream& o) { write_candidates(stage.kept, o); });
    });
  });

  // detect-peaks
  ConfigFlags peak_cfg;
  std::string peak_corpus, peak_candidates, peak_out;
  auto* peaks = app.add_subcommand("detect-peaks", "ttf-itf peak phrases");
  peaks->add_option("--corpus", peak_corpus)->required();
  peaks->add_option("--candidates", peak_candidates, "candidates TSV")->required();
  peaks->add_option("-o,--output", peak_out, "peaks TSV");
  peak_cfg.attach(peaks);
  peaks->callback([&] {
    const PipelineConfig config = peak_cfg.resolve();
    run_stage("detect-peaks", [&] {
      const Corpus corpus = ingest_corpus(peak_corpus);
      PhraseStage stage;
      stage.kept = read_file<std::vector<CandidatePhrase>>(peak_candidates, read_candidates);
      std::vector<std::string> phrases;
      for (const auto& c : stage.kept) phrases.push_back(c.phrase);
      stage.index = OccurrenceIndex::build(corpus, phrases);
      const auto selected = detect_peaks(corpus, stage, config);
      with_output(peak_out, [&](std::ostream& o) { write_peaks(selected, corpus, o); });
    });
  });

  // build-graph
  ConfigFlags graph_cfg;
  std::string graph_corpus, graph_peaks, graph_vectors, graph_out;
  auto* graph = app.add_subcommand("build-graph", "peak phrase graph edge list");
  graph->add_option("--corpus", graph_corpus)->required();
  graph->add_option("--peaks", graph_peaks, "peaks TSV")->required();
  graph->add_option("--phrase-vectors", graph_vectors, "phrase vector TSV");
  graph->add_option("-o,--output", graph_out, "graph TSV");
  graph_cfg.attach(graph);
  graph->callback([&] {
    const PipelineConfig config = graph_cfg.resolve();
    run_stage("build-graph", [&] {
      const Corpus corpus = ingest_corpus(graph_corpus);
      const auto nodes = read_file<std::vector<PeakPhrase>>(
          graph_peaks, [&](std::istream& in) { return read_peaks(in, corpus); });
      std::vector<std::string> phrases;
      for (const auto& n : nodes) phrases.push_back(n.phrase);
      const auto index = OccurrenceIndex::build(corpus, phrases);
      EmbeddingTable vectors = optional_table(graph_vectors);
      EmbeddingTable unused;
      acquire_embeddings(config, corpus, phrases, vectors, unused);
      const auto g = build_graph(nodes, corpus, index, vectors, config.w_const,
                                 config.edge_floor);
      with_output(graph_out, [&](std::ostream& o) { write_graph(g, corpus, o); });
    });
  });

  // detect-events
  ConfigFlags events_cfg;
  std::string ev_corpus, ev_peaks, ev_graph, ev_out;
  auto* events = app.add_subcommand("detect-events", "Louvain communities as candidate events");
  events->add_option("--corpus", ev_corpus)->required();
  events->add_option("--peaks", ev_peaks, "peaks TSV")->required();
  events->add_option("--graph", ev_graph, "graph TSV")->required();
  events->add_option("-o,--output", ev_out, "candidate events TSV");
  events_cfg.attach(events);
  events->callback([&] {
    const PipelineConfig config = events_cfg.resolve();
    run_stage("detect-events", [&] {
      const Corpus corpus = ingest_corpus(ev_corpus);
      const auto nodes = read_file<std::vector<PeakPhrase>>(
          ev_peaks, [&](std::istream& in) { return read_peaks(in, corpus); });
      const auto g = read_file<PeakPhraseGraph>(ev_graph, [&](std::istream& in) {
        return read_graph(in, nodes, corpus, config.w_const);
      });
      const auto found =
          detect_communities(g, static_cast<std::size_t>(config.min_community),
                             config.resolution, derive_seed(config.seed, "louvain"));
      with_output(ev_out, [&](std::ostream& o) { write_events(found, corpus, o); });
    });
  });

  // select-docs
  ConfigFlags sel_cfg;
  std::string sel_corpus, sel_events, sel_candidates, sel_phrases, sel_pv, sel_dv,
      sel_out, sel_audit, sel_outliers;
  auto* select = app.add_subcommand("select-docs", "iterative key event document selection");
  select->add_option("--corpus", sel_corpus)->required();
  select->add_option("--events", sel_events, "candidate events TSV")->required();
  select->add_option("--candidates", sel_candidates, "candidates TSV (enrichment pool)")
      ->required();
  select->add_option("--phrases", sel_phrases, "full phrase list (default: candidates)");
  select->add_option("--phrase-vectors", sel_pv, "phrase vector TSV");
  select->add_option("--doc-vectors", sel_dv, "document vector TSV");
  select->add_option("-o,--output", sel_out, "key events JSONL");
  select->add_option("--audit", sel_audit, "audit JSONL");
  select->add_option("--outliers", sel_outliers, "outlier TSV");
  sel_cfg.attach(select);
  select->callback([&] {
    const PipelineConfig config = sel_cfg.resolve();
    run_stage("select-docs", [&] {
      const Corpus corpus = ingest_corpus(sel_corpus);
      const auto pool =
          read_file<std::vector<CandidatePhrase>>(sel_candidates, read_candidates);
      const auto candidates = read_file<std::vector<CandidateEvent>>(
          sel_events, [&](std::istream& in) { return read_events(in, corpus); });
      std::vector<std::string> vocabulary;
      if (!sel_phrases.empty()) {
        vocabulary = read_phrase_list(fs::path(sel_phrases));
      } else {
        for (const auto& c : pool) vocabulary.push_back(c.phrase);
      }
      const auto index = OccurrenceIndex::build(corpus, vocabulary);
      EmbeddingTable pv = optional_table(sel_pv);
      EmbeddingTable dv = optional_table(sel_dv);
      std::vector<std::string> wanted;
      for (const auto& c : pool) wanted.push_back(c.phrase);
      acquire_embeddings(config, corpus, wanted, pv, dv);

      SelectionConfig sc;
      sc.tau = config.tau;
      sc.pseudo_top = static_cast<std::size_t>(config.pseudo_top);
      sc.r = config.r;
      sc.ensemble_size = config.S;
      sc.n_add = static_cast<std::size_t>(config.n_add);
      sc.iterations = config.iterations;
      sc.seed = derive_seed(config.seed, "selection");
      SelectionInputs inputs{corpus, index, pool, pv, dv};
      std::ostringstream audit;
      const auto result = run_selection_loop(candidates, inputs, sc, &audit);
      with_output(sel_out, [&](std::ostream& o) {
        write_key_events_jsonl(result.events, corpus, o);
      });
      if (!sel_audit.empty()) with_output(sel_audit, [&](std::ostream& o) { o << audit.str(); });
      if (!sel_outliers.empty()) {
        with_output(sel_outliers,
                    [&](std::ostream& o) { write_outliers(result.outliers, corpus, o); });
      }
    });
  });

  // evaluate
  std::string eval_corpus, eval_events, eval_truth, eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "k-precision, k-recall and k-F1");
  evaluate->add_option("--corpus", eval_corpus)->required();
  evaluate->add_option("--events", eval_events, "key events JSONL")->required();
  evaluate->add_option("--truth", eval_truth, "ground truth JSONL")->required();
  evaluate->add_option("-o,--output", eval_out, "metrics TSV");
  evaluate->callback([&] {
    run_stage("evaluate", [&] {
      const Corpus corpus = ingest_corpus(eval_corpus);
      const auto predicted = read_file<std::vector<KeyEvent>>(
          eval_events, [&](std::istream& in) { return read_key_events_jsonl(in, corpus); });
      const GroundTruth truth = load_ground_truth(eval_truth);
      std::vector<KMetrics> rows;
      for (int k : {5, 10}) rows.push_back(k_metrics(predicted, truth, k));
      with_output(eval_out, [&](std::ostream& o) { write_metrics(rows, o); });
    });
  });

  // run
  ConfigFlags run_cfg;
  RunInputs run_inputs;
  std::string run_dir, runs_base = "runs";
  auto* run = app.add_subcommand("run", "end-to-end pipeline into a fresh run directory");
  run->add_option("--corpus", run_inputs.corpus)->required();
  run->add_option("--phrases", run_inputs.phrases, "phrase list (else n-gram mining)");
  run->add_option("--phrase-vectors", run_inputs.phrase_vectors, "phrase vector TSV");
  run->add_option("--doc-vectors", run_inputs.doc_vectors, "document vector TSV");
  run->add_option("--truth", run_inputs.truth, "ground truth JSONL");
  run->add_option("--run-dir", run_dir, "exact run directory (suffixed if it exists)");
  run->add_option("--runs-base", runs_base, "parent of timestamped run directories");
  run_cfg.attach(run);
  run->callback([&] {
    const PipelineConfig config = run_cfg.resolve();
    const fs::path dir = create_run_dir(runs_base, config.seed, run_dir);
    const auto result = run_pipeline(config, run_inputs, dir);
    std::cout << dir.string() << '\n'
              << result.selection.events.size() << " key events, "
              << result.selection.outliers.size() << " outliers\n";
    if (fs::exists(dir / "metrics.tsv")) {
      std::ifstream in(dir / "metrics.tsv");
      std::cout << in.rdbuf();
    }
  });

  // synth
  SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "synthetic corpus with planted events");
  synth_cmd->add_option("-o,--output", synth_out, "output directory")->required();
  synth_cmd->add_option("--events", synth.num_events);
  synth_cmd->add_option("--docs-per-event", synth.docs_per_event);
  synth_cmd->add_option("--noise-docs", synth.noise_docs);
  synth_cmd->add_option("--span-days", synth.span_days);
  synth_cmd->add_option("--dim", synth.dim, "document vector dimension");
  synth_cmd->add_option("--signatures", synth.signature_phrases);
  synth_cmd->add_option("--background-phrases", synth.background_phrases);
  synth_cmd->add_option("--distractors", synth.distractor_phrases);
  synth_cmd->add_option("--redate-fraction", synth.redate_fraction);
  synth_cmd->add_option("--date-in-lead", synth.date_in_lead);
  synth_cmd->add_option("--start-date", synth.start_date);
  synth_cmd->add_option("--seed", synth.seed);
  synth_cmd->callback([&] {
    run_stage("synth", [&] { write_synthetic(generate_synthetic(synth), synth_out); });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return 0;
}
