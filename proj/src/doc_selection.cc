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

#include "keyevent/doc_selection.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "keyevent/dates.h"
#include "keyevent/error.h"
#include "keyevent/parallel.h"
#include "keyevent/rng.h"

namespace keyevent {
namespace {

using Json = nlohmann::json;

// Mention counts of `phrases` per in-span document.
std::map<DocIndex, std::size_t> match_counts(const DaySpan& span,
                                             const std::set<std::string>& phrases,
                                             const Corpus& corpus,
                                             const OccurrenceIndex& index) {
  std::map<DocIndex, std::size_t> counts;
  for (const auto& phrase : phrases) {
    for (const Posting& p : index.postings(phrase)) {
      if (span.contains(corpus[p.doc].day)) counts[p.doc] += p.count;
    }
  }
  return counts;
}

// Score descending, then earlier day, then id.
std::vector<std::pair<DocIndex, std::size_t>> rank_matches(
    const std::map<DocIndex, std::size_t>& counts, const Corpus& corpus) {
  std::vector<std::pair<DocIndex, std::size_t>> ranked(counts.begin(),
                                                       counts.end());
  std::sort(ranked.begin(), ranked.end(), [&](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    const Document& da = corpus[a.first];
    const Document& db = corpus[b.first];
    if (da.day != db.day) return da.day < db.day;
    return da.id < db.id;
  });
  return ranked;
}

const Vector& doc_vector(const EmbeddingTable& table, const std::string& id) {
  const Vector* v = table.find(id);
  if (v == nullptr) throw DataError("no document vector for " + id);
  return *v;
}

void sort_documents(std::vector<ScoredDoc>& docs) {
  std::sort(docs.begin(), docs.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

Json span_json(const DaySpan& span, const Corpus& corpus) {
  return Json::array({format_iso(corpus.date_of(span.first)),
                      format_iso(corpus.date_of(span.last))});
}

void emit(std::ostream* audit, const Json& record) {
  if (audit != nullptr) *audit << record.dump() << '\n';
}

}  // namespace

double ClassifierEnsemble::score(std::span<const double> x) const {
  if (members.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& m : members) sum += m.decision(x);
  return sum / static_cast<double>(members.size());
}

Enrichment enrich_phrases(const std::set<std::string>& event_phrases,
                          std::span<const CandidatePhrase> pool,
                          const EmbeddingTable& phrase_vectors, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw UsageError("tau must lie in (0, 1]");
  Enrichment out;
  out.phrases = event_phrases;
  std::vector<const Vector*> anchors;
  for (const auto& p : event_phrases) {
    const Vector* v = phrase_vectors.find(p);
    if (v == nullptr) {
      out.skipped.push_back(p);
    } else {
      anchors.push_back(v);
    }
  }
  for (const auto& candidate : pool) {
    if (out.phrases.contains(candidate.phrase)) continue;
    const Vector* v = phrase_vectors.find(candidate.phrase);
    if (v == nullptr) {
      out.skipped.push_back(candidate.phrase);
      continue;
    }
    for (const Vector* a : anchors) {
      if (cosine(*v, *a) >= tau) {
        out.phrases.insert(candidate.phrase);
        break;
      }
    }
  }
  std::sort(out.skipped.begin(), out.skipped.end());
  out.skipped.erase(std::unique(out.skipped.begin(), out.skipped.end()),
                    out.skipped.end());
  return out;
}

PseudoLabelSet generate_pseudo_labels(std::string event_id, const DaySpan& span,
                                      const std::set<std::string>& phrases,
                                      const Corpus& corpus,
                                      const OccurrenceIndex& index,
                                      std::size_t pseudo_top) {
  if (pseudo_top < 1) throw UsageError("pseudo_top must be at least 1");
  PseudoLabelSet out;
  out.event_id = std::move(event_id);
  const auto ranked = rank_matches(match_counts(span, phrases, corpus, index), corpus);
  for (const auto& [doc, count] : ranked) {
    if (out.positives.size() == pseudo_top) break;
    if (count == 0) break;
    out.positives.push_back(corpus[doc].id);
    out.match_scores[corpus[doc].id] = count;
  }
  return out;
}

ClassifierEnsemble train_ensemble(const PseudoLabelSet& positives,
                                  const Corpus& corpus,
                                  const EmbeddingTable& doc_vectors,
                                  const EnsembleOptions& options,
                                  TrainingAudit* audit) {
  const std::size_t k = positives.positives.size();
  if (k < 2) throw UsageError("ensemble training needs at least 2 positives");
  if (options.r < 1 || options.members < 1) {
    throw UsageError("ensemble needs r >= 1 and at least one member");
  }
  const std::size_t r = static_cast<std::size_t>(options.r);
  if (corpus.size() < (r + 1) * k) {
    throw DataError("corpus has " + std::to_string(corpus.size()) +
                    " documents, fewer than (r+1)*|positives| = " +
                    std::to_string((r + 1) * k));
  }

  std::unordered_set<std::string> positive_ids;
  std::vector<std::vector<double>> positive_x;
  for (const auto& id : positives.positives) {
    if (!corpus.find(id)) throw DataError("pseudo label not in corpus: " + id);
    if (!positive_ids.insert(id).second) {
      throw UsageError("duplicate pseudo label: " + id);
    }
    positive_x.push_back(doc_vector(doc_vectors, id));
  }
  std::vector<DocIndex> negative_pool;
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    if (!positive_ids.contains(corpus[d].id)) negative_pool.push_back(d);
  }

  ClassifierEnsemble ensemble;
  ensemble.event_id = positives.event_id;
  ensemble.r = options.r;
  ensemble.seed = options.seed;
  const std::size_t s = static_cast<std::size_t>(options.members);
  ensemble.members.resize(s);
  std::vector<std::size_t> samples(s, 0);
  std::vector<std::size_t> draws(s, 0);

  parallel_for(s, [&](std::size_t m) {
    const std::uint64_t member_seed = derive_seed(options.seed, m);
    Rng rng(member_seed);
    const auto picks = rng.sample_without_replacement(negative_pool.size(), r * k);
    std::vector<std::vector<double>> x = positive_x;
    std::vector<int> y(k, 1);
    for (std::size_t p : picks) {
      x.push_back(doc_vector(doc_vectors, corpus[negative_pool[p]].id));
      y.push_back(-1);
    }
    samples[m] = x.size();
    draws[m] = picks.size();
    ensemble.members[m] =
        train_linear_svm(x, y, options.svm, derive_seed(member_seed, "svm"));
  });

  if (audit != nullptr) {
    audit->samples_per_member = samples;
    audit->negative_draws = 0;
    for (std::size_t d : draws) audit->negative_draws += d;
  }
  return ensemble;
}

Assignment score_and_assign(std::span<const ClassifierEnsemble> ensembles,
                            const Corpus& corpus,
                            const EmbeddingTable& doc_vectors) {
  if (ensembles.empty()) throw UsageError("no ensembles to assign with");
  Assignment out;
  out.scores.assign(corpus.size(), std::vector<double>(ensembles.size(), 0.0));
  parallel_for(corpus.size(), [&](std::size_t d) {
    const Vector& x = doc_vector(doc_vectors, corpus[d].id);
    for (std::size_t e = 0; e < ensembles.size(); ++e) {
      out.scores[d][e] = ensembles[e].score(x);
    }
  });
  out.events.resize(ensembles.size());
  for (std::size_t e = 0; e < ensembles.size(); ++e) {
    out.events[e].id = ensembles[e].event_id;
  }
  for (DocIndex d = 0; d < corpus.size(); ++d) {
    const auto& row = out.scores[d];
    const auto best = std::max_element(row.begin(), row.end());
    if (*best > 0.0) {
      out.events[static_cast<std::size_t>(best - row.begin())].documents.push_back(
          {corpus[d].id, *best});
    } else {
      out.unassigned.push_back(corpus[d].id);
    }
  }
  for (auto& event : out.events) sort_documents(event.documents);
  return out;
}

PostFilterResult temporal_post_filter(const KeyEvent& event,
                                      const Corpus& corpus) {
  if (event.span.empty()) throw UsageError("event " + event.id + " has no span");
  std::vector<DocIndex> outside;
  for (const auto& sd : event.documents) {
    const auto d = corpus.find(sd.id);
    if (!d) throw DataError("event document not in corpus: " + sd.id);
    if (!event.span.contains(corpus[*d].day)) outside.push_back(*d);
  }
  std::sort(outside.begin(), outside.end(), [&](DocIndex a, DocIndex b) {
    if (corpus[a].day != corpus[b].day) return corpus[a].day < corpus[b].day;
    return corpus[a].id < corpus[b].id;
  });

  std::vector<std::vector<DocIndex>> clusters;
  for (DocIndex d : outside) {
    if (clusters.empty() || corpus[d].day - corpus[clusters.back().back()].day > 1) {
      clusters.emplace_back();
    }
    clusters.back().push_back(d);
  }

  PostFilterResult out;
  std::unordered_set<std::string> removed;
  for (const auto& cluster : clusters) {
    bool drop = cluster.size() >= 2;
    if (!drop) {
      const Document& doc = corpus[cluster.front()];
      bool mentions_span = false;
      for (int epoch : extract_dates(doc.lead(3), corpus.origin_days() + doc.day)) {
        if (event.span.contains(corpus.day_of(epoch))) {
          mentions_span = true;
          break;
        }
      }
      drop = !mentions_span;
    }
    if (!drop) continue;
    std::vector<std::string> ids;
    for (DocIndex d : cluster) {
      ids.push_back(corpus[d].id);
      removed.insert(corpus[d].id);
    }
    out.filtered_clusters.push_back(std::move(ids));
  }

  out.event = event;
  std::erase_if(out.event.documents,
                [&](const ScoredDoc& sd) { return removed.contains(sd.id); });
  return out;
}

std::vector<std::pair<std::string, double>> cluster_phrases(
    std::span<const std::string> doc_ids, const Corpus& corpus,
    const OccurrenceIndex& index, std::size_t top) {
  std::vector<DocIndex> docs;
  for (const auto& id : doc_ids) {
    const auto d = corpus.find(id);
    if (!d) throw DataError("cluster document not in corpus: " + id);
    docs.push_back(*d);
  }
  const double n = static_cast<double>(corpus.size());
  std::vector<std::pair<std::string, double>> scored;
  for (const auto& phrase : index.phrases()) {
    std::size_t tf = 0;
    for (DocIndex d : docs) tf += index.doc_freq(phrase, d);
    if (tf == 0) continue;
    const double df = static_cast<double>(index.doc_count(phrase));
    const double score = (1.0 + std::log(static_cast<double>(tf))) * std::log(n / df);
    if (score > 0.0) scored.emplace_back(phrase, score);
  }
  std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (scored.size() > top) scored.resize(top);
  return scored;
}

RefineResult refine_iteration(
    std::span<const KeyEvent> events, std::span<const PseudoLabelSet> pseudo,
    const PseudoScoreFn& pseudo_score,
    std::span<const std::vector<std::vector<std::string>>> filtered_clusters,
    const Corpus& corpus, const OccurrenceIndex& index, std::size_t n_add,
    std::size_t top_phrases) {
  if (n_add < 1) throw UsageError("n_add must be at least 1");
  if (events.size() != pseudo.size() || events.size() != filtered_clusters.size()) {
    throw UsageError("events, pseudo labels and filtered clusters differ in length");
  }
  RefineResult out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    PseudoLabelSet next;
    next.event_id = pseudo[i].event_id;
    std::unordered_set<std::string> present;
    for (const auto& id : pseudo[i].positives) {
      if (pseudo_score(i, id) < 0.0) continue;
      next.positives.push_back(id);
      present.insert(id);
      if (auto it = pseudo[i].match_scores.find(id); it != pseudo[i].match_scores.end()) {
        next.match_scores.insert(*it);
      }
    }
    const auto& docs = events[i].documents;
    for (std::size_t j = 0; j < docs.size() && j < n_add; ++j) {
      if (present.insert(docs[j].id).second) next.positives.push_back(docs[j].id);
    }
    out.pseudo.push_back(std::move(next));

    for (const auto& cluster : filtered_clusters[i]) {
      if (cluster.size() < 2) continue;
      CandidateEvent candidate;
      for (auto& [phrase, score] : cluster_phrases(cluster, corpus, index, top_phrases)) {
        candidate.phrases.insert(phrase);
      }
      if (candidate.phrases.empty()) continue;
      candidate.span.first = std::numeric_limits<int>::max();
      candidate.span.last = std::numeric_limits<int>::min();
      for (const auto& id : cluster) {
        const int day = corpus[*corpus.find(id)].day;
        candidate.span.first = std::min(candidate.span.first, day);
        candidate.span.last = std::max(candidate.span.last, day);
      }
      out.new_events.push_back(std::move(candidate));
      out.new_event_source.push_back(i);
    }
  }
  return out;
}

SelectionResult run_selection_loop(std::span<const CandidateEvent> candidates,
                                   const SelectionInputs& inputs,
                                   const SelectionConfig& config,
                                   std::ostream* audit) {
  if (candidates.empty()) throw UsageError("no candidate events");
  if (config.iterations < 1) throw UsageError("iterations must be at least 1");
  const Corpus& corpus = inputs.corpus;

  struct Active {
    std::string id;
    std::set<std::string> phrases;
    DaySpan span;
    PseudoLabelSet pseudo;
  };
  std::vector<Active> active;
  std::size_t next_id = 1;
  auto admit = [&](const CandidateEvent& c, int iteration) {
    Active a;
    a.id = "E" + std::to_string(next_id++);
    Enrichment enriched =
        enrich_phrases(c.phrases, inputs.pool, inputs.phrase_vectors, config.tau);
    if (!enriched.skipped.empty()) {
      emit(audit, Json{{"iteration", iteration},
                       {"type", "enrich_skipped"},
                       {"event", a.id},
                       {"phrases", enriched.skipped}});
    }
    a.phrases = std::move(enriched.phrases);
    a.span = c.span;
    a.pseudo = generate_pseudo_labels(a.id, a.span, a.phrases, corpus,
                                      inputs.index, config.pseudo_top);
    emit(audit, Json{{"iteration", iteration},
                     {"type", "pseudo_init"},
                     {"event", a.id},
                     {"span", span_json(a.span, corpus)},
                     {"phrases", a.phrases},
                     {"positives", a.pseudo.positives}});
    active.push_back(std::move(a));
  };
  for (const auto& c : candidates) admit(c, 1);

  SelectionResult result;
  for (int it = 1; it <= config.iterations; ++it) {
    std::erase_if(active, [&](const Active& a) {
      if (a.pseudo.positives.size() >= 2) return false;
      emit(audit, Json{{"iteration", it},
                       {"type", "dropped"},
                       {"event", a.id},
                       {"pseudo_size", a.pseudo.positives.size()}});
      return true;
    });
    if (active.empty()) {
      result.events.clear();
      result.outliers.clear();
      for (const auto& doc : corpus.documents()) result.outliers.push_back(doc.id);
      break;
    }

    std::vector<ClassifierEnsemble> ensembles;
    for (const auto& a : active) {
      EnsembleOptions opts;
      opts.r = config.r;
      opts.members = config.ensemble_size;
      opts.seed = derive_seed(config.seed, a.id + "#" + std::to_string(it));
      opts.svm = config.svm;
      ensembles.push_back(train_ensemble(a.pseudo, corpus, inputs.doc_vectors, opts));
    }
    Assignment assignment = score_and_assign(ensembles, corpus, inputs.doc_vectors);

    std::vector<KeyEvent> filtered_events;
    std::vector<std::vector<std::vector<std::string>>> clusters;
    for (std::size_t i = 0; i < active.size(); ++i) {
      KeyEvent& e = assignment.events[i];
      e.phrases = active[i].phrases;
      e.span = active[i].span;
      PostFilterResult pf = temporal_post_filter(e, corpus);
      std::size_t removed = 0;
      for (const auto& c : pf.filtered_clusters) removed += c.size();
      emit(audit, Json{{"iteration", it},
                       {"type", "assignment"},
                       {"event", e.id},
                       {"assigned", e.documents.size()},
                       {"filtered", removed},
                       {"kept", pf.event.documents.size()}});
      filtered_events.push_back(std::move(pf.event));
      clusters.push_back(std::move(pf.filtered_clusters));
    }

    if (it == config.iterations) {
      for (auto& e : filtered_events) {
        if (!e.documents.empty()) result.events.push_back(std::move(e));
      }
      result.outliers = std::move(assignment.unassigned);
      break;
    }

    std::vector<PseudoLabelSet> pseudo;
    for (const auto& a : active) pseudo.push_back(a.pseudo);
    auto score_of = [&](std::size_t event, const std::string& id) {
      return assignment.scores[*corpus.find(id)][event];
    };
    RefineResult refined =
        refine_iteration(filtered_events, pseudo, score_of, clusters, corpus,
                         inputs.index, config.n_add, config.cluster_phrases);
    for (std::size_t i = 0; i < active.size(); ++i) {
      const auto& before = active[i].pseudo.positives;
      const auto& after = refined.pseudo[i].positives;
      std::vector<std::string> removed, added;
      for (const auto& id : before) {
        if (std::find(after.begin(), after.end(), id) == after.end()) removed.push_back(id);
      }
      for (const auto& id : after) {
        if (std::find(before.begin(), before.end(), id) == before.end()) added.push_back(id);
      }
      emit(audit, Json{{"iteration", it},
                       {"type", "pseudo_update"},
                       {"event", active[i].id},
                       {"removed", removed},
                       {"added", added},
                       {"size", after.size()}});
      active[i].pseudo = std::move(refined.pseudo[i]);
    }
    for (std::size_t j = 0; j < refined.new_events.size(); ++j) {
      emit(audit, Json{{"iteration", it},
                       {"type", "new_event"},
                       {"event", "E" + std::to_string(next_id)},
                       {"source", active[refined.new_event_source[j]].id}});
      admit(refined.new_events[j], it + 1);
    }
  }
  return result;
}

std::vector<KeyEvent> phrase_matching_events(
    std::span<const CandidateEvent> candidates, const SelectionInputs& inputs,
    double tau) {
  const Corpus& corpus = inputs.corpus;
  std::vector<KeyEvent> events(candidates.size());
  std::unordered_map<DocIndex, std::pair<std::size_t, std::size_t>> best;  // event, count
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    events[i].id = "E" + std::to_string(i + 1);
    events[i].span = candidates[i].span;
    events[i].phrases =
        enrich_phrases(candidates[i].phrases, inputs.pool, inputs.phrase_vectors, tau)
            .phrases;
    const auto counts =
        match_counts(events[i].span, events[i].phrases, corpus, inputs.index);
    for (const auto& [doc, count] : counts) {
      if (count == 0) continue;
      auto it = best.find(doc);
      if (it == best.end() || count > it->second.second) best[doc] = {i, count};
    }
  }
  std::vector<DocIndex> docs;
  for (const auto& [doc, _] : best) docs.push_back(doc);
  std::sort(docs.begin(), docs.end());
  for (DocIndex d : docs) {
    const auto [event, count] = best[d];
    events[event].documents.push_back({corpus[d].id, static_cast<double>(count)});
  }
  std::vector<KeyEvent> out;
  for (auto& e : events) {
    if (e.documents.empty()) continue;
    sort_documents(e.documents);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace keyevent
