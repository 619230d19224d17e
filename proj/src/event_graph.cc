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

#include "keyevent/event_graph.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "keyevent/error.h"
#include "keyevent/format.h"

namespace keyevent {

double PeakPhraseGraph::weight(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const auto it = edges.find({i, j});
  return it == edges.end() ? 0.0 : it->second;
}

std::optional<std::size_t> PeakPhraseGraph::node_index(std::string_view phrase,
                                                       int day) const {
  const auto it = std::lower_bound(
      nodes.begin(), nodes.end(), std::make_pair(phrase, day),
      [](const PeakPhrase& n, const std::pair<std::string_view, int>& key) {
        if (n.phrase != key.first) return n.phrase < key.first;
        return n.day < key.second;
      });
  if (it == nodes.end() || it->phrase != phrase || it->day != day) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - nodes.begin());
}

WeightedGraph PeakPhraseGraph::to_weighted() const {
  WeightedGraph g(nodes.size());
  for (const auto& [edge, w] : edges) g.add_edge(edge.first, edge.second, w);
  return g;
}

namespace {

// Documents published on `day` that mention `phrase`, ascending.
std::vector<DocIndex> docs_on_day(std::string_view phrase, int day,
                                  const Corpus& corpus,
                                  const OccurrenceIndex& index) {
  std::vector<DocIndex> out;
  for (const auto& p : index.postings(phrase)) {
    if (corpus[p.doc].day == day) out.push_back(p.doc);
  }
  return out;
}

double npmi_from_counts(std::size_t both, std::size_t count_a,
                        std::size_t count_b, std::size_t day_docs) {
  if (both == 0) return -1.0;
  const double n = static_cast<double>(day_docs);
  const double p_ab = static_cast<double>(both) / n;
  if (p_ab >= 1.0) return 1.0;
  const double p_a = static_cast<double>(count_a) / n;
  const double p_b = static_cast<double>(count_b) / n;
  return -std::log(p_ab / (p_a * p_b)) / std::log(p_ab);
}

std::size_t intersection_size(const std::vector<DocIndex>& a,
                              const std::vector<DocIndex>& b) {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

}  // namespace

double npmi(const PeakPhrase& a, const PeakPhrase& b, const Corpus& corpus,
            const OccurrenceIndex& index) {
  if (a.day != b.day) throw UsageError("npmi of peaks on different days");
  const std::size_t day_docs = corpus.docs_on(a.day).size();
  if (day_docs == 0) {
    throw DataError("npmi on day " + format_iso(corpus.date_of(a.day)) +
                    " without documents");
  }
  const auto da = docs_on_day(a.phrase, a.day, corpus, index);
  const auto db = docs_on_day(b.phrase, b.day, corpus, index);
  return npmi_from_counts(intersection_size(da, db), da.size(), db.size(),
                          day_docs);
}

double same_day_weight(double npmi_value, double cos_value) {
  return std::sqrt(std::max(npmi_value, 0.0) * std::max(cos_value, 0.0));
}

double same_day_weight(const PeakPhrase& a, const PeakPhrase& b,
                       double npmi_value, double cos_value) {
  if (a.day != b.day) throw UsageError("same-day weight across days");
  return same_day_weight(npmi_value, cos_value);
}

PeakPhraseGraph build_graph(std::span<const PeakPhrase> peaks,
                            const Corpus& corpus, const OccurrenceIndex& index,
                            const EmbeddingTable& phrase_vectors, double w_const,
                            double edge_floor) {
  if (!(w_const > 1.0)) throw UsageError("w_const must be greater than 1");
  PeakPhraseGraph graph;
  graph.w_const = w_const;
  graph.nodes.assign(peaks.begin(), peaks.end());
  std::sort(graph.nodes.begin(), graph.nodes.end(),
            [](const PeakPhrase& x, const PeakPhrase& y) {
              if (x.phrase != y.phrase) return x.phrase < y.phrase;
              return x.day < y.day;
            });
  graph.nodes.erase(std::unique(graph.nodes.begin(), graph.nodes.end(),
                                [](const PeakPhrase& x, const PeakPhrase& y) {
                                  return x.same_node(y);
                                }),
                    graph.nodes.end());

  std::string missing;
  std::set<std::string> reported;
  for (const auto& n : graph.nodes) {
    if (phrase_vectors.contains(n.phrase) || !reported.insert(n.phrase).second) {
      continue;
    }
    if (!missing.empty()) missing += ", ";
    missing += n.phrase;
  }
  if (!missing.empty()) {
    throw DataError("missing phrase embeddings: " + missing);
  }

  std::map<int, std::vector<std::size_t>> by_day;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    by_day[graph.nodes[i].day].push_back(i);
  }
  for (const auto& [day, members] : by_day) {
    // A quiet day gives no co-occurrence evidence: no same-day edges.
    const std::size_t day_docs = corpus.docs_on(day).size();
    if (members.size() < 2 || day_docs == 0) continue;
    std::vector<std::vector<DocIndex>> docs;
    for (std::size_t i : members) {
      docs.push_back(docs_on_day(graph.nodes[i].phrase, day, corpus, index));
    }
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto& na = graph.nodes[members[a]];
        const auto& nb = graph.nodes[members[b]];
        const double n = npmi_from_counts(intersection_size(docs[a], docs[b]),
                                          docs[a].size(), docs[b].size(),
                                          day_docs);
        const double c = cosine(phrase_vectors.at(na.phrase),
                                phrase_vectors.at(nb.phrase));
        const double w = same_day_weight(n, c);
        if (w > 0.0 && w > edge_floor) {
          graph.edges[{std::min(members[a], members[b]),
                       std::max(members[a], members[b])}] = w;
        }
      }
    }
  }
  // Nodes are sorted by (phrase, day), so (p, t+1) directly follows (p, t).
  for (std::size_t i = 0; i + 1 < graph.nodes.size(); ++i) {
    const auto& cur = graph.nodes[i];
    const auto& nxt = graph.nodes[i + 1];
    if (cur.phrase == nxt.phrase && nxt.day == cur.day + 1) {
      graph.edges[{i, i + 1}] = w_const;
    }
  }
  return graph;
}

std::vector<CandidateEvent> detect_communities(const PeakPhraseGraph& graph,
                                               std::size_t min_size,
                                               double resolution,
                                               std::uint64_t seed,
                                               const CommunityDetector* detector) {
  if (graph.nodes.empty()) return {};
  LouvainOptions options;
  options.resolution = resolution;
  options.seed = seed;
  const Louvain louvain(options);
  const CommunityDetector& algo = detector ? *detector : louvain;
  const auto labels = algo.partition(graph.to_weighted());

  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);

  std::vector<CandidateEvent> events;
  for (const auto& [label, members] : groups) {
    if (members.size() < min_size) continue;
    CandidateEvent ev;
    ev.span = DaySpan{graph.nodes[members.front()].day,
                      graph.nodes[members.front()].day};
    for (std::size_t i : members) {
      const auto& node = graph.nodes[i];
      ev.phrases.insert(node.phrase);
      ev.members.push_back(node);
      ev.span.first = std::min(ev.span.first, node.day);
      ev.span.last = std::max(ev.span.last, node.day);
    }
    events.push_back(std::move(ev));
  }
  std::sort(events.begin(), events.end(),
            [](const CandidateEvent& a, const CandidateEvent& b) {
              if (a.span.first != b.span.first) return a.span.first < b.span.first;
              if (a.span.last != b.span.last) return a.span.last < b.span.last;
              return a.phrases < b.phrases;
            });
  return events;
}

void write_graph(const PeakPhraseGraph& graph, const Corpus& corpus,
                 std::ostream& out) {
  out << "phrase_i\tdate_i\tphrase_j\tdate_j\tweight\n";
  for (const auto& [edge, w] : graph.edges) {
    const auto& a = graph.nodes[edge.first];
    const auto& b = graph.nodes[edge.second];
    out << a.phrase << '\t' << format_iso(corpus.date_of(a.day)) << '\t'
        << b.phrase << '\t' << format_iso(corpus.date_of(b.day)) << '\t'
        << format_double(w) << '\n';
  }
}

namespace {

int parse_day(const std::string& text, const Corpus& corpus,
              const char* what, std::size_t line) {
  const auto d = parse_iso_date(text);
  if (!d) {
    throw DataError(std::string(what) + " line " + std::to_string(line) +
                    ": bad date '" + text + "'");
  }
  return corpus.day_of(to_epoch_days(*d));
}

std::vector<std::string> split_bars(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = text.find(" | ", start);
    const auto piece = text.substr(start, bar == std::string::npos
                                              ? std::string::npos
                                              : bar - start);
    if (!piece.empty()) out.push_back(piece);
    if (bar == std::string::npos) break;
    start = bar + 3;
  }
  return out;
}

}  // namespace

PeakPhraseGraph read_graph(std::istream& in, std::span<const PeakPhrase> nodes,
                           const Corpus& corpus, double w_const) {
  PeakPhraseGraph graph;
  graph.w_const = w_const;
  graph.nodes.assign(nodes.begin(), nodes.end());
  std::sort(graph.nodes.begin(), graph.nodes.end(),
            [](const PeakPhrase& x, const PeakPhrase& y) {
              if (x.phrase != y.phrase) return x.phrase < y.phrase;
              return x.day < y.day;
            });
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("phrase_i\t", 0) == 0) continue;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      throw DataError("graph line " + std::to_string(line_no) +
                      ": expected 5 fields");
    }
    const auto i = graph.node_index(f[0], parse_day(f[1], corpus, "graph", line_no));
    const auto j = graph.node_index(f[2], parse_day(f[3], corpus, "graph", line_no));
    if (!i || !j) {
      throw DataError("graph line " + std::to_string(line_no) +
                      ": edge endpoint is not a peak phrase");
    }
    graph.edges[{std::min(*i, *j), std::max(*i, *j)}] =
        parse_double(f[4], "weight", line_no);
  }
  return graph;
}

void write_events(std::span<const CandidateEvent> events, const Corpus& corpus,
                  std::ostream& out) {
  out << "event\tstart\tend\tphrases\tnodes\n";
  for (std::size_t e = 0; e < events.size(); ++e) {
    const auto& ev = events[e];
    out << "C" << e + 1 << '\t' << format_iso(corpus.date_of(ev.span.first))
        << '\t' << format_iso(corpus.date_of(ev.span.last)) << '\t';
    bool first = true;
    for (const auto& p : ev.phrases) {
      out << (first ? "" : " | ") << p;
      first = false;
    }
    out << '\t';
    first = true;
    for (const auto& m : ev.members) {
      out << (first ? "" : " | ") << m.phrase << '@'
          << format_iso(corpus.date_of(m.day));
      first = false;
    }
    out << '\n';
  }
}

std::vector<CandidateEvent> read_events(std::istream& in, const Corpus& corpus) {
  std::vector<CandidateEvent> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("event\t", 0) == 0) continue;
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 5) {
      throw DataError("event line " + std::to_string(line_no) +
                      ": expected 5 fields");
    }
    CandidateEvent ev;
    ev.span = DaySpan{parse_day(f[1], corpus, "event", line_no),
                      parse_day(f[2], corpus, "event", line_no)};
    for (auto& p : split_bars(f[3])) ev.phrases.insert(std::move(p));
    for (const auto& node : split_bars(f[4])) {
      const auto at = node.rfind('@');
      if (at == std::string::npos) {
        throw DataError("event line " + std::to_string(line_no) +
                        ": node without date");
      }
      PeakPhrase p;
      p.phrase = node.substr(0, at);
      p.day = parse_day(node.substr(at + 1), corpus, "event", line_no);
      ev.members.push_back(std::move(p));
    }
    events.push_back(std::move(ev));
  }
  return events;
}

}  // namespace keyevent
