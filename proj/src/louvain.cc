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

#include "keyevent/louvain.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "keyevent/error.h"
#include "keyevent/rng.h"

namespace keyevent {

WeightedGraph::WeightedGraph(std::size_t num_nodes)
    : adjacency_(num_nodes), self_loops_(num_nodes, 0.0),
      strength_(num_nodes, 0.0) {}

void WeightedGraph::add_edge(std::size_t u, std::size_t v, double weight) {
  if (u >= size() || v >= size()) throw UsageError("edge endpoint out of range");
  if (weight < 0.0) throw UsageError("negative edge weight");
  total_weight_ += weight;
  if (u == v) {
    self_loops_[u] += weight;
    strength_[u] += 2.0 * weight;
    return;
  }
  auto bump = [&](std::size_t a, std::size_t b) {
    for (auto& n : adjacency_[a]) {
      if (n.node == b) {
        n.weight += weight;
        return;
      }
    }
    adjacency_[a].push_back({b, weight});
  };
  bump(u, v);
  bump(v, u);
  strength_[u] += weight;
  strength_[v] += weight;
}

double modularity(const WeightedGraph& graph,
                  std::span<const std::size_t> community, double resolution) {
  if (community.size() != graph.size()) {
    throw UsageError("partition size does not match graph");
  }
  const double m2 = 2.0 * graph.total_weight();
  if (m2 <= 0.0) return 0.0;
  std::size_t k = 0;
  for (auto c : community) k = std::max(k, c + 1);
  std::vector<double> in(k, 0.0), tot(k, 0.0);
  for (std::size_t u = 0; u < graph.size(); ++u) {
    const std::size_t c = community[u];
    tot[c] += graph.strength(u);
    in[c] += 2.0 * graph.self_loop(u);
    for (const auto& n : graph.neighbors(u)) {
      if (community[n.node] == c) in[c] += n.weight;
    }
  }
  double q = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    q += in[c] / m2 - resolution * (tot[c] / m2) * (tot[c] / m2);
  }
  return q;
}

namespace {

// One round of local moves on `g`. Returns true if any node moved.
bool move_nodes(const WeightedGraph& g, const LouvainOptions& opt,
                std::uint64_t level_seed, std::vector<std::size_t>& comm) {
  const std::size_t n = g.size();
  const double m2 = 2.0 * g.total_weight();
  std::vector<double> tot(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) tot[comm[u]] += g.strength(u);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (opt.shuffle) {
    Rng rng(level_seed);
    rng.shuffle(order);
  }

  std::vector<double> link(n, -1.0);
  std::vector<std::size_t> seen;
  bool any_move = false;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t u : order) {
      const std::size_t home = comm[u];
      const double k_u = g.strength(u);

      seen.clear();
      link[home] = 0.0;
      seen.push_back(home);
      for (const auto& nb : g.neighbors(u)) {
        const std::size_t c = comm[nb.node];
        if (link[c] < 0.0) {
          link[c] = 0.0;
          seen.push_back(c);
        }
        link[c] += nb.weight;
      }

      tot[home] -= k_u;
      std::size_t best = home;
      double best_gain = link[home] - opt.resolution * tot[home] * k_u / m2;
      for (std::size_t c : seen) {
        const double gain = link[c] - opt.resolution * tot[c] * k_u / m2;
        if (gain > best_gain + opt.min_gain) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += k_u;
      comm[u] = best;
      for (std::size_t c : seen) link[c] = -1.0;
      if (best != home) {
        improved = true;
        any_move = true;
      }
    }
  }
  return any_move;
}

// Relabels to 0..k-1 by first appearance; returns k.
std::size_t renumber(std::vector<std::size_t>& comm) {
  std::map<std::size_t, std::size_t> ids;
  for (auto& c : comm) {
    const auto [it, inserted] = ids.emplace(c, ids.size());
    c = it->second;
  }
  return ids.size();
}

WeightedGraph aggregate(const WeightedGraph& g,
                        const std::vector<std::size_t>& comm, std::size_t k) {
  std::map<std::pair<std::size_t, std::size_t>, double> weights;
  for (std::size_t u = 0; u < g.size(); ++u) {
    if (g.self_loop(u) > 0.0) weights[{comm[u], comm[u]}] += g.self_loop(u);
    for (const auto& nb : g.neighbors(u)) {
      if (nb.node < u) continue;
      auto a = comm[u], b = comm[nb.node];
      if (a > b) std::swap(a, b);
      weights[{a, b}] += nb.weight;
    }
  }
  WeightedGraph out(k);
  for (const auto& [edge, w] : weights) out.add_edge(edge.first, edge.second, w);
  return out;
}

// Kernighan-Lin refinement at node level. Each pass moves every node once,
// always taking the best remaining move (possibly into a new community), then
// rolls back to the best prefix. Returns true if the partition improved.
bool refine_partition(const WeightedGraph& g, const LouvainOptions& opt,
                      std::vector<std::size_t>& comm) {
  const std::size_t n = g.size();
  const double m2 = 2.0 * g.total_weight();
  bool any = false;
  for (int pass = 0; pass < opt.max_refine_passes; ++pass) {
    std::vector<double> tot(n, 0.0);
    std::vector<std::size_t> members(n, 0);
    for (std::size_t u = 0; u < n; ++u) {
      tot[comm[u]] += g.strength(u);
      ++members[comm[u]];
    }
    std::vector<bool> locked(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> moves;  // node, old label
    std::vector<double> link(n, 0.0);
    double cum = 0.0, best = 0.0;
    std::size_t best_len = 0;
    for (std::size_t step = 0; step < n; ++step) {
      std::size_t pick = n, target = 0;
      double pick_delta = 0.0;
      for (std::size_t u = 0; u < n; ++u) {
        if (locked[u]) continue;
        const std::size_t home = comm[u];
        const double k_u = g.strength(u);
        for (const auto& nb : g.neighbors(u)) link[comm[nb.node]] += nb.weight;
        const double stay = link[home] - opt.resolution * (tot[home] - k_u) * k_u / m2;
        auto consider = [&](std::size_t c, double gain) {
          const double delta = 2.0 * (gain - stay) / m2;
          if (pick == n || delta > pick_delta) {
            pick = u;
            target = c;
            pick_delta = delta;
          }
        };
        for (const auto& nb : g.neighbors(u)) {
          const std::size_t c = comm[nb.node];
          if (c != home) consider(c, link[c] - opt.resolution * tot[c] * k_u / m2);
        }
        if (members[home] > 1) {
          const auto empty = std::find(members.begin(), members.end(), 0);
          if (empty != members.end()) consider(empty - members.begin(), 0.0);
        }
        for (const auto& nb : g.neighbors(u)) link[comm[nb.node]] = 0.0;
      }
      if (pick == n) break;
      const double k_u = g.strength(pick);
      moves.emplace_back(pick, comm[pick]);
      tot[comm[pick]] -= k_u;
      --members[comm[pick]];
      comm[pick] = target;
      tot[target] += k_u;
      ++members[target];
      locked[pick] = true;
      cum += pick_delta;
      if (cum > best + opt.min_gain) {
        best = cum;
        best_len = moves.size();
      }
    }
    while (moves.size() > best_len) {
      comm[moves.back().first] = moves.back().second;
      moves.pop_back();
    }
    if (best_len == 0) break;
    any = true;
  }
  return any;
}

}  // namespace

std::vector<std::size_t> Louvain::run(const WeightedGraph& graph,
                                      std::vector<double>* trace) const {
  std::vector<std::size_t> labels(graph.size());
  std::iota(labels.begin(), labels.end(), 0);
  if (graph.size() == 0 || graph.total_weight() <= 0.0) return labels;
  int depth = 0;
  for (int round = 0; round <= options_.max_refine_passes; ++round) {
    // Coarsen from the current labels, keeping every level for refinement.
    std::size_t k = renumber(labels);
    const std::vector<std::size_t> base = labels;
    std::vector<WeightedGraph> levels = {aggregate(graph, labels, k)};
    std::vector<std::vector<std::size_t>> maps;  // level i node -> level i + 1
    for (; depth < options_.max_levels; ++depth) {
      const WeightedGraph& level = levels.back();
      std::vector<std::size_t> comm(level.size());
      std::iota(comm.begin(), comm.end(), 0);
      const bool moved = move_nodes(level, options_,
                                    derive_seed(options_.seed,
                                                static_cast<std::uint64_t>(depth)),
                                    comm);
      if (!moved) break;
      k = renumber(comm);
      for (auto& l : labels) l = comm[l];
      if (trace) trace->push_back(modularity(graph, labels, options_.resolution));
      if (k == level.size()) break;
      maps.push_back(comm);
      levels.push_back(aggregate(level, comm, k));
    }
    if (!options_.refine) break;

    // Uncoarsen: refine at every level down to the nodes of `graph`, so groups
    // of any granularity can move as a unit.
    bool improved = false;
    std::vector<std::size_t> part(levels.back().size());
    std::iota(part.begin(), part.end(), 0);
    for (std::size_t lv = levels.size(); lv-- > 1;) {
      improved |= refine_partition(levels[lv], options_, part);
      std::vector<std::size_t> down(levels[lv - 1].size());
      for (std::size_t u = 0; u < down.size(); ++u) down[u] = part[maps[lv - 1][u]];
      part = std::move(down);
    }
    improved |= refine_partition(levels[0], options_, part);
    for (std::size_t u = 0; u < graph.size(); ++u) labels[u] = part[base[u]];
    if (round > 0) improved |= refine_partition(graph, options_, labels);
    if (!improved) break;
    if (trace) trace->push_back(modularity(graph, labels, options_.resolution));
  }
  renumber(labels);
  return labels;
}

std::vector<std::size_t> Louvain::partition(const WeightedGraph& graph) const {
  return run(graph, nullptr);
}

std::vector<double> Louvain::level_modularity(const WeightedGraph& graph) const {
  std::vector<double> trace;
  run(graph, &trace);
  return trace;
}

}  // namespace keyevent
