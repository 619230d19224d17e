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

// Weighted undirected graphs, Newman modularity, and the Louvain multi-level
// modularity optimizer.

#ifndef KEYEVENT_LOUVAIN_H_
#define KEYEVENT_LOUVAIN_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace keyevent {

class WeightedGraph {
 public:
  struct Neighbor {
    std::size_t node;
    double weight;
  };

  explicit WeightedGraph(std::size_t num_nodes = 0);

  // Adds w to edge {u, v}. A self-loop (u == v) contributes 2w to the
  // node's strength.
  void add_edge(std::size_t u, std::size_t v, double weight);

  std::size_t size() const { return adjacency_.size(); }
  // Neighbors other than the node itself; parallel additions are merged.
  const std::vector<Neighbor>& neighbors(std::size_t u) const {
    return adjacency_[u];
  }
  double self_loop(std::size_t u) const { return self_loops_[u]; }
  double strength(std::size_t u) const { return strength_[u]; }
  // Sum of edge weights, each edge once.
  double total_weight() const { return total_weight_; }

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<double> self_loops_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;
};

// Q = sum_c [ in_c / 2m - resolution * (tot_c / 2m)^2 ]. Zero for a graph
// without edges.
double modularity(const WeightedGraph& graph,
                  std::span<const std::size_t> community,
                  double resolution = 1.0);

// Assigns every node a community label in [0, k).
class CommunityDetector {
 public:
  virtual ~CommunityDetector() = default;
  virtual std::vector<std::size_t> partition(const WeightedGraph& graph) const = 0;
};

struct LouvainOptions {
  double resolution = 1.0;
  // Visit nodes in index order unless shuffling is requested.
  bool shuffle = false;
  std::uint64_t seed = 0;
  double min_gain = 1e-12;
  int max_levels = 64;
  // Kernighan-Lin passes over the final partition: sequences of single-node
  // moves (losing ones included) are kept up to their best prefix. This lets
  // the result escape local optima that need several nodes to move together.
  bool refine = true;
  int max_refine_passes = 32;
};

class Louvain final : public CommunityDetector {
 public:
  explicit Louvain(LouvainOptions options = {}) : options_(options) {}

  // Labels are numbered by first appearance in node order.
  std::vector<std::size_t> partition(const WeightedGraph& graph) const override;

  // Modularity after each completed level and after refinement
  // (non-decreasing), for inspection.
  std::vector<double> level_modularity(const WeightedGraph& graph) const;

 private:
  std::vector<std::size_t> run(const WeightedGraph& graph,
                               std::vector<double>* trace) const;

  LouvainOptions options_;
};

}  // namespace keyevent

#endif  // KEYEVENT_LOUVAIN_H_
