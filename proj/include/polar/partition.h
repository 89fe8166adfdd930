// Copyright 2026 The Polar Authors
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

#ifndef POLAR_PARTITION_H_
#define POLAR_PARTITION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/graph.h"

namespace polar {

enum class Side : uint8_t { kX = 0, kY = 1 };

constexpr Side opposite(Side s) { return s == Side::kX ? Side::kY : Side::kX; }
constexpr char side_letter(Side s) { return s == Side::kX ? 'X' : 'Y'; }

// Admissible vertex weight of side X (and, by symmetry, of side Y) for a
// total weight W: the integers in [(1/2 - eps) W, (1/2 + eps) W]. When that
// interval holds no integer, the most balanced split {floor(W/2), ceil(W/2)}
// is admitted instead.
struct BalanceWindow {
  Weight lo = 0;
  Weight hi = 0;

  static BalanceWindow make(Weight total, double eps);

  bool contains(Weight x_weight) const { return lo <= x_weight && x_weight <= hi; }
  Weight violation(Weight x_weight) const {
    return x_weight < lo ? lo - x_weight : (x_weight > hi ? x_weight - hi : 0);
  }
};

struct Partition {
  std::vector<Side> side;
  Weight cut_weight = 0;
  double balance = 0.0;  // vertex weight of X over total vertex weight
  uint64_t seed = 0;

  size_t count(Side s) const;
  // Labels as a string of 'X'/'Y', one per vertex.
  std::string labels() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

Weight cut_weight(const WeightedGraph& graph, std::span<const Side> side);
Weight side_weight(const WeightedGraph& graph, std::span<const Side> side, Side which);

// Fills cut_weight and balance from the graph.
Partition make_partition(const WeightedGraph& graph, std::vector<Side> side, uint64_t seed);

// Partition with X and Y exchanged; cut and seed unchanged.
Partition swap_sides(const Partition& p);

// First violated invariant (size, nonempty sides, balance, cut), or nullopt.
std::optional<std::string> check_partition(const WeightedGraph& graph, const Partition& p,
                                           double eps);

struct CoarseningLevel {
  WeightedGraph graph;                    // the coarse graph
  std::vector<VertexId> fine_to_coarse;   // indexed by vertex of the finer level
  Weight collapsed_edge_weight = 0;       // weight of matched pairs' edges
};

// Heavy-edge matching rounds until at most `target_vertices` remain or a
// round shrinks the graph by less than 10%. Always runs at least one round on
// graphs with an edge. Finest level first.
std::vector<CoarseningLevel> coarsen(const WeightedGraph& graph, uint64_t seed,
                                     size_t target_vertices = 40);

// Best of 8 greedy region-growing runs. Throws Error(kInfeasibleBalance).
Partition initial_bipartition(const WeightedGraph& graph, double eps, uint64_t seed);

struct FmTrace {
  Weight input_cut = 0;
  bool input_balanced = false;
  std::vector<Weight> pass_cuts;  // cut after each pass, rollback applied
};

// Fiduccia-Mattheyses refinement. Moves may pass through states up to one
// vertex weight outside the window; only in-window prefixes are kept. For a
// balanced input the cut never increases.
Partition fm_refine(const WeightedGraph& graph, Partition p, double eps,
                    int max_passes = 10, FmTrace* trace = nullptr);

struct BipartitionTrace {
  size_t levels = 0;         // coarse levels built
  size_t initial_level = 0;  // level the initial partition was computed on
  std::vector<FmTrace> refinements;
};

// Multilevel bisection: coarsen, partition the coarsest feasible level,
// project back refining at every level. Vertex 0 always lands on X.
// Deterministic in (graph, eps, seed).
Partition bipartition(const WeightedGraph& graph, double eps = 0.05, uint64_t seed = 42,
                      BipartitionTrace* trace = nullptr);

}  // namespace polar

#endif  // POLAR_PARTITION_H_
