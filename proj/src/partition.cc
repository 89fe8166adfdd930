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

#include "polar/partition.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>

#include "polar/error.h"
#include "polar/random.h"

namespace polar {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 0.5)) {
    throw Error(Errc::kInvalidArgument, "balance tolerance must lie in [0, 0.5)");
  }
}

}  // namespace

BalanceWindow BalanceWindow::make(Weight total, double eps) {
  check_eps(eps);
  const double w = static_cast<double>(total);
  BalanceWindow window{static_cast<Weight>(std::ceil((0.5 - eps) * w - 1e-9)),
                       static_cast<Weight>(std::floor((0.5 + eps) * w + 1e-9))};
  if (window.lo > window.hi) window = {total / 2, (total + 1) / 2};
  return window;
}

size_t Partition::count(Side s) const { return std::count(side.begin(), side.end(), s); }

std::string Partition::labels() const {
  std::string out(side.size(), 'X');
  for (size_t v = 0; v < side.size(); ++v) out[v] = side_letter(side[v]);
  return out;
}

Weight cut_weight(const WeightedGraph& graph, std::span<const Side> side) {
  Weight cut = 0;
  for (const WeightedEdge& e : graph.edges()) {
    if (side[e.u] != side[e.v]) cut += e.weight;
  }
  return cut;
}

Weight side_weight(const WeightedGraph& graph, std::span<const Side> side, Side which) {
  Weight total = 0;
  for (size_t v = 0; v < side.size(); ++v) {
    if (side[v] == which) total += graph.vertex_weight(static_cast<VertexId>(v));
  }
  return total;
}

Partition make_partition(const WeightedGraph& graph, std::vector<Side> side, uint64_t seed) {
  if (side.size() != graph.num_vertices()) {
    throw Error(Errc::kDimensionMismatch, "partition size != vertex count");
  }
  Partition p;
  p.cut_weight = cut_weight(graph, side);
  const Weight total = graph.total_vertex_weight();
  p.balance = total > 0 ? static_cast<double>(side_weight(graph, side, Side::kX)) /
                              static_cast<double>(total)
                        : 0.0;
  p.side = std::move(side);
  p.seed = seed;
  return p;
}

Partition swap_sides(const Partition& p) {
  Partition out = p;
  for (Side& s : out.side) s = opposite(s);
  out.balance = p.side.empty() ? 0.0 : 1.0 - p.balance;
  return out;
}

std::optional<std::string> check_partition(const WeightedGraph& graph, const Partition& p,
                                           double eps) {
  if (p.side.size() != graph.num_vertices()) return "label count != vertex count";
  if (graph.num_vertices() >= 2 && (p.count(Side::kX) == 0 || p.count(Side::kY) == 0)) {
    return "a side is empty";
  }
  const Weight x_weight = side_weight(graph, p.side, Side::kX);
  if (!BalanceWindow::make(graph.total_vertex_weight(), eps).contains(x_weight)) {
    return "side weights outside the balance window";
  }
  const double balance = static_cast<double>(x_weight) /
                         static_cast<double>(graph.total_vertex_weight());
  if (std::abs(balance - p.balance) > 1e-12) return "stored balance is stale";
  if (cut_weight(graph, p.side) != p.cut_weight) return "stored cut weight is stale";
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Coarsening

namespace {

CoarseningLevel match_and_contract(const WeightedGraph& g, Rng& rng, Weight max_vertex_weight) {
  const auto n = static_cast<VertexId>(g.num_vertices());
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<VertexId>(order));

  std::vector<VertexId> mate(n, -1);
  for (VertexId v : order) {
    if (mate[v] >= 0) continue;
    VertexId best = -1;
    Weight best_weight = 0;
    auto adj = g.neighbors(v);
    auto w = g.edge_weights(v);
    for (size_t i = 0; i < adj.size(); ++i) {
      const VertexId u = adj[i];
      if (mate[u] >= 0) continue;
      if (g.vertex_weight(u) + g.vertex_weight(v) > max_vertex_weight) continue;
      // Adjacency is sorted, so strict '>' keeps the smaller index on ties.
      if (w[i] > best_weight) {
        best = u;
        best_weight = w[i];
      }
    }
    mate[v] = best >= 0 ? best : v;
    if (best >= 0) mate[best] = v;
  }

  CoarseningLevel level;
  level.fine_to_coarse.assign(n, -1);
  std::vector<Weight> coarse_weights;
  for (VertexId v = 0; v < n; ++v) {
    if (level.fine_to_coarse[v] >= 0) continue;
    const auto id = static_cast<VertexId>(coarse_weights.size());
    level.fine_to_coarse[v] = id;
    Weight weight = g.vertex_weight(v);
    if (mate[v] != v) {
      level.fine_to_coarse[mate[v]] = id;
      weight += g.vertex_weight(mate[v]);
    }
    coarse_weights.push_back(weight);
  }
  std::vector<WeightedEdge> coarse_edges;
  for (const WeightedEdge& e : g.edges()) {
    const VertexId cu = level.fine_to_coarse[e.u];
    const VertexId cv = level.fine_to_coarse[e.v];
    if (cu == cv) {
      level.collapsed_edge_weight += e.weight;
    } else {
      coarse_edges.push_back({cu, cv, e.weight});
    }
  }
  const size_t coarse_n = coarse_weights.size();
  level.graph = WeightedGraph::from_edges(coarse_n, coarse_edges, std::move(coarse_weights));
  return level;
}

}  // namespace

std::vector<CoarseningLevel> coarsen(const WeightedGraph& graph, uint64_t seed,
                                     size_t target_vertices) {
  std::vector<CoarseningLevel> levels;
  // Coarse vertices heavier than this would make balanced splits hard to reach.
  const Weight cap = std::max<Weight>(
      2, static_cast<Weight>(std::ceil(1.5 * static_cast<double>(graph.total_vertex_weight()) /
                                       static_cast<double>(std::max<size_t>(target_vertices, 1)))));
  const WeightedGraph* current = &graph;
  for (uint64_t round = 0;; ++round) {
    const size_t fine = current->num_vertices();
    if (fine < 2 || current->num_edges() == 0) break;
    Rng rng(derive_seed(seed, round + 1));
    CoarseningLevel level = match_and_contract(*current, rng, cap);
    const size_t coarse = level.graph.num_vertices();
    if (coarse == fine) break;
    levels.push_back(std::move(level));
    current = &levels.back().graph;
    const double shrink = 1.0 - static_cast<double>(coarse) / static_cast<double>(fine);
    if (coarse <= target_vertices || shrink < 0.10) break;
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Initial partition

namespace {

constexpr size_t kGrowthTrials = 16;

// One greedy growth per start vertex; only balanced results are kept.
std::vector<Partition> grow_candidates(const WeightedGraph& graph, double eps, uint64_t seed) {
  const auto n = static_cast<VertexId>(graph.num_vertices());
  const Weight total = graph.total_vertex_weight();
  const BalanceWindow window = BalanceWindow::make(total, eps);
  if (n < 2) throw Error(Errc::kInfeasibleBalance, "fewer than two vertices");
  const Weight heaviest =
      *std::max_element(graph.vertex_weights().begin(), graph.vertex_weights().end());
  if (heaviest > window.hi) {
    throw Error(Errc::kInfeasibleBalance, "a single vertex outweighs the balance window");
  }
  const Weight target = std::max(window.lo, total / 2);

  std::vector<VertexId> starts(n);
  std::iota(starts.begin(), starts.end(), 0);
  Rng rng(derive_seed(seed, 1000));
  rng.shuffle(std::span<VertexId>(starts));
  starts.resize(std::min<size_t>(kGrowthTrials, starts.size()));

  std::vector<Partition> out;
  std::vector<Side> side(n);
  std::vector<Weight> attached(n);
  for (VertexId start : starts) {
    std::fill(side.begin(), side.end(), Side::kY);
    std::fill(attached.begin(), attached.end(), 0);
    // Ordered by (-attached weight, vertex) so begin() is the greedy choice.
    std::set<std::pair<Weight, VertexId>> frontier;
    Weight x_weight = 0;
    size_t x_count = 0;

    auto absorb = [&](VertexId v) {
      frontier.erase({-attached[v], v});
      side[v] = Side::kX;
      x_weight += graph.vertex_weight(v);
      ++x_count;
      auto adj = graph.neighbors(v);
      auto w = graph.edge_weights(v);
      for (size_t i = 0; i < adj.size(); ++i) {
        const VertexId u = adj[i];
        if (side[u] == Side::kX) continue;
        if (attached[u] > 0) frontier.erase({-attached[u], u});
        attached[u] += w[i];
        frontier.insert({-attached[u], u});
      }
    };

    absorb(start);
    while (x_weight < target) {
      VertexId next = -1;
      for (const auto& [neg_attached, v] : frontier) {
        if (x_weight + graph.vertex_weight(v) <= window.hi) {
          next = v;
          break;
        }
      }
      if (next < 0) {
        // Frontier exhausted or too heavy: jump to the smallest free vertex.
        for (VertexId v = 0; v < n; ++v) {
          if (side[v] == Side::kY && x_weight + graph.vertex_weight(v) <= window.hi) {
            next = v;
            break;
          }
        }
      }
      if (next < 0) break;
      absorb(next);
    }
    if (!window.contains(x_weight) || x_count == static_cast<size_t>(n)) continue;
    out.push_back(make_partition(graph, side, seed));
  }
  if (out.empty()) {
    throw Error(Errc::kInfeasibleBalance, "no greedy growth reached the balance window");
  }
  return out;
}

}  // namespace

Partition initial_bipartition(const WeightedGraph& graph, double eps, uint64_t seed) {
  std::vector<Partition> candidates = grow_candidates(graph, eps, seed);
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const Partition& a, const Partition& b) {
                                 return a.cut_weight < b.cut_weight;
                               });
  return std::move(*best);
}

// ---------------------------------------------------------------------------
// FM refinement

namespace {

class FmPass {
 public:
  FmPass(const WeightedGraph& g, std::vector<Side>& side, const BalanceWindow& window,
         Weight slack)
      : g_(g),
        side_(side),
        window_(window),
        relaxed_lo_(window.lo - slack),
        relaxed_hi_(window.hi + slack),
        n_(static_cast<VertexId>(g.num_vertices())),
        external_(n_, 0),
        locked_(n_, false) {
    for (VertexId v = 0; v < n_; ++v) {
      auto adj = g_.neighbors(v);
      auto w = g_.edge_weights(v);
      for (size_t i = 0; i < adj.size(); ++i) {
        if (side_[adj[i]] != side_[v]) external_[v] += w[i];
      }
      if (external_[v] > 0) queue(v).insert(key(v));
    }
    x_weight_ = side_weight(g_, side_, Side::kX);
    cut_ = 0;
    for (VertexId v = 0; v < n_; ++v) cut_ += external_[v];
    cut_ /= 2;
  }

  Weight cut() const { return cut_; }
  Weight x_weight() const { return x_weight_; }

  // Runs one pass; leaves `side` at the best in-window prefix.
  void run() {
    using Score = std::tuple<Weight, Weight>;  // (balance violation, cut)
    Score best{window_.violation(x_weight_), cut_};
    size_t best_prefix = 0;
    std::vector<VertexId> moves;
    const size_t patience = std::max<size_t>(50, static_cast<size_t>(n_) / 10);

    while (true) {
      const VertexId v = pick();
      if (v < 0) break;
      move(v);
      moves.push_back(v);
      Score score{window_.violation(x_weight_), cut_};
      if (score < best) {
        best = score;
        best_prefix = moves.size();
      } else if (moves.size() - best_prefix > patience) {
        break;
      }
    }
    for (size_t i = moves.size(); i > best_prefix; --i) {
      const VertexId v = moves[i - 1];
      side_[v] = opposite(side_[v]);
      x_weight_ += side_[v] == Side::kX ? g_.vertex_weight(v) : -g_.vertex_weight(v);
    }
    cut_ = std::get<1>(best);
    improved_ = best_prefix > 0;
  }

  bool improved() const { return improved_; }

 private:
  using Key = std::pair<Weight, VertexId>;  // (-gain, vertex)

  Weight gain(VertexId v) const { return 2 * external_[v] - g_.weighted_degree(v); }
  Key key(VertexId v) const { return {-gain(v), v}; }
  std::set<Key>& queue(VertexId v) { return side_[v] == Side::kX ? from_x_ : from_y_; }

  bool feasible(VertexId v) const {
    const Weight w = g_.vertex_weight(v);
    const Weight next = side_[v] == Side::kX ? x_weight_ - w : x_weight_ + w;
    if (next < relaxed_lo_ || next > relaxed_hi_) return false;
    // Never empty a side.
    const Weight total = g_.total_vertex_weight();
    return next > 0 && next < total;
  }

  VertexId first_feasible(const std::set<Key>& q) const {
    for (const Key& k : q) {
      if (feasible(k.second)) return k.second;
    }
    return -1;
  }

  VertexId pick() const {
    const VertexId a = first_feasible(from_x_);
    const VertexId b = first_feasible(from_y_);
    if (a < 0) return b;
    if (b < 0) return a;
    return key(a) < key(b) ? a : b;
  }

  void move(VertexId v) {
    queue(v).erase(key(v));
    locked_[v] = true;
    cut_ -= gain(v);
    x_weight_ += side_[v] == Side::kX ? -g_.vertex_weight(v) : g_.vertex_weight(v);
    const Side to = opposite(side_[v]);
    side_[v] = to;
    external_[v] = g_.weighted_degree(v) - external_[v];
    auto adj = g_.neighbors(v);
    auto w = g_.edge_weights(v);
    for (size_t i = 0; i < adj.size(); ++i) {
      const VertexId u = adj[i];
      if (locked_[u]) {
        external_[u] += side_[u] == to ? -w[i] : w[i];
        continue;
      }
      if (external_[u] > 0) queue(u).erase(key(u));
      external_[u] += side_[u] == to ? -w[i] : w[i];
      if (external_[u] > 0) queue(u).insert(key(u));
    }
  }

  const WeightedGraph& g_;
  std::vector<Side>& side_;
  BalanceWindow window_;
  Weight relaxed_lo_;
  Weight relaxed_hi_;
  VertexId n_;
  std::vector<Weight> external_;
  std::vector<bool> locked_;
  std::set<Key> from_x_;
  std::set<Key> from_y_;
  Weight x_weight_ = 0;
  Weight cut_ = 0;
  bool improved_ = false;
};

}  // namespace

Partition fm_refine(const WeightedGraph& graph, Partition p, double eps, int max_passes,
                    FmTrace* trace) {
  if (p.side.size() != graph.num_vertices()) {
    throw Error(Errc::kDimensionMismatch, "partition size != vertex count");
  }
  const BalanceWindow window = BalanceWindow::make(graph.total_vertex_weight(), eps);
  const Weight slack =
      graph.num_vertices() == 0
          ? 0
          : *std::max_element(graph.vertex_weights().begin(), graph.vertex_weights().end());
  const Weight input_cut = cut_weight(graph, p.side);
  const bool input_balanced =
      window.contains(side_weight(graph, p.side, Side::kX));
  if (trace != nullptr) {
    trace->input_cut = input_cut;
    trace->input_balanced = input_balanced;
    trace->pass_cuts.clear();
  }
  Weight previous = input_cut;
  for (int pass = 0; pass < max_passes; ++pass) {
    FmPass fm(graph, p.side, window, slack);
    fm.run();
    if (trace != nullptr) trace->pass_cuts.push_back(fm.cut());
    if (input_balanced && fm.cut() > previous) {
      throw Error(Errc::kSolverFailure, "FM pass increased the cut");
    }
    previous = fm.cut();
    if (!fm.improved()) break;
  }
  return make_partition(graph, std::move(p.side), p.seed);
}

// ---------------------------------------------------------------------------
// Multilevel driver

Partition bipartition(const WeightedGraph& graph, double eps, uint64_t seed,
                      BipartitionTrace* trace) {
  check_eps(eps);
  if (graph.num_vertices() < 2) {
    throw Error(Errc::kInfeasibleBalance, "bipartition needs at least two vertices");
  }
  // Graphs already at the coarsest size are partitioned directly.
  constexpr size_t kCoarsest = 40;
  std::vector<CoarseningLevel> levels;
  if (graph.num_vertices() > kCoarsest) levels = coarsen(graph, seed, kCoarsest);
  auto level_graph = [&](size_t i) -> const WeightedGraph& {
    return i == 0 ? graph : levels[i - 1].graph;
  };

  // Walk up from the coarsest level until an initial partition is feasible;
  // unit-weight finest levels always are.
  size_t start = levels.size();
  std::vector<Partition> candidates;
  for (;; --start) {
    try {
      candidates = grow_candidates(level_graph(start), eps, seed);
      break;
    } catch (const Error& e) {
      if (e.code() != Errc::kInfeasibleBalance || start == 0) throw;
    }
  }
  if (trace != nullptr) {
    trace->levels = levels.size();
    trace->initial_level = start;
    trace->refinements.clear();
  }

  // Every grown candidate is refined; the best survives to the finer levels.
  std::optional<Partition> current;
  for (Partition& candidate : candidates) {
    FmTrace fm_trace;
    Partition refined = fm_refine(level_graph(start), std::move(candidate), eps, 10, &fm_trace);
    if (trace != nullptr) trace->refinements.push_back(std::move(fm_trace));
    if (!current || refined.cut_weight < current->cut_weight) current = std::move(refined);
  }

  // Project to each finer level and refine there.
  for (size_t level = start; level > 0; --level) {
    const std::vector<VertexId>& to_coarse = levels[level - 1].fine_to_coarse;
    std::vector<Side> finer(to_coarse.size());
    for (size_t v = 0; v < finer.size(); ++v) finer[v] = current->side[to_coarse[v]];
    FmTrace fm_trace;
    current = fm_refine(level_graph(level - 1),
                        make_partition(level_graph(level - 1), std::move(finer), seed), eps, 10,
                        &fm_trace);
    if (trace != nullptr) trace->refinements.push_back(std::move(fm_trace));
  }

  Partition result = *std::move(current);
  if (result.side[0] == Side::kY) result = swap_sides(result);
  result.seed = seed;
  return result;
}

}  // namespace polar
