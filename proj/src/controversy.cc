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

#include "polar/controversy.h"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "polar/error.h"
#include "polar/random.h"

namespace polar {

AuthoritySet select_authorities(const RetweetGraph& graph, const Partition& p, Side side,
                                size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be at least 1");
  if (p.side.size() != graph.num_vertices()) {
    throw Error(Errc::kDimensionMismatch, "partition size != vertex count");
  }
  AuthoritySet set{side, {}};
  for (size_t v = 0; v < p.side.size(); ++v) {
    if (p.side[v] == side) set.vertices.push_back(static_cast<VertexId>(v));
  }
  if (set.vertices.empty()) {
    throw Error(Errc::kEmptySide, std::string("side ") + side_letter(side) + " is empty");
  }
  const size_t take = std::min(k, set.vertices.size());
  std::partial_sort(set.vertices.begin(), set.vertices.begin() + take, set.vertices.end(),
                    [&](VertexId a, VertexId b) {
                      if (graph.endorsements[a] != graph.endorsements[b]) {
                        return graph.endorsements[a] > graph.endorsements[b];
                      }
                      return a < b;
                    });
  set.vertices.resize(take);
  return set;
}

RwcValue compute_rwc(double p_xx, double p_xy, double p_yx, double p_yy) {
  for (double v : {p_xx, p_xy, p_yx, p_yy}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(Errc::kDomainError, "absorption probability outside [0, 1]");
    }
  }
  RwcValue value;
  value.raw = p_xx * p_yy - p_yx * p_xy;
  value.display = std::max(0.0, value.raw);
  return value;
}

std::string_view method_name(ScoreMethod method) {
  return method == ScoreMethod::kExact ? "exact" : "montecarlo";
}

namespace {

constexpr int8_t kTransient = -1;

// Absorbing structure shared by both estimators.
struct Chain {
  // Side index (0 = X, 1 = Y) of the authority a vertex is, or kTransient.
  std::vector<int8_t> absorbing;
  // Transient start vertices of each side.
  std::array<std::vector<VertexId>, 2> starts;
  size_t authorities_x = 0;
  size_t authorities_y = 0;
};

Chain build_chain(const RetweetGraph& graph, const Partition& p, size_t k) {
  if (p.side.size() != graph.num_vertices()) {
    throw Error(Errc::kDimensionMismatch, "partition size != vertex count");
  }
  if (connected_components(graph).sizes.size() != 1) {
    throw Error(Errc::kDisconnected, "random-walk measure needs a connected graph");
  }
  Chain chain;
  chain.absorbing.assign(graph.num_vertices(), kTransient);
  for (Side side : {Side::kX, Side::kY}) {
    AuthoritySet set = select_authorities(graph, p, side, k);
    for (VertexId v : set.vertices) chain.absorbing[v] = static_cast<int8_t>(side);
    (side == Side::kX ? chain.authorities_x : chain.authorities_y) = set.vertices.size();
  }
  for (size_t v = 0; v < graph.num_vertices(); ++v) {
    if (chain.absorbing[v] == kTransient) {
      chain.starts[static_cast<size_t>(p.side[v])].push_back(static_cast<VertexId>(v));
    }
  }
  for (Side side : {Side::kX, Side::kY}) {
    if (chain.starts[static_cast<size_t>(side)].empty()) {
      throw Error(Errc::kNoTransientStart,
                  std::string("side ") + side_letter(side) + " consists only of authorities");
    }
  }
  return chain;
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

void fill_rwc(RwcScore& score) {
  RwcValue value = compute_rwc(score.p_xx, score.p_xy, score.p_yx, score.p_yy);
  score.rwc_raw = value.raw;
  score.display_score = value.display;
}

}  // namespace

RwcScore rwc_exact(const RetweetGraph& graph, const Partition& p, size_t k,
                   ExactDiagnostics* diagnostics) {
  const Chain chain = build_chain(graph, p, k);
  const WeightedGraph& g = graph.undirected;
  const size_t n = g.num_vertices();

  std::vector<Eigen::Index> slot(n, -1);
  std::vector<VertexId> transient;
  for (size_t v = 0; v < n; ++v) {
    if (chain.absorbing[v] == kTransient) {
      slot[v] = static_cast<Eigen::Index>(transient.size());
      transient.push_back(static_cast<VertexId>(v));
    }
  }
  const auto t = static_cast<Eigen::Index>(transient.size());

  // (I - Q) B = R scaled row-wise by the weighted degree: the resulting
  // matrix D_T - W_TT is symmetric positive definite on a connected graph.
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(t, 2);
  for (Eigen::Index i = 0; i < t; ++i) {
    const VertexId v = transient[i];
    triplets.emplace_back(i, i, static_cast<double>(g.weighted_degree(v)));
    auto adj = g.neighbors(v);
    auto w = g.edge_weights(v);
    for (size_t j = 0; j < adj.size(); ++j) {
      if (chain.absorbing[adj[j]] == kTransient) {
        triplets.emplace_back(i, slot[adj[j]], -static_cast<double>(w[j]));
      } else {
        rhs(i, chain.absorbing[adj[j]]) += static_cast<double>(w[j]);
      }
    }
  }
  Eigen::SparseMatrix<double> system(t, t);
  system.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::kSolverFailure, "factorization of the absorbing system failed");
  }
  Eigen::MatrixXd absorbed = solver.solve(rhs);

  // Residual of the unscaled system (I - Q)B - R, refined if needed.
  auto residual = [&](const Eigen::MatrixXd& b) {
    Eigen::MatrixXd r = system * b - rhs;
    double worst = 0.0;
    for (Eigen::Index i = 0; i < t; ++i) {
      const double d = static_cast<double>(g.weighted_degree(transient[i]));
      worst = std::max(worst, r.row(i).cwiseAbs().maxCoeff() / d);
    }
    return std::pair{worst, r};
  };
  auto [worst, r] = residual(absorbed);
  for (int round = 0; round < 5 && worst > 1e-12; ++round) {
    absorbed -= solver.solve(r);
    std::tie(worst, r) = residual(absorbed);
  }
  if (!(worst <= 1e-10)) {
    throw Error(Errc::kSolverFailure, "absorbing system residual above 1e-10");
  }

  RwcScore score;
  score.k = k;
  score.authorities_x = chain.authorities_x;
  score.authorities_y = chain.authorities_y;
  score.method = ScoreMethod::kExact;
  double sums[2][2] = {{0, 0}, {0, 0}};  // [start side][absorbing side]
  for (int start = 0; start < 2; ++start) {
    for (VertexId v : chain.starts[start]) {
      sums[start][0] += absorbed(slot[v], 0);
      sums[start][1] += absorbed(slot[v], 1);
    }
  }
  const double nx = static_cast<double>(chain.starts[0].size());
  const double ny = static_cast<double>(chain.starts[1].size());
  score.p_xx = clamp01(sums[0][0] / nx);
  score.p_yx = clamp01(sums[0][1] / nx);
  score.p_xy = clamp01(sums[1][0] / ny);
  score.p_yy = clamp01(sums[1][1] / ny);
  fill_rwc(score);

  if (diagnostics != nullptr) {
    diagnostics->transient = transient.size();
    diagnostics->residual = worst;
    diagnostics->max_row_sum_error = 0.0;
    diagnostics->max_absorption_sum_error = 0.0;
    diagnostics->absorbed_at_x.assign(n, 0.0);
    for (size_t v = 0; v < n; ++v) {
      if (chain.absorbing[v] != kTransient) {
        diagnostics->absorbed_at_x[v] = chain.absorbing[v] == 0 ? 1.0 : 0.0;
        continue;
      }
      const double d = static_cast<double>(g.weighted_degree(static_cast<VertexId>(v)));
      double row = 0.0;
      for (Weight w : g.edge_weights(static_cast<VertexId>(v))) {
        row += static_cast<double>(w) / d;
      }
      diagnostics->max_row_sum_error =
          std::max(diagnostics->max_row_sum_error, std::abs(row - 1.0));
      const double bx = absorbed(slot[v], 0);
      diagnostics->absorbed_at_x[v] = bx;
      diagnostics->max_absorption_sum_error = std::max(
          diagnostics->max_absorption_sum_error, std::abs(bx + absorbed(slot[v], 1) - 1.0));
    }
  }
  return score;
}

namespace {

// Walk-level sampler over cumulative edge weights.
class Walker {
 public:
  Walker(const WeightedGraph& g, const std::vector<int8_t>& absorbing)
      : g_(g), absorbing_(absorbing), cumulative_(g.num_vertices()) {
    for (VertexId v = 0; v < static_cast<VertexId>(g.num_vertices()); ++v) {
      auto w = g.edge_weights(v);
      cumulative_[v].resize(w.size());
      std::partial_sum(w.begin(), w.end(), cumulative_[v].begin());
    }
  }

  // Absorbing side reached from `start`, or -1 when max_steps was exceeded.
  int walk(VertexId start, SplitMix64& rng, uint64_t max_steps) const {
    VertexId v = start;
    for (uint64_t step = 0; step < max_steps; ++step) {
      const auto& cum = cumulative_[v];
      const auto pick = static_cast<Weight>(rng.uniform_index(static_cast<uint64_t>(cum.back())));
      const size_t i = std::upper_bound(cum.begin(), cum.end(), pick) - cum.begin();
      v = g_.neighbors(v)[i];
      if (absorbing_[v] != kTransient) return absorbing_[v];
    }
    return -1;
  }

 private:
  const WeightedGraph& g_;
  const std::vector<int8_t>& absorbing_;
  std::vector<std::vector<Weight>> cumulative_;
};

struct WalkTally {
  uint64_t absorbed[2] = {0, 0};
  uint64_t discarded = 0;
};

}  // namespace

RwcScore rwc_montecarlo(const RetweetGraph& graph, const Partition& p, size_t k,
                        const MonteCarloOptions& options) {
  if (options.walks == 0) throw Error(Errc::kZeroWalks, "walks must be at least 1");
  if (options.max_steps == 0) throw Error(Errc::kInvalidArgument, "max_steps must be positive");
  const Chain chain = build_chain(graph, p, k);
  const Walker walker(graph.undirected, chain.absorbing);

  unsigned threads = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<uint64_t>(threads, options.walks));
  const uint64_t redraw_limit = 1000;

  // Walk i of side s, attempt a, draws from its own stream, so tallies do not
  // depend on how walks are split across threads.
  auto run_range = [&](int side, uint64_t begin, uint64_t end, WalkTally& tally) {
    const auto& starts = chain.starts[side];
    const uint64_t side_seed = derive_seed(options.seed, static_cast<uint64_t>(side));
    for (uint64_t i = begin; i < end; ++i) {
      const uint64_t walk_seed = derive_seed(side_seed, i);
      for (uint64_t attempt = 0;; ++attempt) {
        if (attempt > redraw_limit) {
          throw Error(Errc::kSolverFailure, "random walks repeatedly exceeded max_steps");
        }
        SplitMix64 rng(derive_seed(walk_seed, attempt));
        const VertexId start = starts[rng.uniform_index(starts.size())];
        const int absorbed = walker.walk(start, rng, options.max_steps);
        if (absorbed >= 0) {
          ++tally.absorbed[absorbed];
          break;
        }
        ++tally.discarded;
      }
    }
  };

  WalkTally totals[2];
  for (int side = 0; side < 2; ++side) {
    std::vector<WalkTally> tallies(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    const uint64_t chunk = (options.walks + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const uint64_t begin = std::min(options.walks, t * chunk);
      const uint64_t end = std::min(options.walks, begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          run_range(side, begin, end, tallies[t]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    for (const WalkTally& tally : tallies) {
      totals[side].absorbed[0] += tally.absorbed[0];
      totals[side].absorbed[1] += tally.absorbed[1];
      totals[side].discarded += tally.discarded;
    }
  }

  const auto walks = static_cast<double>(options.walks);
  RwcScore score;
  score.k = k;
  score.authorities_x = chain.authorities_x;
  score.authorities_y = chain.authorities_y;
  score.method = ScoreMethod::kMonteCarlo;
  score.walks = options.walks;
  score.discarded_walks = totals[0].discarded + totals[1].discarded;
  score.p_xx = static_cast<double>(totals[0].absorbed[0]) / walks;
  score.p_yx = static_cast<double>(totals[0].absorbed[1]) / walks;
  score.p_xy = static_cast<double>(totals[1].absorbed[0]) / walks;
  score.p_yy = static_cast<double>(totals[1].absorbed[1]) / walks;
  fill_rwc(score);
  // With p_yx = 1 - p_xx and p_xy = 1 - p_yy the measure is p_xx + p_yy - 1,
  // so the first-order error is the two binomial errors in quadrature.
  score.stderr_estimate = std::sqrt(score.p_xx * (1.0 - score.p_xx) / walks +
                                    score.p_yy * (1.0 - score.p_yy) / walks);
  return score;
}

ScoredTopic score_topic(const RetweetGraph& graph, const ScoreOptions& options) {
  ScoredTopic result;
  result.partition = bipartition(graph.undirected, options.balance_eps, options.seed);
  const bool exact =
      options.mode == ScoreMode::kExact ||
      (options.mode == ScoreMode::kAuto && graph.num_vertices() <= options.exact_limit);
  if (exact) {
    result.score = rwc_exact(graph, result.partition, options.authorities_k);
  } else {
    MonteCarloOptions mc;
    mc.walks = options.walks;
    mc.seed = options.seed;
    result.score = rwc_montecarlo(graph, result.partition, options.authorities_k, mc);
  }
  return result;
}

}  // namespace polar
