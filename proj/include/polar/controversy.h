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

#ifndef POLAR_CONTROVERSY_H_
#define POLAR_CONTROVERSY_H_

#include <cstdint>
#include <string_view>
#include <vector>

#include "polar/graph.h"
#include "polar/partition.h"

namespace polar {

// The k most-endorsed vertices of one side, ordered by (endorsements desc,
// vertex asc).
struct AuthoritySet {
  Side side = Side::kX;
  std::vector<VertexId> vertices;
};

// Throws Error(kEmptySide) when `side` has no vertex, kInvalidArgument for k == 0.
AuthoritySet select_authorities(const RetweetGraph& graph, const Partition& p, Side side,
                                size_t k);

struct RwcValue {
  double raw = 0.0;      // p_xx * p_yy - p_yx * p_xy, in [-1, 1]
  double display = 0.0;  // max(0, raw)
};

// Throws Error(kDomainError) for inputs outside [0, 1].
RwcValue compute_rwc(double p_xx, double p_xy, double p_yx, double p_yy);

enum class ScoreMethod { kExact, kMonteCarlo };

std::string_view method_name(ScoreMethod method);

// p_ab is the probability that a walk started on side b ends at an authority
// of side a.
struct RwcScore {
  double p_xx = 0.0;
  double p_xy = 0.0;
  double p_yx = 0.0;
  double p_yy = 0.0;
  double rwc_raw = 0.0;
  double display_score = 0.0;
  size_t k = 0;              // requested authorities per side
  size_t authorities_x = 0;  // min(k, |X|)
  size_t authorities_y = 0;  // min(k, |Y|)
  ScoreMethod method = ScoreMethod::kExact;
  uint64_t walks = 0;            // per side, Monte Carlo only
  uint64_t discarded_walks = 0;  // walks that hit max_steps and were redrawn
  double stderr_estimate = 0.0;  // Monte Carlo only

  friend bool operator==(const RwcScore&, const RwcScore&) = default;
};

struct ExactDiagnostics {
  size_t transient = 0;
  double residual = 0.0;                   // max |(I - Q)B - R|
  double max_row_sum_error = 0.0;          // transition rows of transient vertices
  double max_absorption_sum_error = 0.0;   // rows of B
  // Absorption probability at X's authorities, per vertex (1 or 0 for
  // authorities themselves).
  std::vector<double> absorbed_at_x;
};

// Absorbing-chain solution on the undirected weighted graph with both sides'
// authorities absorbing. Throws kDisconnected, kNoTransientStart, kEmptySide.
RwcScore rwc_exact(const RetweetGraph& graph, const Partition& p, size_t k,
                   ExactDiagnostics* diagnostics = nullptr);

struct MonteCarloOptions {
  uint64_t walks = 10000;  // per side
  uint64_t seed = 42;
  uint64_t max_steps = 100000;
  unsigned threads = 0;    // 0: hardware concurrency; results do not depend on it
};

// Throws kZeroWalks plus the errors of rwc_exact.
RwcScore rwc_montecarlo(const RetweetGraph& graph, const Partition& p, size_t k,
                        const MonteCarloOptions& options = {});

enum class ScoreMode { kAuto, kExact, kMonteCarlo };

struct ScoreOptions {
  double balance_eps = 0.05;
  size_t authorities_k = 10;
  uint64_t seed = 42;
  ScoreMode mode = ScoreMode::kAuto;  // exact up to exact_limit vertices
  uint64_t walks = 10000;
  size_t exact_limit = 20000;
};

struct ScoredTopic {
  Partition partition;
  RwcScore score;
};

// bipartition followed by the exact or Monte Carlo measure.
ScoredTopic score_topic(const RetweetGraph& graph, const ScoreOptions& options = {});

}  // namespace polar

#endif  // POLAR_CONTROVERSY_H_
