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

#ifndef POLAR_LAYOUT_H_
#define POLAR_LAYOUT_H_

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "polar/graph.h"
#include "polar/partition.h"

namespace polar {

enum class Repulsion {
  kExact,      // all pairs, O(V^2) per iteration
  kBarnesHut,  // quadtree approximation
};

struct LayoutParams {
  double repulsion = 10.0;        // k_r
  double gravity = 1.0;           // k_g; 0 disables gravity
  int iterations = 600;
  double initial_speed = 1.0;
  double max_displacement = 10.0;
  uint64_t seed = 42;
  Repulsion repulsion_mode = Repulsion::kExact;
  double theta = 1.2;             // Barnes-Hut opening criterion
  unsigned threads = 1;           // positions do not depend on this

  friend bool operator==(const LayoutParams&, const LayoutParams&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

struct Layout {
  std::vector<Point> positions;
  bool converged = false;
  double final_mean_displacement = 0.0;
  int iterations_run = 0;
  std::vector<double> mean_displacement;  // per iteration
};

// ForceAtlas2 with mass deg(v) + 1 (unweighted degree): attraction w * d
// along edges, repulsion k_r m_u m_v / d between all pairs, gravity k_g m_v
// toward the origin, and swing-damped adaptive speed. Stops after
// `iterations` steps or once the mean displacement drops to 1e-3 of the
// layout radius. The graph is the only input besides the parameters.
Layout layout_forceatlas2(const WeightedGraph& graph, const LayoutParams& params = {});

// Node-link document for rendering: nodes carry {id, user, x, y, side,
// endorsements}, links the undirected weights. Coordinates are scaled
// uniformly into [-1, 1]^2. Throws Error(kDimensionMismatch).
nlohmann::json render_payload(const RetweetGraph& graph, const Partition& p,
                              const Layout& layout);

}  // namespace polar

#endif  // POLAR_LAYOUT_H_
