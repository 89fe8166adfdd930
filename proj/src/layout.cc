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

#include "polar/layout.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <thread>

#include "polar/error.h"
#include "polar/random.h"

namespace polar {

namespace {

void validate(const LayoutParams& params) {
  if (!(params.repulsion > 0) || !(params.gravity >= 0) || params.iterations < 1 ||
      !(params.initial_speed > 0) || !(params.max_displacement > 0) || !(params.theta > 0)) {
    throw Error(Errc::kInvalidArgument, "invalid layout parameters");
  }
}

// Quadtree over point masses for approximate repulsion.
class QuadTree {
 public:
  QuadTree(const std::vector<Point>& pos, const std::vector<double>& mass) : pos_(pos), mass_(mass) {
    double min_x = pos[0].x, max_x = pos[0].x, min_y = pos[0].y, max_y = pos[0].y;
    for (const Point& p : pos) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    const double size = std::max({max_x - min_x, max_y - min_y, 1e-9});
    nodes_.push_back(Node{min_x + size / 2, min_y + size / 2, size});
    for (size_t v = 0; v < pos.size(); ++v) insert(0, static_cast<int32_t>(v), 0);
  }

  Point force(size_t v, double k_r, double theta) const {
    Point f;
    accumulate(0, v, k_r, theta, f);
    return f;
  }

 private:
  struct Node {
    double cx, cy, size;
    double mass = 0.0;
    double mx = 0.0;  // mass-weighted position sums
    double my = 0.0;
    int32_t body = -1;              // single body in a leaf
    int32_t child[4] = {-1, -1, -1, -1};
    bool leaf = true;
  };

  static constexpr int kMaxDepth = 48;

  int quadrant(const Node& node, const Point& p) const {
    return (p.x >= node.cx ? 1 : 0) + (p.y >= node.cy ? 2 : 0);
  }

  int32_t child_of(int32_t at, int q) {
    if (nodes_[at].child[q] < 0) {
      const Node& n = nodes_[at];
      const double h = n.size / 4;
      Node c{n.cx + ((q & 1) ? h : -h), n.cy + ((q & 2) ? h : -h), n.size / 2};
      nodes_.push_back(c);
      nodes_[at].child[q] = static_cast<int32_t>(nodes_.size() - 1);
    }
    return nodes_[at].child[q];
  }

  void insert(int32_t at, int32_t body, int depth) {
    const Point& p = pos_[body];
    const double m = mass_[body];
    nodes_[at].mass += m;
    nodes_[at].mx += m * p.x;
    nodes_[at].my += m * p.y;
    if (nodes_[at].leaf) {
      if (nodes_[at].body < 0 && nodes_[at].mass == m) {
        nodes_[at].body = body;
        return;
      }
      if (depth >= kMaxDepth) return;  // coincident points share the leaf
      const int32_t old = nodes_[at].body;
      nodes_[at].leaf = false;
      nodes_[at].body = -1;
      if (old >= 0) {
        int32_t c = child_of(at, quadrant(nodes_[at], pos_[old]));
        insert(c, old, depth + 1);
      }
    }
    int32_t c = child_of(at, quadrant(nodes_[at], p));
    insert(c, body, depth + 1);
  }

  void accumulate(int32_t at, size_t v, double k_r, double theta, Point& f) const {
    const Node& n = nodes_[at];
    if (n.mass == 0.0) return;
    if (n.leaf && n.body == static_cast<int32_t>(v)) return;
    const Point& p = pos_[v];
    const double gx = n.mx / n.mass, gy = n.my / n.mass;
    const double dx = p.x - gx, dy = p.y - gy;
    const double d2 = dx * dx + dy * dy;
    if (n.leaf || (d2 > 0 && n.size * n.size < theta * theta * d2)) {
      if (d2 <= 0) return;
      const double factor = k_r * mass_[v] * n.mass / d2;
      f.x += dx * factor;
      f.y += dy * factor;
      return;
    }
    for (int32_t c : n.child) {
      if (c >= 0) accumulate(c, v, k_r, theta, f);
    }
  }

  const std::vector<Point>& pos_;
  const std::vector<double>& mass_;
  std::vector<Node> nodes_;
};

template <typename Fn>
void parallel_for(size_t n, unsigned threads, Fn fn) {
  if (threads <= 1 || n < 256) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const size_t begin = std::min(n, t * chunk), end = std::min(n, begin + chunk);
    pool.emplace_back([=, &fn] {
      for (size_t i = begin; i < end; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

Layout layout_forceatlas2(const WeightedGraph& graph, const LayoutParams& params) {
  validate(params);
  const size_t n = graph.num_vertices();
  if (n == 0) throw Error(Errc::kEmptyGraph, "layout needs at least one vertex");

  Layout layout;
  std::vector<Point>& pos = layout.positions;
  pos.resize(n);
  Rng rng(derive_seed(params.seed, 0xfa2));
  if (n > 1) {
    for (Point& p : pos) {
      const double r = std::sqrt(rng.uniform01());
      const double a = 2.0 * std::numbers::pi * rng.uniform01();
      p = {r * std::cos(a), r * std::sin(a)};
    }
  }  // a lone vertex starts at the disk center

  std::vector<double> mass(n);
  for (size_t v = 0; v < n; ++v) {
    mass[v] = static_cast<double>(graph.degree(static_cast<VertexId>(v))) + 1.0;
  }

  std::vector<Point> force(n), previous(n);
  double speed = params.initial_speed;
  double speed_efficiency = 1.0;
  const double jitter_tolerance = 1.0;

  for (int iter = 0; iter < params.iterations; ++iter) {
    std::unique_ptr<QuadTree> tree;
    if (params.repulsion_mode == Repulsion::kBarnesHut) {
      tree = std::make_unique<QuadTree>(pos, mass);
    }
    parallel_for(n, params.threads, [&](size_t v) {
      Point f;
      const Point p = pos[v];
      if (tree) {
        f = tree->force(v, params.repulsion, params.theta);
      } else {
        for (size_t u = 0; u < n; ++u) {
          if (u == v) continue;
          const double dx = p.x - pos[u].x, dy = p.y - pos[u].y;
          const double d2 = dx * dx + dy * dy;
          if (d2 <= 0) continue;
          const double factor = params.repulsion * mass[v] * mass[u] / d2;
          f.x += dx * factor;
          f.y += dy * factor;
        }
      }
      auto adj = graph.neighbors(static_cast<VertexId>(v));
      auto w = graph.edge_weights(static_cast<VertexId>(v));
      for (size_t i = 0; i < adj.size(); ++i) {
        const double ww = static_cast<double>(w[i]);
        f.x += ww * (pos[adj[i]].x - p.x);
        f.y += ww * (pos[adj[i]].y - p.y);
      }
      const double r = std::hypot(p.x, p.y);
      if (params.gravity > 0 && r > 0) {
        const double g = params.gravity * mass[v] / r;
        f.x -= p.x * g;
        f.y -= p.y * g;
      }
      force[v] = f;
    });

    // Global speed from total swinging vs. traction.
    double total_swing = 0.0, total_traction = 0.0;
    std::vector<double> swing(n);
    for (size_t v = 0; v < n; ++v) {
      const double sx = force[v].x - previous[v].x, sy = force[v].y - previous[v].y;
      const double tx = force[v].x + previous[v].x, ty = force[v].y + previous[v].y;
      swing[v] = mass[v] * std::hypot(sx, sy);
      total_swing += swing[v];
      total_traction += 0.5 * mass[v] * std::hypot(tx, ty);
    }
    if (total_swing > 0 && total_traction > 0) {
      const double nn = static_cast<double>(n);
      const double estimated = 0.05 * std::sqrt(nn);
      double jt = jitter_tolerance *
                  std::max(std::sqrt(estimated),
                           std::min(10.0, estimated * total_traction / (nn * nn)));
      if (total_swing / total_traction > 2.0) {
        if (speed_efficiency > 0.05) speed_efficiency *= 0.5;
        jt = std::max(jt, jitter_tolerance);
      }
      const double target = jt * speed_efficiency * total_traction / total_swing;
      if (total_swing > jt * total_traction) {
        if (speed_efficiency > 0.05) speed_efficiency *= 0.7;
      } else if (speed < 1000) {
        speed_efficiency *= 1.3;
      }
      speed += std::min(target - speed, 0.5 * speed);
    }

    double moved = 0.0;
    for (size_t v = 0; v < n; ++v) {
      const double factor = speed / (1.0 + std::sqrt(speed * swing[v]));
      double dx = force[v].x * factor, dy = force[v].y * factor;
      const double d = std::hypot(dx, dy);
      if (d > params.max_displacement) {
        dx *= params.max_displacement / d;
        dy *= params.max_displacement / d;
      }
      pos[v].x += dx;
      pos[v].y += dy;
      moved += std::min(d, params.max_displacement);
    }
    std::swap(previous, force);

    const double mean = moved / static_cast<double>(n);
    layout.mean_displacement.push_back(mean);
    layout.final_mean_displacement = mean;
    layout.iterations_run = iter + 1;

    Point centroid;
    for (const Point& p : pos) {
      centroid.x += p.x / static_cast<double>(n);
      centroid.y += p.y / static_cast<double>(n);
    }
    double radius = 0.0;
    for (const Point& p : pos) radius = std::max(radius, std::hypot(p.x - centroid.x, p.y - centroid.y));
    if (mean <= 1e-3 * radius) {
      layout.converged = true;
      break;
    }
  }
  return layout;
}

nlohmann::json render_payload(const RetweetGraph& graph, const Partition& p,
                              const Layout& layout) {
  const size_t n = graph.num_vertices();
  if (p.side.size() != n || layout.positions.size() != n) {
    throw Error(Errc::kDimensionMismatch, "partition or layout does not match the graph");
  }
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  if (n > 0) {
    min_x = max_x = layout.positions[0].x;
    min_y = max_y = layout.positions[0].y;
  }
  for (const Point& q : layout.positions) {
    min_x = std::min(min_x, q.x);
    max_x = std::max(max_x, q.x);
    min_y = std::min(min_y, q.y);
    max_y = std::max(max_y, q.y);
  }
  const double cx = (min_x + max_x) / 2, cy = (min_y + max_y) / 2;
  const double half = std::max(max_x - min_x, max_y - min_y) / 2;
  const double scale = half > 0 ? 1.0 / half : 0.0;

  nlohmann::json nodes = nlohmann::json::array();
  for (size_t v = 0; v < n; ++v) {
    const Point& q = layout.positions[v];
    nodes.push_back({{"id", v},
                     {"user", graph.users[v]},
                     {"x", std::clamp((q.x - cx) * scale, -1.0, 1.0)},
                     {"y", std::clamp((q.y - cy) * scale, -1.0, 1.0)},
                     {"side", std::string(1, side_letter(p.side[v]))},
                     {"endorsements", graph.endorsements[v]}});
  }
  nlohmann::json links = nlohmann::json::array();
  for (const WeightedEdge& e : graph.undirected.edges()) {
    links.push_back({{"source", e.u}, {"target", e.v}, {"weight", e.weight}});
  }
  return {{"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

}  // namespace polar
