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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "polar/error.h"
#include "polar/partition.h"
#include "test_util.h"

using namespace polar;
using namespace polar::testing;

namespace {

std::vector<Side> parse_labels(const std::string& s) {
  std::vector<Side> out;
  for (char c : s) out.push_back(c == 'X' ? Side::kX : Side::kY);
  return out;
}

// Recomputes every Partition field from scratch.
void check_against_oracle(const std::vector<Edge>& edges, int n, const Partition& p, double eps) {
  REQUIRE(p.side.size() == static_cast<size_t>(n));
  CHECK(p.cut_weight == recount_cut(edges, p.side));
  const auto x = static_cast<int64_t>(std::count(p.side.begin(), p.side.end(), Side::kX));
  CHECK(balanced(x, n, eps));
  CHECK(p.balance == doctest::Approx(static_cast<double>(x) / n).epsilon(1e-12));
  if (n >= 2) {
    CHECK(x > 0);
    CHECK(x < n);
  }
}

void check_level(const WeightedGraph& fine, const CoarseningLevel& level) {
  const WeightedGraph& coarse = level.graph;
  CHECK(coarse.total_vertex_weight() == fine.total_vertex_weight());
  CHECK(coarse.total_edge_weight() + level.collapsed_edge_weight == fine.total_edge_weight());
  REQUIRE(level.fine_to_coarse.size() == fine.num_vertices());
  std::vector<int> members(coarse.num_vertices(), 0);
  std::vector<Weight> weights(coarse.num_vertices(), 0);
  for (size_t v = 0; v < fine.num_vertices(); ++v) {
    const VertexId c = level.fine_to_coarse[v];
    REQUIRE(c >= 0);
    REQUIRE(static_cast<size_t>(c) < coarse.num_vertices());
    ++members[c];
    weights[c] += fine.vertex_weight(static_cast<VertexId>(v));
  }
  for (size_t c = 0; c < coarse.num_vertices(); ++c) {
    CHECK(members[c] >= 1);
    CHECK(members[c] <= 2);
    CHECK(weights[c] == coarse.vertex_weight(static_cast<VertexId>(c)));
  }
  // matched pairs must have been adjacent
  for (size_t u = 0; u < fine.num_vertices(); ++u) {
    for (size_t v = u + 1; v < fine.num_vertices(); ++v) {
      if (level.fine_to_coarse[u] == level.fine_to_coarse[v]) {
        CHECK(fine.edge_weight(static_cast<VertexId>(u), static_cast<VertexId>(v)) > 0);
      }
    }
  }
}

}  // namespace

TEST_CASE("BalanceWindow") {
  CHECK(BalanceWindow::make(20, 0.05).lo == 9);
  CHECK(BalanceWindow::make(20, 0.05).hi == 11);
  CHECK(BalanceWindow::make(100, 0.05).lo == 45);
  CHECK(BalanceWindow::make(100, 0.05).hi == 55);
  CHECK(BalanceWindow::make(11, 0.05).lo == 5);
  CHECK(BalanceWindow::make(11, 0.05).hi == 6);
  // 7 vertices, eps 0: no integer equals 3.5, nearest split used
  CHECK(BalanceWindow::make(7, 0.0).lo == 3);
  CHECK(BalanceWindow::make(7, 0.0).hi == 4);
  CHECK(error_code([] { BalanceWindow::make(10, 0.5); }) == Errc::kInvalidArgument);
  CHECK(error_code([] { BalanceWindow::make(10, -0.1); }) == Errc::kInvalidArgument);
  for (int64_t total = 1; total <= 60; ++total) {
    for (double eps : {0.0, 0.01, 0.05, 0.13, 0.25, 0.49}) {
      const BalanceWindow w = BalanceWindow::make(total, eps);
      for (int64_t x = 0; x <= total; ++x) CHECK(w.contains(x) == balanced(x, total, eps));
    }
  }
}

TEST_CASE("make_partition and check_partition") {
  auto edges = barbell_edges(3, 2);
  WeightedGraph g = weighted(6, edges);
  Partition p = make_partition(g, parse_labels("XXXYYY"), 9);
  CHECK(p.cut_weight == 2);
  CHECK(p.balance == 0.5);
  CHECK(p.seed == 9);
  CHECK(p.labels() == "XXXYYY");
  CHECK_FALSE(check_partition(g, p, 0.05));
  CHECK(swap_sides(p).labels() == "YYYXXX");
  CHECK(swap_sides(p).cut_weight == 2);

  Partition stale = p;
  stale.cut_weight = 1;
  CHECK(check_partition(g, stale, 0.05));
  CHECK(check_partition(g, make_partition(g, parse_labels("XXXXXY"), 0), 0.05));
  CHECK(check_partition(g, make_partition(g, parse_labels("XXXXXX"), 0), 0.49));
  CHECK(error_code([&] { make_partition(g, parse_labels("XY"), 0); }) ==
        Errc::kDimensionMismatch);
}

TEST_CASE("coarsen examples") {
  SUBCASE("single edge collapses to one vertex") {
    WeightedGraph g = weighted(2, {{0, 1, 1}});
    auto levels = coarsen(g, 1);
    REQUIRE(levels.size() == 1);
    CHECK(levels[0].graph.num_vertices() == 1);
    CHECK(levels[0].graph.total_vertex_weight() == 2);
    CHECK(levels[0].collapsed_edge_weight == 1);
    check_level(g, levels[0]);
  }
  SUBCASE("heavy pairs are matched before a light bridge") {
    WeightedGraph g = weighted(4, {{0, 1, 5}, {2, 3, 5}, {1, 2, 1}});
    for (uint64_t seed = 0; seed < 20; ++seed) {
      auto levels = coarsen(g, seed);
      REQUIRE_FALSE(levels.empty());
      const auto& map = levels[0].fine_to_coarse;
      CHECK(map[0] == map[1]);
      CHECK(map[2] == map[3]);
      CHECK(map[1] != map[2]);
      CHECK(levels[0].graph.total_edge_weight() == 1);
    }
  }
  SUBCASE("100-vertex path shrinks strictly per level") {
    std::vector<Edge> path;
    for (int v = 0; v + 1 < 100; ++v) path.push_back({v, v + 1, 1});
    WeightedGraph g = weighted(100, path);
    auto levels = coarsen(g, 42);
    REQUIRE(levels.size() >= 2);
    size_t previous = g.num_vertices();
    const WeightedGraph* fine = &g;
    for (const auto& level : levels) {
      CHECK(level.graph.num_vertices() < previous);
      previous = level.graph.num_vertices();
      check_level(*fine, level);
      fine = &level.graph;
    }
    CHECK(levels.back().graph.num_vertices() <= 40);
  }
  SUBCASE("edgeless graph produces no levels") {
    CHECK(coarsen(weighted(5, {}), 1).empty());
  }
}

TEST_CASE("coarsen level invariants on random graphs") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 10 + static_cast<int>(seed * 13 % 200);
    auto edges = random_connected_edges(n, 4.0 / n, 5, seed);
    WeightedGraph g = weighted(n, edges);
    auto levels = coarsen(g, seed);
    const WeightedGraph* fine = &g;
    for (const auto& level : levels) {
      check_level(*fine, level);
      fine = &level.graph;
    }
    CHECK(coarsen(g, seed).size() == levels.size());
  }
}

TEST_CASE("initial_bipartition examples") {
  SUBCASE("two K5 and a bridge") {
    auto edges = barbell_edges(5, 1);
    Partition p = initial_bipartition(weighted(10, edges), 0.1, 3);
    CHECK(p.cut_weight == 1);
    CHECK((p.labels() == "XXXXXYYYYY" || p.labels() == "YYYYYXXXXX"));
  }
  SUBCASE("4-path with exact balance") {
    Partition p = initial_bipartition(weighted(4, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}}), 0.0, 1);
    CHECK(p.cut_weight == 1);
    CHECK((p.labels() == "XXYY" || p.labels() == "YYXX"));
  }
  SUBCASE("star K1,9 is either feasible or reported infeasible") {
    std::vector<Edge> star;
    for (int v = 1; v < 10; ++v) star.push_back({0, v, 1});
    for (uint64_t seed = 0; seed < 10; ++seed) {
      std::optional<Partition> p;
      auto code = error_code([&] { p = initial_bipartition(weighted(10, star), 0.05, seed); });
      if (code) {
        CHECK(*code == Errc::kInfeasibleBalance);
        CHECK_FALSE(exhaustive_min_cut(10, star, 0.05));
      } else {
        check_against_oracle(star, 10, *p, 0.05);
        CHECK(p->cut_weight == *exhaustive_min_cut(10, star, 0.05));
      }
    }
  }
  SUBCASE("a dominant vertex weight is infeasible") {
    WeightedGraph g = WeightedGraph::from_edges(3, std::vector<WeightedEdge>{{0, 1, 1}, {1, 2, 1}},
                                                {10, 1, 1});
    CHECK(error_code([&] { initial_bipartition(g, 0.05, 1); }) == Errc::kInfeasibleBalance);
  }
}

TEST_CASE("fm_refine examples") {
  auto edges = barbell_edges(10, 1);
  WeightedGraph g = weighted(20, edges);

  SUBCASE("a misassigned clique vertex moves back") {
    std::vector<Side> side(20, Side::kY);
    for (int v = 0; v < 10; ++v) side[v] = Side::kX;
    side[4] = Side::kY;
    Partition start = make_partition(g, side, 0);
    CHECK(start.cut_weight > 1);
    FmTrace trace;
    Partition out = fm_refine(g, start, 0.1, 10, &trace);
    CHECK(out.cut_weight == 1);
    CHECK(out.labels() == "XXXXXXXXXXYYYYYYYYYY");
    CHECK(trace.input_cut == start.cut_weight);
  }
  SUBCASE("an optimal partition is a fixed point") {
    Partition start = make_partition(g, parse_labels("XXXXXXXXXXYYYYYYYYYY"), 0);
    Partition out = fm_refine(g, start, 0.05);
    CHECK(out.cut_weight == 1);
    CHECK(out.side == start.side);
  }
}

TEST_CASE("fm_refine on G(16, 0.4) reaches the exhaustive optimum often") {
  const double eps = 0.13;
  int optimal = 0, trials = 0;
  for (uint64_t seed = 1; trials < 100; ++seed) {
    auto edges = gnp_edges(16, 0.4, seed);
    if (!is_connected(16, edges)) continue;
    ++trials;
    WeightedGraph g = weighted(16, edges);
    Partition initial = initial_bipartition(g, eps, seed);
    FmTrace trace;
    Partition refined = fm_refine(g, initial, eps, 10, &trace);
    CHECK(refined.cut_weight <= initial.cut_weight);
    Weight previous = initial.cut_weight;
    for (Weight cut : trace.pass_cuts) {
      CHECK(cut <= previous);
      previous = cut;
    }
    check_against_oracle(edges, 16, refined, eps);
    const int64_t best = *exhaustive_min_cut(16, edges, eps);
    CHECK(refined.cut_weight >= best);
    if (refined.cut_weight == best) ++optimal;
  }
  MESSAGE("optimal in " << optimal << " of 100");
  CHECK(optimal >= 60);
}

TEST_CASE("fm_refine never increases the cut from random balanced starts") {
  std::mt19937_64 rng(11);
  for (uint64_t seed = 1; seed <= 60; ++seed) {
    const int n = 6 + static_cast<int>(rng() % 80);
    auto edges = random_connected_edges(n, 3.0 / n, 3, seed);
    WeightedGraph g = weighted(n, edges);
    std::vector<Side> side(n, Side::kX);
    for (int v = 0; v < n / 2; ++v) side[v] = Side::kY;
    std::shuffle(side.begin(), side.end(), rng);
    Partition start = make_partition(g, side, seed);
    FmTrace trace;
    Partition out = fm_refine(g, start, 0.05, 10, &trace);
    CHECK(trace.input_balanced);
    CHECK(out.cut_weight <= start.cut_weight);
    Weight previous = start.cut_weight;
    for (Weight cut : trace.pass_cuts) {
      CHECK(cut <= previous);
      previous = cut;
    }
    check_against_oracle(edges, n, out, 0.05);
  }
}

TEST_CASE("bipartition examples") {
  SUBCASE("two K10 and a bridge") {
    auto edges = barbell_edges(10, 1);
    Partition p = bipartition(weighted(20, edges));
    CHECK(p.cut_weight == 1);
    CHECK(p.labels() == "XXXXXXXXXXYYYYYYYYYY");
    CHECK(p.seed == 42);
  }
  SUBCASE("planted blocks, seed 7") {
    auto edges = planted_edges(50, 0.3, 0.02, 7);
    REQUIRE(is_connected(100, edges));
    std::vector<int> truth(100, 0);
    for (int v = 50; v < 100; ++v) truth[v] = 1;
    Partition p = bipartition(weighted(100, edges), 0.05, 7);
    check_against_oracle(edges, 100, p, 0.05);
    CHECK(label_agreement(p.side, truth) >= 0.95);
    CHECK(p.cut_weight <= recount_cut(edges, sides_from_blocks(truth)));
  }
  SUBCASE("K20 has only one balanced cut value") {
    auto edges = complete_edges(20);
    for (uint64_t seed = 0; seed < 50; ++seed) {
      Partition p = bipartition(weighted(20, edges), 0.05, seed);
      check_against_oracle(edges, 20, p, 0.05);
      CHECK(p.cut_weight >= 90);
      CHECK(p.cut_weight <= 110);
    }
  }
  SUBCASE("two vertices") {
    Partition p = bipartition(weighted(2, {{0, 1, 3}}));
    CHECK(p.labels() == "XY");
    CHECK(p.cut_weight == 3);
  }
}

TEST_CASE("bipartition is deterministic and valid on random graphs") {
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    const int n = 2 + static_cast<int>(seed * 37 % 400);
    auto edges = random_connected_edges(n, 3.0 / n, 4, seed);
    WeightedGraph g = weighted(n, edges);
    BipartitionTrace trace;
    Partition a = bipartition(g, 0.05, seed, &trace);
    Partition b = bipartition(g, 0.05, seed);
    CHECK(a == b);
    CHECK(a.side[0] == Side::kX);
    check_against_oracle(edges, n, a, 0.05);
    CHECK_FALSE(check_partition(g, a, 0.05));
    for (const FmTrace& fm : trace.refinements) {
      Weight previous = fm.input_cut;
      for (Weight cut : fm.pass_cuts) {
        if (fm.input_balanced) CHECK(cut <= previous);
        previous = cut;
      }
    }
  }
}

TEST_CASE("bipartition stays within 1.5x of the exhaustive optimum on small graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 13);
    auto edges = random_connected_edges(n, 0.3, 3, rng());
    Partition p = bipartition(weighted(n, edges), 0.05, trial);
    const int64_t best = *exhaustive_min_cut(n, edges, 0.05);
    CHECK(p.cut_weight * 2 <= best * 3);
  }
}
