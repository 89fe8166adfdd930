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

#include "polar/graph.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <unordered_map>

#include "polar/error.h"

namespace polar {

WeightedGraph WeightedGraph::from_edges(size_t num_vertices,
                                        std::span<const WeightedEdge> edges,
                                        std::vector<Weight> vertex_weights) {
  if (vertex_weights.empty()) vertex_weights.assign(num_vertices, 1);
  if (vertex_weights.size() != num_vertices) {
    throw Error(Errc::kDimensionMismatch, "vertex weight count != vertex count");
  }
  std::vector<WeightedEdge> arcs;
  arcs.reserve(edges.size() * 2);
  for (const WeightedEdge& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<size_t>(e.u) >= num_vertices ||
        static_cast<size_t>(e.v) >= num_vertices) {
      throw Error(Errc::kValidationFailed, "edge endpoint out of range");
    }
    if (e.weight <= 0) throw Error(Errc::kValidationFailed, "non-positive edge weight");
    if (e.u == e.v) continue;
    arcs.push_back({e.u, e.v, e.weight});
    arcs.push_back({e.v, e.u, e.weight});
  }
  std::sort(arcs.begin(), arcs.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  WeightedGraph g;
  g.vertex_weights_ = std::move(vertex_weights);
  g.total_vertex_weight_ =
      std::accumulate(g.vertex_weights_.begin(), g.vertex_weights_.end(), Weight{0});
  g.offsets_.assign(num_vertices + 1, 0);
  g.weighted_degree_.assign(num_vertices, 0);
  for (size_t i = 0; i < arcs.size(); ++i) {
    if (i > 0 && arcs[i].u == arcs[i - 1].u && arcs[i].v == arcs[i - 1].v) {
      g.weights_.back() += arcs[i].weight;
    } else {
      g.neighbors_.push_back(arcs[i].v);
      g.weights_.push_back(arcs[i].weight);
      ++g.offsets_[arcs[i].u + 1];
    }
    g.weighted_degree_[arcs[i].u] += arcs[i].weight;
  }
  std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());
  Weight twice_total = std::accumulate(g.weighted_degree_.begin(),
                                       g.weighted_degree_.end(), Weight{0});
  g.total_edge_weight_ = twice_total / 2;
  return g;
}

Weight WeightedGraph::edge_weight(VertexId u, VertexId v) const {
  auto adj = neighbors(u);
  auto it = std::lower_bound(adj.begin(), adj.end(), v);
  if (it == adj.end() || *it != v) return 0;
  return edge_weights(u)[it - adj.begin()];
}

std::vector<WeightedEdge> WeightedGraph::edges() const {
  std::vector<WeightedEdge> out;
  out.reserve(num_edges());
  for (VertexId u = 0; u < static_cast<VertexId>(num_vertices()); ++u) {
    auto adj = neighbors(u);
    auto w = edge_weights(u);
    for (size_t i = 0; i < adj.size(); ++i) {
      if (u < adj[i]) out.push_back({u, adj[i], w[i]});
    }
  }
  return out;
}

RetweetGraph make_retweet_graph(std::vector<std::string> users,
                                std::vector<DirectedEdge> edges) {
  {
    std::set<std::string_view> distinct(users.begin(), users.end());
    if (distinct.size() != users.size()) {
      throw Error(Errc::kValidationFailed, "duplicate user id");
    }
  }
  const auto n = static_cast<VertexId>(users.size());
  for (const DirectedEdge& e : edges) {
    if (e.from < 0 || e.to < 0 || e.from >= n || e.to >= n) {
      throw Error(Errc::kValidationFailed, "edge endpoint out of range");
    }
    if (e.from == e.to) throw Error(Errc::kValidationFailed, "self-loop");
    if (e.weight <= 0) throw Error(Errc::kValidationFailed, "non-positive edge weight");
  }
  std::sort(edges.begin(), edges.end(), [](const DirectedEdge& a, const DirectedEdge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  std::vector<DirectedEdge> merged;
  for (const DirectedEdge& e : edges) {
    if (!merged.empty() && merged.back().from == e.from && merged.back().to == e.to) {
      merged.back().weight += e.weight;
    } else {
      merged.push_back(e);
    }
  }

  RetweetGraph g;
  g.users = std::move(users);
  g.endorsements.assign(g.users.size(), 0);
  std::vector<WeightedEdge> undirected;
  undirected.reserve(merged.size());
  for (const DirectedEdge& e : merged) {
    g.endorsements[e.to] += e.weight;
    undirected.push_back({e.from, e.to, e.weight});
  }
  g.edges = std::move(merged);
  g.undirected = WeightedGraph::from_edges(g.users.size(), undirected);
  return g;
}

RetweetGraph build_retweet_graph(const TopicActivity& activity) {
  if (activity.tweets.empty()) {
    throw Error(Errc::kEmptyActivity, "topic '" + activity.hashtag + "' has no tweets");
  }
  // Every tweet in the activity carries the hashtag, so the original author of
  // any retweet in it contributed to the topic through the propagated content.
  std::set<std::string> contributors;
  for (const TweetRecord& t : activity.tweets) {
    contributors.insert(t.author_id);
    if (t.retweet_of) contributors.insert(t.retweet_of->author_id);
  }
  std::vector<std::string> users(contributors.begin(), contributors.end());
  std::unordered_map<std::string_view, VertexId> index;
  for (size_t i = 0; i < users.size(); ++i) index.emplace(users[i], static_cast<VertexId>(i));

  std::map<std::pair<VertexId, VertexId>, Weight> counts;
  for (const TweetRecord& t : activity.tweets) {
    if (!t.retweet_of) continue;
    VertexId from = index.at(t.author_id);
    VertexId to = index.at(t.retweet_of->author_id);
    if (from == to) continue;
    ++counts[{from, to}];
  }
  std::vector<DirectedEdge> edges;
  edges.reserve(counts.size());
  for (const auto& [key, weight] : counts) edges.push_back({key.first, key.second, weight});
  return make_retweet_graph(std::move(users), std::move(edges));
}

ComponentInfo connected_components(const WeightedGraph& graph) {
  const size_t n = graph.num_vertices();
  ComponentInfo info;
  info.component_of.assign(n, -1);
  std::vector<VertexId> stack;
  for (VertexId root = 0; root < static_cast<VertexId>(n); ++root) {
    if (info.component_of[root] >= 0) continue;
    const auto id = static_cast<int32_t>(info.sizes.size());
    size_t size = 0;
    info.component_of[root] = id;
    stack.push_back(root);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      ++size;
      for (VertexId u : graph.neighbors(v)) {
        if (info.component_of[u] < 0) {
          info.component_of[u] = id;
          stack.push_back(u);
        }
      }
    }
    info.sizes.push_back(size);
    if (!info.largest || size > info.sizes[*info.largest]) info.largest = id;
  }
  return info;
}

ComponentInfo connected_components(const RetweetGraph& graph) {
  return connected_components(graph.undirected);
}

RetweetGraph largest_component_subgraph(const RetweetGraph& graph) {
  if (graph.num_vertices() == 0) throw Error(Errc::kEmptyGraph, "graph has no vertices");
  ComponentInfo info = connected_components(graph);
  if (info.sizes.size() == 1) return graph;
  const int32_t keep = *info.largest;
  std::vector<VertexId> remap(graph.num_vertices(), -1);
  std::vector<std::string> users;
  for (size_t v = 0; v < graph.num_vertices(); ++v) {
    if (info.component_of[v] == keep) {
      remap[v] = static_cast<VertexId>(users.size());
      users.push_back(graph.users[v]);
    }
  }
  std::vector<DirectedEdge> edges;
  for (const DirectedEdge& e : graph.edges) {
    if (remap[e.from] >= 0) edges.push_back({remap[e.from], remap[e.to], e.weight});
  }
  return make_retweet_graph(std::move(users), std::move(edges));
}

}  // namespace polar
