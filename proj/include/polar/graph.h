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

#ifndef POLAR_GRAPH_H_
#define POLAR_GRAPH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polar/ingest.h"

namespace polar {

using VertexId = int32_t;
using Weight = int64_t;

struct WeightedEdge {
  VertexId u;
  VertexId v;
  Weight weight;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Undirected graph with positive integer edge and vertex weights in CSR form.
// Adjacency lists are sorted by neighbor id; there are no self-loops and no
// parallel edges.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  // Parallel edges are merged by summing weights; self-loops are dropped.
  // Empty `vertex_weights` means unit weights.
  static WeightedGraph from_edges(size_t num_vertices, std::span<const WeightedEdge> edges,
                                  std::vector<Weight> vertex_weights = {});

  size_t num_vertices() const { return vertex_weights_.size(); }
  size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const VertexId> neighbors(VertexId v) const {
    return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
  }
  std::span<const Weight> edge_weights(VertexId v) const {
    return {weights_.data() + offsets_[v], weights_.data() + offsets_[v + 1]};
  }
  size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  Weight weighted_degree(VertexId v) const { return weighted_degree_[v]; }
  Weight vertex_weight(VertexId v) const { return vertex_weights_[v]; }
  std::span<const Weight> vertex_weights() const { return vertex_weights_; }

  Weight total_vertex_weight() const { return total_vertex_weight_; }
  // Each undirected edge counted once.
  Weight total_edge_weight() const { return total_edge_weight_; }

  // 0 when u and v are not adjacent.
  Weight edge_weight(VertexId u, VertexId v) const;

  // Every edge once, u < v, sorted.
  std::vector<WeightedEdge> edges() const;

 private:
  std::vector<size_t> offsets_{0};
  std::vector<VertexId> neighbors_;
  std::vector<Weight> weights_;
  std::vector<Weight> weighted_degree_;
  std::vector<Weight> vertex_weights_;
  Weight total_vertex_weight_ = 0;
  Weight total_edge_weight_ = 0;
};

struct DirectedEdge {
  VertexId from;  // retweeter
  VertexId to;    // original author
  Weight weight;  // retweet count

  friend bool operator==(const DirectedEdge&, const DirectedEdge&) = default;
};

// Per-topic retweet graph. Immutable once built.
struct RetweetGraph {
  std::vector<std::string> users;     // indexed by VertexId
  std::vector<DirectedEdge> edges;    // sorted by (from, to)
  std::vector<Weight> endorsements;   // weighted in-degree
  WeightedGraph undirected;           // weight(u,v) = w(u->v) + w(v->u)

  size_t num_vertices() const { return users.size(); }

  // The undirected view is derived, so it does not take part.
  friend bool operator==(const RetweetGraph& a, const RetweetGraph& b) {
    return a.users == b.users && a.edges == b.edges && a.endorsements == b.endorsements;
  }
};

// Validates and assembles a RetweetGraph. Parallel directed edges are merged;
// self-loops, unknown endpoints, duplicate users and non-positive weights
// raise Error(kValidationFailed).
RetweetGraph make_retweet_graph(std::vector<std::string> users,
                                std::vector<DirectedEdge> edges);

// One vertex per contributing user (sorted by user id), one unit of weight per
// retweet that carries the hashtag. Throws Error(kEmptyActivity).
RetweetGraph build_retweet_graph(const TopicActivity& activity);

struct ComponentInfo {
  std::vector<int32_t> component_of;  // per vertex
  std::vector<size_t> sizes;          // per component
  std::optional<int32_t> largest;     // empty for the empty graph
};

// Components are numbered in order of their smallest vertex.
ComponentInfo connected_components(const WeightedGraph& graph);
ComponentInfo connected_components(const RetweetGraph& graph);

// Induced subgraph on the largest component (ties: the component holding the
// smaller vertex). Vertex order is preserved. Throws Error(kEmptyGraph).
RetweetGraph largest_component_subgraph(const RetweetGraph& graph);

// {"nodes":[{id,user,endorsements}], "links":[{source,target,weight}]}, links
// being the directed retweet edges.
nlohmann::json to_node_link(const RetweetGraph& graph);
RetweetGraph from_node_link(const nlohmann::json& doc);

// GEXF 1.3 document with a directed edge per retweet pair.
std::string to_gexf(const RetweetGraph& graph);

}  // namespace polar

#endif  // POLAR_GRAPH_H_
