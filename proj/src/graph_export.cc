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

#include <sstream>

#include "polar/error.h"
#include "polar/graph.h"

namespace polar {

using nlohmann::json;

json to_node_link(const RetweetGraph& graph) {
  json nodes = json::array();
  for (size_t v = 0; v < graph.num_vertices(); ++v) {
    nodes.push_back({{"id", v}, {"user", graph.users[v]}, {"endorsements", graph.endorsements[v]}});
  }
  json links = json::array();
  for (const DirectedEdge& e : graph.edges) {
    links.push_back({{"source", e.from}, {"target", e.to}, {"weight", e.weight}});
  }
  return {{"directed", true}, {"nodes", std::move(nodes)}, {"links", std::move(links)}};
}

RetweetGraph from_node_link(const json& doc) {
  try {
    const json& nodes = doc.at("nodes");
    std::vector<std::string> users(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    for (const json& node : nodes) {
      auto id = node.at("id").get<int64_t>();
      if (id < 0 || static_cast<size_t>(id) >= users.size() || seen[id]) {
        throw Error(Errc::kValidationFailed, "node ids must be dense and unique");
      }
      seen[id] = true;
      users[id] = node.at("user").get<std::string>();
    }
    std::vector<DirectedEdge> edges;
    for (const json& link : doc.at("links")) {
      edges.push_back({link.at("source").get<VertexId>(), link.at("target").get<VertexId>(),
                       link.at("weight").get<Weight>()});
    }
    return make_retweet_graph(std::move(users), std::move(edges));
  } catch (const json::exception& e) {
    throw Error(Errc::kValidationFailed, std::string("bad node-link document: ") + e.what());
  }
}

namespace {

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_gexf(const RetweetGraph& graph) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://gexf.net/1.3\" version=\"1.3\">\n"
      << "  <graph mode=\"static\" defaultedgetype=\"directed\">\n"
      << "    <attributes class=\"node\">\n"
      << "      <attribute id=\"endorsements\" title=\"endorsements\" type=\"long\"/>\n"
      << "    </attributes>\n"
      << "    <nodes>\n";
  for (size_t v = 0; v < graph.num_vertices(); ++v) {
    out << "      <node id=\"" << v << "\" label=\"" << xml_escape(graph.users[v]) << "\">"
        << "<attvalues><attvalue for=\"endorsements\" value=\"" << graph.endorsements[v]
        << "\"/></attvalues></node>\n";
  }
  out << "    </nodes>\n    <edges>\n";
  size_t id = 0;
  for (const DirectedEdge& e : graph.edges) {
    out << "      <edge id=\"" << id++ << "\" source=\"" << e.from << "\" target=\"" << e.to
        << "\" weight=\"" << e.weight << "\"/>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  return out.str();
}

}  // namespace polar
