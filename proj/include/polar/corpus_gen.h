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

#ifndef POLAR_CORPUS_GEN_H_
#define POLAR_CORPUS_GEN_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polar/graph.h"
#include "polar/ingest.h"

namespace polar {

// Synthetic retweet corpora with known structure, standing in for real
// platform data in tests and demos.
enum class Scenario {
  kBarbell,          // two cliques joined by a bridge of `bridges` retweets
  kSingleCommunity,  // G(n, p)
  kPlanted,          // two equal blocks, p_in inside, p_out across
};

std::optional<Scenario> parse_scenario(std::string_view name);
std::string_view scenario_name(Scenario scenario);

struct GenParams {
  Scenario scenario = Scenario::kBarbell;
  size_t clique_size = 20;
  size_t bridges = 1;
  size_t n = 200;
  double p = 0.05;
  double p_in = 0.3;
  double p_out = 0.02;
  uint64_t seed = 42;
  std::string hashtag;  // empty: a per-scenario default
  Day day = Day::parse("2015-06-03").value();
};

struct GeneratedCorpus {
  GenParams params;
  std::string hashtag;
  std::vector<TweetRecord> records;
  std::vector<std::string> users;   // sorted; the built graph uses this order
  std::vector<int> labels;          // ground-truth block per user (0 or 1)
  std::vector<WeightedEdge> edges;  // undirected ground truth, weight = retweets

  // Sidecar document: scenario, parameters, labels and edges.
  nlohmann::json truth() const;
};

// Throws Error(kInvalidArgument) for inconsistent parameters (e.g. p_in < p_out).
GeneratedCorpus generate_corpus(const GenParams& params);

// One serialized record per line. Throws Error(kIoError).
void write_corpus(const std::filesystem::path& path, const std::vector<TweetRecord>& records);

}  // namespace polar

#endif  // POLAR_CORPUS_GEN_H_
