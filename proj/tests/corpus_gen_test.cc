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

#include <set>

#include "doctest.h"
#include "oracles.h"
#include "polar/corpus_gen.h"
#include "polar/graph.h"
#include "test_util.h"

using namespace polar;
using namespace polar::testing;

namespace {

RetweetGraph rebuild(const GeneratedCorpus& corpus) {
  auto topics = bucket_topics(corpus.records, corpus.params.day, {.min_users = 1});
  REQUIRE(topics.count(corpus.hashtag) == 1);
  return build_retweet_graph(topics.at(corpus.hashtag));
}

std::vector<std::string> serialized(const GeneratedCorpus& corpus) {
  std::vector<std::string> out;
  for (const auto& r : corpus.records) out.push_back(serialize_record(r));
  return out;
}

}  // namespace

TEST_CASE("scenario names round-trip") {
  for (Scenario s : {Scenario::kBarbell, Scenario::kSingleCommunity, Scenario::kPlanted}) {
    CHECK(parse_scenario(scenario_name(s)) == s);
  }
  CHECK_FALSE(parse_scenario("dumbbell").has_value());
}

TEST_CASE("barbell corpus rebuilds two cliques and a bridge") {
  for (size_t bridges : {1u, 5u}) {
    GenParams params;
    params.clique_size = 20;
    params.bridges = bridges;
    GeneratedCorpus corpus = generate_corpus(params);
    RetweetGraph g = rebuild(corpus);
    REQUIRE(g.num_vertices() == 40);
    CHECK(g.users == corpus.users);

    std::vector<Edge> expected = barbell_edges(20, static_cast<int64_t>(bridges));
    WeightedGraph want = weighted(40, expected);
    CHECK(g.undirected.edges() == want.edges());
    CHECK(g.undirected.total_edge_weight() == 190 * 2 + static_cast<Weight>(bridges));
    // One original tweet per user plus one record per retweet.
    CHECK(corpus.records.size() == 40 + 380 + bridges);
  }
}

TEST_CASE("generated records carry the topic hashtag and day") {
  GenParams params;
  params.scenario = Scenario::kPlanted;
  params.n = 40;
  params.hashtag = "Referendum";
  params.day = *Day::parse("2016-06-23");
  GeneratedCorpus corpus = generate_corpus(params);
  CHECK(corpus.hashtag == "referendum");
  for (const TweetRecord& r : corpus.records) {
    CHECK(std::find(r.hashtags.begin(), r.hashtags.end(), "referendum") != r.hashtags.end());
    CHECK(Day::of(r.timestamp) == params.day);
    CHECK(parse_record(serialize_record(r)) == r);
  }
}

TEST_CASE("single-community and planted edges match the graph") {
  for (Scenario scenario : {Scenario::kSingleCommunity, Scenario::kPlanted}) {
    GenParams params;
    params.scenario = scenario;
    params.n = 60;
    params.p = 0.2;
    params.seed = 5;
    GeneratedCorpus corpus = generate_corpus(params);
    RetweetGraph g = rebuild(corpus);
    // Every user tweets once, so nobody is dropped even if isolated.
    REQUIRE(g.num_vertices() == 60);
    std::vector<Edge> edges;
    for (const auto& e : corpus.edges) edges.push_back({e.u, e.v, e.weight});
    CHECK(g.undirected.edges() == weighted(60, edges).edges());
  }
}

TEST_CASE("planted labels and truth sidecar") {
  GenParams params;
  params.scenario = Scenario::kPlanted;
  params.n = 100;
  params.seed = 11;
  GeneratedCorpus corpus = generate_corpus(params);
  int ones = 0;
  for (int l : corpus.labels) ones += l;
  CHECK(ones == 50);

  int64_t inside = 0, across = 0;
  for (const auto& e : corpus.edges) {
    (corpus.labels[e.u] == corpus.labels[e.v] ? inside : across) += e.weight;
  }
  // 2 * C(50,2) * 0.3 = 735 expected inside, 2500 * 0.02 = 50 across.
  CHECK(inside > 600);
  CHECK(inside < 870);
  CHECK(across < 90);

  nlohmann::json truth = corpus.truth();
  CHECK(truth["scenario"] == "planted");
  CHECK(truth["seed"] == 11);
  CHECK(truth["labels"].size() == 100);
  CHECK(truth["labels"]["u00000"] == 0);
  CHECK(truth["labels"]["u00099"] == 1);
  CHECK(truth["edges"].size() == corpus.edges.size());
}

TEST_CASE("generator parameter checks") {
  GenParams planted;
  planted.scenario = Scenario::kPlanted;
  planted.p_in = 0.02;
  planted.p_out = 0.3;
  CHECK(error_code([&] { generate_corpus(planted); }) == Errc::kInvalidArgument);
  planted = {};
  planted.scenario = Scenario::kPlanted;
  planted.n = 7;
  CHECK(error_code([&] { generate_corpus(planted); }) == Errc::kInvalidArgument);

  GenParams barbell;
  barbell.clique_size = 1;
  CHECK(error_code([&] { generate_corpus(barbell); }) == Errc::kInvalidArgument);
  barbell = {};
  barbell.bridges = 0;
  CHECK(error_code([&] { generate_corpus(barbell); }) == Errc::kInvalidArgument);
  barbell = {};
  barbell.hashtag = "no spaces";
  CHECK(error_code([&] { generate_corpus(barbell); }) == Errc::kInvalidArgument);

  GenParams single;
  single.scenario = Scenario::kSingleCommunity;
  single.p = 0.0;
  CHECK(error_code([&] { generate_corpus(single); }) == Errc::kInvalidArgument);
}

TEST_CASE("generation is deterministic in the seed") {
  GenParams params;
  params.scenario = Scenario::kSingleCommunity;
  params.n = 50;
  params.p = 0.1;
  const auto a = serialized(generate_corpus(params));
  const auto b = serialized(generate_corpus(params));
  CHECK(a == b);
  params.seed = 43;
  CHECK(serialized(generate_corpus(params)) != a);
}

TEST_CASE("write_corpus output reads back") {
  TempDir dir;
  GenParams params;
  params.clique_size = 5;
  GeneratedCorpus corpus = generate_corpus(params);
  write_corpus(dir / "c.jsonl", corpus.records);
  Corpus read = read_corpus(dir / "c.jsonl");
  CHECK(read.records == corpus.records);
  CHECK(read.stats.malformed == 0);
  CHECK(error_code([&] { write_corpus(dir / "missing" / "c.jsonl", corpus.records); }) ==
        Errc::kIoError);
}
