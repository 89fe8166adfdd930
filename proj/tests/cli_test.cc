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

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <sstream>

#include "cli.h"
#include "doctest.h"
#include "json.hpp"
#include "test_util.h"

using namespace polar;
using namespace polar::testing;
using nlohmann::json;

namespace {

int run(std::initializer_list<std::string> args) { return run_cli(args); }

}  // namespace

TEST_CASE("cli end to end") {
  TempDir dir;
  const std::string corpus = (dir / "barbell.jsonl").string();
  const std::string store = (dir / "store").string();

  REQUIRE(run({"--seed", "7", "gen", "barbell", "-o", corpus, "--clique-size", "12",
               "--day", "2015-06-03"}) == 0);
  json truth = json::parse(slurp(corpus + ".truth.json"));
  CHECK(truth["scenario"] == "barbell");
  CHECK(truth["seed"] == 7);
  CHECK(truth["labels"].size() == 24);

  REQUIRE(run({"--min-users", "10", "--authorities-k", "3", "process", corpus, "--data-dir",
               store, "--layout-iterations", "100"}) == 0);
  json index = json::parse(slurp(dir / "store" / "index.json"));
  CHECK(index.dump().find("russia_march") != std::string::npos);

  SUBCASE("export json") {
    const std::string out = (dir / "graph.json").string();
    REQUIRE(run({"export", "2015-06-03", "russia_march", "--data-dir", store, "-o", out}) == 0);
    json graph = json::parse(slurp(out));
    CHECK(graph["nodes"].size() == 24);
    CHECK(graph["links"].size() == 133);
  }
  SUBCASE("export gexf") {
    const std::string out = (dir / "graph.gexf").string();
    REQUIRE(run({"export", "2015-06-03", "russia_march", "--format", "gexf", "--data-dir", store,
                 "-o", out}) == 0);
    std::istringstream in(slurp(out));
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    CHECK(tree.get_child("gexf.graph.nodes").size() == 24);
    CHECK(tree.get_child("gexf.graph.edges").size() == 133);
  }
  SUBCASE("export of an unknown topic fails") {
    CHECK(run({"export", "2015-06-03", "nothing", "--data-dir", store}) != 0);
    CHECK(run({"export", "2015-06-33", "russia_march", "--data-dir", store}) != 0);
    CHECK(run({"export", "2015-06-03", "russia_march", "--format", "dot", "--data-dir", store}) !=
          0);
  }
  SUBCASE("verify") {
    CHECK(run({"verify", "--data-dir", store}) == 0);
    std::filesystem::remove(dir / "store" / "index.json");
    CHECK(run({"verify", "--data-dir", store}) != 0);
    CHECK(run({"verify", "--data-dir", store, "--rebuild"}) == 0);
    CHECK(run({"verify", "--data-dir", (dir / "absent").string()}) != 0);
  }
  SUBCASE("process is deterministic across invocations") {
    const std::string other = (dir / "store2").string();
    REQUIRE(run({"--min-users", "10", "--authorities-k", "3", "process", corpus, "--data-dir",
                 other, "--layout-iterations", "100", "-j", "3"}) == 0);
    CHECK(slurp(dir / "store" / "index.json") == slurp(dir / "store2" / "index.json"));
    CHECK(slurp(dir / "store" / "topics" / "2015-06-03" / "russia_march.json") ==
          slurp(dir / "store2" / "topics" / "2015-06-03" / "russia_march.json"));
  }
}

TEST_CASE("cli argument errors") {
  TempDir dir;
  CHECK(run({}) != 0);
  CHECK(run({"frobnicate"}) != 0);
  CHECK(run({"gen", "dumbbell", "-o", (dir / "x.jsonl").string()}) != 0);
  CHECK(run({"--mode", "psychic", "process", (dir / "x.jsonl").string()}) != 0);
  CHECK(run({"--seed", "banana", "gen", "barbell", "-o", (dir / "x.jsonl").string()}) != 0);
  CHECK(run({"process", (dir / "missing.jsonl").string(), "--data-dir",
             (dir / "store").string()}) == 2);
}

TEST_CASE("cli planted corpus with an empty day window") {
  TempDir dir;
  const std::string corpus = (dir / "planted.jsonl").string();
  REQUIRE(run({"gen", "planted", "-o", corpus, "-n", "40", "--p-in", "0.4", "--p-out", "0.05"}) ==
          0);
  CHECK(run({"process", corpus, "--data-dir", (dir / "store").string(), "--from", "2016-01-01"}) ==
        0);
  CHECK(run({"gen", "planted", "-o", corpus, "--p-in", "0.01", "--p-out", "0.05"}) != 0);
}
