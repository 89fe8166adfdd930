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
#include "fixtures.h"
#include "httplib.h"
#include "polar/service.h"
#include "polar/store.h"
#include "schemas.h"
#include "test_util.h"

using namespace polar;
using namespace polar::testing;
using nlohmann::json;

namespace {

// A store holding three processed topics over two days.
struct StoreFixture {
  TempDir dir;
  std::vector<TopicRecord> records;

  StoreFixture() {
    TopicStore store(dir.path());
    records.push_back(make_record(Scenario::kBarbell, "russia_march", "2015-06-03", 1));
    records.push_back(make_record(Scenario::kSingleCommunity, "sxsw", "2015-06-03", 2));
    records.push_back(make_record(Scenario::kBarbell, "vote", "2015-06-04", 3, 6));
    for (const auto& r : records) store.put(r);
  }

  ApiConfig config() const {
    ApiConfig c;
    c.data_dir = dir.path();
    c.port = 0;
    return c;
  }
};

json parse_ok(const ApiResponse& r, Schema schema) {
  CHECK(r.content_type == "application/json");
  json doc = json::parse(r.body);
  CHECK(schema_problems(doc, schema).empty());
  return doc;
}

void check_error(const ApiResponse& r, int status) {
  CHECK(r.status == status);
  CHECK(schema_problems(json::parse(r.body), Schema::kError).empty());
}

}  // namespace

TEST_CASE("ExplorerApi endpoints") {
  StoreFixture fx;
  ExplorerApi api(fx.config());

  SUBCASE("health") {
    ApiResponse r = api.health();
    CHECK(r.status == 200);
    json doc = parse_ok(r, Schema::kHealth);
    CHECK(doc["topics_indexed"] == 3);
    CHECK(doc["schema_version"] == 1);
  }
  SUBCASE("list sorted by score") {
    ApiResponse r = api.list_topics({{"sort", "score"}});
    CHECK(r.status == 200);
    json doc = parse_ok(r, Schema::kTopicList);
    CHECK(doc["total"] == 3);
    CHECK(doc["pages"] == 1);
    CHECK(doc["page_size"] == 20);
    double max_score = 0;
    for (const auto& rec : fx.records) max_score = std::max(max_score, rec.score.display_score);
    CHECK(doc["entries"][0]["display_score"] == max_score);
    for (size_t i = 1; i < doc["entries"].size(); ++i) {
      CHECK(doc["entries"][i - 1]["display_score"].get<double>() >=
            doc["entries"][i]["display_score"].get<double>());
    }
  }
  SUBCASE("list matches the store query") {
    TopicStore store(fx.dir.path(), TopicStore::Mode::kReadOnly);
    for (const char* sort : {"score", "date"}) {
      for (const char* q : {"", "russia", "RUSSIA", "march", "zzz"}) {
        json doc = parse_ok(api.list_topics({{"sort", sort}, {"q", q}}), Schema::kTopicList);
        QueryPage page = store.query({.sort = *parse_sort_key(sort), .text = q});
        REQUIRE(doc["entries"].size() == page.entries.size());
        CHECK(doc["total"] == page.total);
        for (size_t i = 0; i < page.entries.size(); ++i) {
          CHECK(doc["entries"][i] == to_json(page.entries[i]));
        }
      }
    }
    json russia = parse_ok(api.list_topics({{"q", "russia"}}), Schema::kTopicList);
    REQUIRE(russia["entries"].size() == 1);
    CHECK(russia["entries"][0]["hashtag"] == "russia_march");
  }
  SUBCASE("pagination") {
    json first = parse_ok(api.list_topics({{"page", "0"}, {"page_size", "2"}}), Schema::kTopicList);
    json second = parse_ok(api.list_topics({{"page", "1"}, {"page_size", "2"}}), Schema::kTopicList);
    json third = parse_ok(api.list_topics({{"page", "2"}, {"page_size", "2"}}), Schema::kTopicList);
    CHECK(first["entries"].size() == 2);
    CHECK(second["entries"].size() == 1);
    CHECK(third["entries"].empty());
    CHECK(first["pages"] == 2);
  }
  SUBCASE("bad parameters") {
    check_error(api.list_topics({{"sort", "banana"}}), 400);
    check_error(api.list_topics({{"page", "-1"}}), 400);
    check_error(api.list_topics({{"page", "x"}}), 400);
    check_error(api.list_topics({{"page_size", "0"}}), 400);
  }
  SUBCASE("topic documents") {
    const TopicRecord& r = fx.records[0];
    ApiResponse ok = api.get_topic("2015-06-03", "russia_march");
    CHECK(ok.status == 200);
    json doc = parse_ok(ok, Schema::kTopicRecord);
    CHECK(doc == to_json(r));
    CHECK(doc["score"]["display_score"].get<double>() >= 0.0);
    CHECK(doc["score"]["display_score"].get<double>() <= 1.0);
    check_error(api.get_topic("2015-06-03", "unknown"), 404);
    check_error(api.get_topic("2015-13-99", "russia_march"), 400);
  }
  SUBCASE("corrupt records are server errors") {
    TopicStore store(fx.dir.path(), TopicStore::Mode::kReadOnly);
    spit(store.record_path(*Day::parse("2015-06-03"), "sxsw"), "{broken");
    check_error(api.get_topic("2015-06-03", "sxsw"), 500);
  }
  SUBCASE("responses are repeatable and the store is untouched") {
    const std::string before = slurp(fx.dir / "index.json");
    CHECK(api.list_topics({{"q", "a"}}).body == api.list_topics({{"q", "a"}}).body);
    CHECK(api.get_topic("2015-06-04", "vote").body == api.get_topic("2015-06-04", "vote").body);
    CHECK(slurp(fx.dir / "index.json") == before);
  }
  SUBCASE("reload picks up new topics") {
    {
      TopicStore store(fx.dir.path());
      store.put(make_record(Scenario::kBarbell, "late", "2015-06-05", 4));
    }
    CHECK(json::parse(api.health().body)["topics_indexed"] == 3);
    api.reload();
    CHECK(json::parse(api.health().body)["topics_indexed"] == 4);
  }
  SUBCASE("empty store") {
    TempDir empty;
    ApiConfig c;
    c.data_dir = empty.path();
    ExplorerApi fresh(c);
    CHECK(json::parse(fresh.health().body)["topics_indexed"] == 0);
    CHECK(json::parse(fresh.list_topics({}).body)["entries"].empty());
  }
}

TEST_CASE("ExplorerServer over HTTP") {
  StoreFixture fx;
  TempDir web;
  spit(web / "index.html", "<!doctype html><title>polar</title>");
  ApiConfig config = fx.config();
  config.static_dir = web.path();
  config.cors_allow = {"http://example.test"};
  ExplorerServer server(config);
  const int port = server.start();
  REQUIRE(port > 0);
  httplib::Client client("127.0.0.1", port);

  SUBCASE("health and listing") {
    auto res = client.Get("/api/health");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    CHECK(schema_problems(json::parse(res->body), Schema::kHealth).empty());

    auto list = client.Get("/api/topics?sort=score&q=russia&page=0");
    REQUIRE(list);
    CHECK(list->status == 200);
    CHECK(list->body == server.api().list_topics({{"sort", "score"}, {"q", "russia"}, {"page", "0"}}).body);

    auto bad = client.Get("/api/topics?sort=banana");
    REQUIRE(bad);
    CHECK(bad->status == 400);
    CHECK(schema_problems(json::parse(bad->body), Schema::kError).empty());
  }
  SUBCASE("topic documents") {
    auto res = client.Get("/api/topics/2015-06-03/russia_march");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(schema_problems(json::parse(res->body), Schema::kTopicRecord).empty());
    auto missing = client.Get("/api/topics/2015-06-03/nothing");
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto bad_day = client.Get("/api/topics/2015-13-99/russia_march");
    REQUIRE(bad_day);
    CHECK(bad_day->status == 400);
  }
  SUBCASE("unknown routes answer with JSON errors") {
    auto res = client.Get("/api/nowhere");
    REQUIRE(res);
    CHECK(res->status == 404);
    CHECK(schema_problems(json::parse(res->body), Schema::kError).empty());
  }
  SUBCASE("static bundle") {
    auto res = client.Get("/index.html");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->body.find("polar") != std::string::npos);
  }
  SUBCASE("gzip on request") {
    httplib::Headers headers = {{"Accept-Encoding", "gzip"}};
    auto res = client.Get("/api/topics/2015-06-03/russia_march", headers);
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Encoding") == "gzip");
    CHECK(json::parse(res->body) == to_json(fx.records[0]));
  }
  SUBCASE("CORS allow-list") {
    auto allowed = client.Get("/api/health", {{"Origin", "http://example.test"}});
    REQUIRE(allowed);
    CHECK(allowed->get_header_value("Access-Control-Allow-Origin") == "http://example.test");
    auto other = client.Get("/api/health", {{"Origin", "http://elsewhere.test"}});
    REQUIRE(other);
    CHECK_FALSE(other->has_header("Access-Control-Allow-Origin"));
  }
  SUBCASE("reload from localhost") {
    {
      TopicStore store(fx.dir.path());
      store.put(make_record(Scenario::kBarbell, "late", "2015-06-05", 4));
    }
    auto res = client.Post("/api/reload");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(json::parse(res->body)["topics_indexed"] == 4);
  }
  SUBCASE("no write endpoints") {
    auto res = client.Put("/api/topics/2015-06-03/russia_march", "{}", "application/json");
    REQUIRE(res);
    CHECK(res->status >= 400);
    auto del = client.Delete("/api/topics/2015-06-03/russia_march");
    REQUIRE(del);
    CHECK(del->status >= 400);
    CHECK(server.api().get_topic("2015-06-03", "russia_march").status == 200);
  }
  server.stop();
}

TEST_CASE("ExplorerServer runs without a static bundle") {
  StoreFixture fx;
  ApiConfig config = fx.config();
  config.static_dir = fx.dir / "no-such-bundle";
  ExplorerServer server(config);
  const int port = server.start();
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/api/health");
  REQUIRE(res);
  CHECK(res->status == 200);
  auto root = client.Get("/");
  REQUIRE(root);
  CHECK(root->status == 404);
}

TEST_CASE("ApiConfig validation") {
  TempDir dir;
  ApiConfig c;
  c.data_dir = dir.path();
  c.page_size = 0;
  CHECK(error_code([&] { ExplorerApi api(c); }) == Errc::kInvalidArgument);
}
