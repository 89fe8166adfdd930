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

#include "polar/corpus_gen.h"

#include <cstdio>
#include <fstream>

#include "polar/error.h"
#include "polar/random.h"

namespace polar {

std::optional<Scenario> parse_scenario(std::string_view name) {
  if (name == "barbell") return Scenario::kBarbell;
  if (name == "single-community") return Scenario::kSingleCommunity;
  if (name == "planted") return Scenario::kPlanted;
  return std::nullopt;
}

std::string_view scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kBarbell: return "barbell";
    case Scenario::kSingleCommunity: return "single-community";
    case Scenario::kPlanted: return "planted";
  }
  return "unknown";
}

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw Error(Errc::kInvalidArgument, message);
}

bool probability(double p) { return p >= 0.0 && p <= 1.0; }

std::string user_name(size_t i) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "u%05zu", i);
  return buf;
}

// Vocabulary per block so summaries have something to find.
constexpr std::string_view kBlockWords[2][3] = {{"march", "freedom", "rally"},
                                                {"stadium", "tickets", "festival"}};
constexpr std::string_view kBlockTags[2] = {"opposition", "fans"};

}  // namespace

nlohmann::json GeneratedCorpus::truth() const {
  nlohmann::json labels_json = nlohmann::json::object();
  for (size_t i = 0; i < users.size(); ++i) labels_json[users[i]] = labels[i];
  nlohmann::json edges_json = nlohmann::json::array();
  for (const WeightedEdge& e : edges) {
    edges_json.push_back({users[e.u], users[e.v], e.weight});
  }
  return {{"scenario", scenario_name(params.scenario)},
          {"hashtag", hashtag},
          {"day", params.day.to_string()},
          {"seed", params.seed},
          {"params",
           {{"clique_size", params.clique_size},
            {"bridges", params.bridges},
            {"n", params.n},
            {"p", params.p},
            {"p_in", params.p_in},
            {"p_out", params.p_out}}},
          {"labels", std::move(labels_json)},
          {"edges", std::move(edges_json)}};
}

GeneratedCorpus generate_corpus(const GenParams& params) {
  GeneratedCorpus out;
  out.params = params;
  Rng rng(derive_seed(params.seed, 0x9e4));

  size_t n = 0;
  switch (params.scenario) {
    case Scenario::kBarbell:
      require(params.clique_size >= 2, "clique_size must be at least 2");
      require(params.bridges >= 1, "bridges must be at least 1");
      n = 2 * params.clique_size;
      out.hashtag = "russia_march";
      break;
    case Scenario::kSingleCommunity:
      require(params.n >= 2, "n must be at least 2");
      require(probability(params.p) && params.p > 0, "p must lie in (0, 1]");
      n = params.n;
      out.hashtag = "sxsw";
      break;
    case Scenario::kPlanted:
      require(params.n >= 4 && params.n % 2 == 0, "n must be even and at least 4");
      require(probability(params.p_in) && probability(params.p_out),
              "p_in and p_out must lie in [0, 1]");
      require(params.p_in > params.p_out, "p_in must exceed p_out for a planted partition");
      n = params.n;
      out.hashtag = "planted";
      break;
  }
  if (!params.hashtag.empty()) {
    auto tag = normalize_hashtag(params.hashtag);
    require(tag.has_value(), "hashtag does not satisfy the hashtag grammar");
    out.hashtag = *tag;
  }

  for (size_t i = 0; i < n; ++i) {
    out.users.push_back(user_name(i));
    int label = 0;
    if (params.scenario == Scenario::kBarbell) label = i < params.clique_size ? 0 : 1;
    if (params.scenario == Scenario::kPlanted) label = i < n / 2 ? 0 : 1;
    out.labels.push_back(label);
  }

  switch (params.scenario) {
    case Scenario::kBarbell: {
      const auto m = static_cast<VertexId>(params.clique_size);
      for (VertexId block = 0; block < 2; ++block) {
        for (VertexId a = 0; a < m; ++a) {
          for (VertexId b = a + 1; b < m; ++b) out.edges.push_back({block * m + a, block * m + b, 1});
        }
      }
      out.edges.push_back({m - 1, m, static_cast<Weight>(params.bridges)});
      break;
    }
    case Scenario::kSingleCommunity:
    case Scenario::kPlanted: {
      for (size_t a = 0; a < n; ++a) {
        for (size_t b = a + 1; b < n; ++b) {
          double p = params.p;
          if (params.scenario == Scenario::kPlanted) {
            p = out.labels[a] == out.labels[b] ? params.p_in : params.p_out;
          }
          if (rng.bernoulli(p)) {
            out.edges.push_back({static_cast<VertexId>(a), static_cast<VertexId>(b), 1});
          }
        }
      }
      break;
    }
  }

  // One original per user in the morning, retweets in the afternoon.
  const Timestamp midnight{params.day.sys_days()};
  std::vector<std::string> texts(n);
  for (size_t i = 0; i < n; ++i) {
    const int block = out.labels[i];
    std::string text = "#" + out.hashtag + " ";
    text += kBlockWords[block][rng.uniform_index(3)];
    text += " and ";
    text += kBlockWords[block][rng.uniform_index(3)];
    if (params.scenario != Scenario::kSingleCommunity) {
      text += " #";
      text += kBlockTags[block];
    }
    texts[i] = text;
    TweetRecord t;
    t.tweet_id = "t" + out.users[i];
    t.author_id = out.users[i];
    t.timestamp = midnight + std::chrono::seconds(rng.uniform_index(43200));
    t.text = text;
    t.hashtags = extract_hashtags(text);
    out.records.push_back(std::move(t));
  }
  size_t retweet_id = 0;
  for (const WeightedEdge& e : out.edges) {
    for (Weight k = 0; k < e.weight; ++k) {
      const bool forward = rng.bernoulli(0.5);
      const VertexId from = forward ? e.u : e.v;  // retweeter
      const VertexId to = forward ? e.v : e.u;    // original author
      TweetRecord t;
      char id[24];
      std::snprintf(id, sizeof(id), "r%07zu", retweet_id++);
      t.tweet_id = id;
      t.author_id = out.users[from];
      t.timestamp = midnight + std::chrono::seconds(43200 + rng.uniform_index(43200));
      t.text = "RT @" + out.users[to] + ": " + texts[to];
      t.hashtags = extract_hashtags(t.text);
      t.retweet_of = RetweetRef{"t" + out.users[to], out.users[to]};
      out.records.push_back(std::move(t));
    }
  }
  return out;
}

void write_corpus(const std::filesystem::path& path, const std::vector<TweetRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIoError, "cannot write " + path.string());
  for (const TweetRecord& r : records) out << serialize_record(r) << '\n';
  out.flush();
  if (!out) throw Error(Errc::kIoError, "write failed for " + path.string());
}

}  // namespace polar
