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

#include "polar/pipeline.h"

#include <spdlog/spdlog.h>

#include <atomic>
#include <thread>

#include "polar/error.h"

namespace polar {

std::string_view software_version() { return POLAR_VERSION; }

namespace {

std::string_view mode_name(ScoreMode mode) {
  switch (mode) {
    case ScoreMode::kAuto: return "auto";
    case ScoreMode::kExact: return "exact";
    case ScoreMode::kMonteCarlo: return "montecarlo";
  }
  return "auto";
}

}  // namespace

TopicRecord process_topic(const TopicActivity& activity, const PipelineParams& params) {
  const RetweetGraph full = build_retweet_graph(activity);
  RetweetGraph graph = largest_component_subgraph(full);

  TopicRecord record;
  record.hashtag = activity.hashtag;
  record.day = activity.day;
  record.stats.users = full.num_vertices();
  record.stats.vertices = graph.num_vertices();
  record.stats.edges = graph.undirected.num_edges();
  record.stats.tweets = activity.tweets.size();
  record.stats.largest_component_fraction =
      static_cast<double>(graph.num_vertices()) / static_cast<double>(full.num_vertices());

  ScoredTopic scored = score_topic(graph, params.score);
  // The layout sees the structure only.
  const Layout layout = layout_forceatlas2(graph.undirected, params.layout);

  record.layout = render_payload(graph, scored.partition, layout);
  record.layout_info = {layout.converged, layout.iterations_run, layout.final_mean_displacement};
  record.summary = summarize_topic(
      activity, graph, scored.partition, params.keywords, params.representatives,
      params.stopwords != nullptr ? *params.stopwords : Stopwords::builtin());
  record.partition = std::move(scored.partition);
  record.score = scored.score;
  record.graph = std::move(graph);

  Provenance& prov = record.provenance;
  prov.seed = params.score.seed;
  prov.balance_eps = params.score.balance_eps;
  prov.authorities_k = params.score.authorities_k;
  prov.mode = mode_name(params.score.mode);
  prov.walks = params.score.walks;
  prov.min_users = params.bucket.min_users;
  prov.layout = params.layout;
  prov.software_version = std::string(software_version());
  return record;
}

ProcessReport process_records(std::span<const TweetRecord> records, std::optional<Day> from,
                              std::optional<Day> to, const PipelineParams& params,
                              TopicStore& store) {
  ProcessReport report;
  std::vector<TopicActivity> topics;
  for (Day day : corpus_days(records)) {
    if ((from && day < *from) || (to && day > *to)) continue;
    ++report.days;
    for (auto& [tag, activity] : bucket_topics(records, day, params.bucket)) {
      topics.push_back(std::move(activity));
    }
  }
  report.attempted = topics.size();

  std::vector<std::optional<TopicRecord>> results(topics.size());
  std::vector<std::string> errors(topics.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < topics.size(); i = next++) {
      try {
        results[i] = process_topic(topics[i], params);
      } catch (const Error& e) {
        errors[i] = std::string(errc_name(e.code())) + ": " + e.what();
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(params.jobs, topics.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Writes happen in topic order regardless of completion order.
  for (size_t i = 0; i < topics.size(); ++i) {
    if (results[i]) {
      store.put(*results[i]);
      ++report.succeeded;
    } else {
      spdlog::warn("topic {} {} skipped: {}", topics[i].day.to_string(), topics[i].hashtag,
                   errors[i]);
      report.failures.push_back({topics[i].day, topics[i].hashtag, errors[i]});
    }
  }
  return report;
}

ProcessReport process_corpus(const std::filesystem::path& corpus, std::optional<Day> from,
                             std::optional<Day> to, const PipelineParams& params,
                             TopicStore& store) {
  Corpus data = read_corpus(corpus);
  if (data.stats.malformed > 0) {
    spdlog::warn("{}: skipped {} malformed record(s)", corpus.string(), data.stats.malformed);
  }
  if (data.records.empty()) spdlog::warn("{}: corpus holds no records", corpus.string());
  ProcessReport report = process_records(data.records, from, to, params, store);
  report.corpus = data.stats;
  return report;
}

}  // namespace polar
