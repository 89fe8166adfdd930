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

#include "cli.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"
#include "polar/corpus_gen.h"
#include "polar/error.h"
#include "polar/pipeline.h"
#include "polar/service.h"
#include "polar/store.h"

namespace polar {

namespace {

constexpr int kExitFailure = 2;

struct GlobalFlags {
  std::string seed = "42";
  double balance_eps = 0.05;
  size_t authorities_k = 10;
  std::string mode = "auto";
  uint64_t walks = 10000;
  size_t min_users = 50;
};

uint64_t resolve_seed(const std::string& text) {
  if (text == "entropy") {
    std::random_device rd;
    const uint64_t seed = (static_cast<uint64_t>(rd()) << 32) ^ rd();
    spdlog::info("using entropy seed {}", seed);
    return seed;
  }
  try {
    size_t used = 0;
    const uint64_t seed = std::stoull(text, &used);
    if (used == text.size()) return seed;
  } catch (const std::exception&) {
  }
  throw Error(Errc::kInvalidArgument, "--seed must be an integer or 'entropy'");
}

ScoreMode resolve_mode(const std::string& text) {
  if (text == "auto") return ScoreMode::kAuto;
  if (text == "exact") return ScoreMode::kExact;
  if (text == "montecarlo") return ScoreMode::kMonteCarlo;
  throw Error(Errc::kInvalidArgument, "--mode must be auto, exact or montecarlo");
}

std::optional<Day> resolve_day(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  auto day = Day::parse(text);
  if (!day) throw Error(Errc::kInvalidArgument, std::string(flag) + " must be YYYY-MM-DD");
  return day;
}

std::atomic<bool> g_reload{false};
std::atomic<bool> g_stop{false};

extern "C" void on_signal(int sig) {
  if (sig == SIGHUP) {
    g_reload = true;
  } else {
    g_stop = true;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Controversy scoring and exploration for per-topic retweet graphs", "polar"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--seed", flags.seed, "Seed for every randomized stage, or 'entropy'")
      ->capture_default_str();
  app.add_option("--balance-eps", flags.balance_eps, "Bipartition balance tolerance")
      ->capture_default_str();
  app.add_option("--authorities-k", flags.authorities_k, "Authorities per side")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", flags.mode, "Controversy solver: auto, exact or montecarlo")
      ->capture_default_str();
  app.add_option("--walks", flags.walks, "Monte Carlo walks per side")
      ->capture_default_str();
  app.add_option("--min-users", flags.min_users, "Minimum distinct users per topic")
      ->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Write a synthetic corpus plus a ground-truth sidecar");
  std::string scenario;
  std::string gen_out;
  GenParams gen_params;
  std::string gen_day;
  gen->add_option("scenario", scenario, "barbell | single-community | planted")->required();
  gen->add_option("-o,--out", gen_out, "Corpus path; truth goes to <out>.truth.json")
      ->required();
  gen->add_option("--clique-size", gen_params.clique_size, "Barbell clique size")
      ->capture_default_str();
  gen->add_option("--bridges", gen_params.bridges, "Barbell bridge retweets")
      ->capture_default_str();
  gen->add_option("-n,--vertices", gen_params.n, "Users (single-community, planted)")
      ->capture_default_str();
  gen->add_option("-p,--p", gen_params.p, "Edge probability (single-community)")
      ->capture_default_str();
  gen->add_option("--p-in", gen_params.p_in, "Intra-block probability (planted)")
      ->capture_default_str();
  gen->add_option("--p-out", gen_params.p_out, "Inter-block probability (planted)")
      ->capture_default_str();
  gen->add_option("--hashtag", gen_params.hashtag, "Topic hashtag");
  gen->add_option("--day", gen_day, "UTC day of the activity (YYYY-MM-DD)");

  // process
  auto* process = app.add_subcommand("process", "Score every qualifying topic of a corpus");
  std::string corpus_path;
  std::string data_dir = "data";
  std::string from_day, to_day;
  unsigned jobs = 1;
  size_t keywords = 10, representatives = 3;
  std::string stopwords_path;
  int layout_iterations = 600;
  bool layout_approx = false;
  process->add_option("corpus", corpus_path, "Newline-delimited corpus (.gz accepted)")
      ->required();
  process->add_option("--data-dir", data_dir, "Store directory")->capture_default_str();
  process->add_option("--from", from_day, "First day to process");
  process->add_option("--to", to_day, "Last day to process");
  process->add_option("-j,--jobs", jobs, "Topics processed in parallel")->capture_default_str();
  process->add_option("--keywords", keywords, "Related keywords per topic")
      ->capture_default_str();
  process->add_option("--representatives", representatives, "Representative tweets per side")
      ->capture_default_str();
  process->add_option("--stopwords", stopwords_path, "Replacement stopword list");
  process->add_option("--layout-iterations", layout_iterations, "ForceAtlas2 iterations")
      ->capture_default_str();
  process->add_flag("--layout-approx", layout_approx, "Barnes-Hut repulsion in the layout");

  // export
  auto* exporter = app.add_subcommand("export", "Export a stored topic's retweet graph");
  std::string export_day, export_tag, export_format = "json", export_out;
  exporter->add_option("day", export_day, "YYYY-MM-DD")->required();
  exporter->add_option("hashtag", export_tag, "Topic hashtag")->required();
  exporter->add_option("--format", export_format, "json | gexf")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "gexf"}));
  exporter->add_option("-o,--out", export_out, "Output file (default: stdout)");
  exporter->add_option("--data-dir", data_dir, "Store directory")->capture_default_str();

  // serve
  auto* serve = app.add_subcommand("serve", "Serve the exploration API (and web client)");
  ApiConfig api;
  std::string bind = "127.0.0.1:8080";
  std::string static_dir;
  serve->add_option("--bind", bind, "host:port")->capture_default_str();
  serve->add_option("--data-dir", data_dir, "Store directory")->capture_default_str();
  serve->add_option("--static-dir", static_dir, "Web client bundle to serve at /");
  serve->add_option("--page-size", api.page_size, "Default page size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  serve->add_option("--cors", api.cors_allow, "Allowed CORS origins");

  // verify
  auto* verify = app.add_subcommand("verify", "Check index/record consistency of a store");
  bool rebuild = false;
  verify->add_option("--data-dir", data_dir, "Store directory")->capture_default_str();
  verify->add_flag("--rebuild", rebuild, "Rebuild the index before checking");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*gen) {
      auto kind = parse_scenario(scenario);
      if (!kind) throw Error(Errc::kInvalidArgument, "unknown scenario '" + scenario + "'");
      gen_params.scenario = *kind;
      gen_params.seed = resolve_seed(flags.seed);
      if (auto day = resolve_day(gen_day, "--day")) gen_params.day = *day;
      GeneratedCorpus corpus = generate_corpus(gen_params);
      write_corpus(gen_out, corpus.records);
      std::ofstream truth(gen_out + ".truth.json");
      truth << corpus.truth().dump(2) << '\n';
      if (!truth) throw Error(Errc::kIoError, "cannot write " + gen_out + ".truth.json");
      std::cout << "wrote " << corpus.records.size() << " records for #" << corpus.hashtag
                << " to " << gen_out << '\n';
      return 0;
    }

    if (*process) {
      PipelineParams params;
      params.bucket.min_users = flags.min_users;
      params.score.balance_eps = flags.balance_eps;
      params.score.authorities_k = flags.authorities_k;
      params.score.mode = resolve_mode(flags.mode);
      params.score.walks = flags.walks;
      params.score.seed = resolve_seed(flags.seed);
      params.layout.seed = params.score.seed;
      params.layout.iterations = layout_iterations;
      if (layout_approx) params.layout.repulsion_mode = Repulsion::kBarnesHut;
      params.keywords = keywords;
      params.representatives = representatives;
      params.jobs = jobs;
      std::optional<Stopwords> stopwords;
      if (!stopwords_path.empty()) {
        stopwords = Stopwords::from_file(stopwords_path);
        params.stopwords = &*stopwords;
      }
      TopicStore store(data_dir);
      ProcessReport report = process_corpus(corpus_path, resolve_day(from_day, "--from"),
                                            resolve_day(to_day, "--to"), params, store);
      std::cout << "records: " << report.corpus.parsed << " parsed, "
                << report.corpus.malformed << " malformed; topics: " << report.succeeded
                << " stored, " << report.failures.size() << " failed\n";
      return report.exit_code();
    }

    if (*exporter) {
      auto day = resolve_day(export_day, "day");
      TopicStore store(data_dir, TopicStore::Mode::kReadOnly);
      TopicRecord record = store.get(*day, export_tag);
      const std::string text = export_format == "gexf" ? to_gexf(record.graph)
                                                       : to_node_link(record.graph).dump(2) + "\n";
      if (export_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(export_out, std::ios::binary);
        out << text;
        if (!out) throw Error(Errc::kIoError, "cannot write " + export_out);
      }
      return 0;
    }

    if (*serve) {
      const auto colon = bind.rfind(':');
      if (colon == std::string::npos) throw Error(Errc::kInvalidArgument, "--bind must be host:port");
      api.bind_address = bind.substr(0, colon);
      api.port = std::stoi(bind.substr(colon + 1));
      api.data_dir = data_dir;
      if (!static_dir.empty()) api.static_dir = static_dir;
      ExplorerServer server(api);
      const int port = server.bind();
      spdlog::info("serving {} on {}:{}", data_dir, api.bind_address, port);
      std::signal(SIGHUP, on_signal);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::atomic<bool> done{false};
      std::thread watcher([&] {
        while (!done) {
          if (g_reload.exchange(false)) {
            server.api().reload();
            spdlog::info("store reloaded");
          }
          if (g_stop) {
            server.stop();
            break;
          }
          std::this_thread::sleep_for(std::chrono::milliseconds(100));
        }
      });
      server.serve();
      done = true;
      watcher.join();
      return 0;
    }

    if (*verify) {
      if (!std::filesystem::is_directory(data_dir)) {
        throw Error(Errc::kIoError, "no store at " + data_dir);
      }
      TopicStore store(data_dir, rebuild ? TopicStore::Mode::kReadWrite
                                         : TopicStore::Mode::kReadOnly);
      if (rebuild) store.rebuild_index();
      TopicStore::VerifyReport report = store.verify();
      for (const auto& problem : report.problems) std::cout << "problem: " << problem << '\n';
      std::cout << report.checked << " topic(s) checked, " << report.problems.size()
                << " problem(s)\n";
      return report.ok() ? 0 : 1;
    }
  } catch (const Error& e) {
    std::cerr << "polar: " << errc_name(e.code()) << ": " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "polar: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}

}  // namespace polar
