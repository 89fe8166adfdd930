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

#include "polar/service.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <charconv>

#include "httplib.h"
#include "json.hpp"
#include "polar/error.h"

namespace polar {

using nlohmann::json;

ApiResponse error_response(int status, std::string_view code, std::string_view message) {
  json body = {{"error", {{"code", code}, {"message", message}}}};
  return {status, body.dump(), "application/json"};
}

namespace {

std::optional<size_t> parse_count(const std::string& text) {
  size_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

}  // namespace

ExplorerApi::ExplorerApi(ApiConfig config) : config_(std::move(config)) {
  if (config_.page_size == 0) throw Error(Errc::kInvalidArgument, "page_size must be >= 1");
  reload();
}

void ExplorerApi::reload() {
  auto fresh = std::make_shared<const TopicStore>(config_.data_dir, TopicStore::Mode::kReadOnly);
  std::lock_guard lock(mutex_);
  store_ = std::move(fresh);
}

std::shared_ptr<const TopicStore> ExplorerApi::snapshot() const {
  std::lock_guard lock(mutex_);
  return store_;
}

ApiResponse ExplorerApi::list_topics(const std::map<std::string, std::string>& params) const {
  TopicQuery query;
  query.page_size = config_.page_size;
  if (auto it = params.find("sort"); it != params.end()) {
    auto key = parse_sort_key(it->second);
    if (!key) return error_response(400, "bad_request", "sort must be 'score' or 'date'");
    query.sort = *key;
  }
  if (auto it = params.find("q"); it != params.end()) query.text = it->second;
  if (auto it = params.find("page"); it != params.end()) {
    auto page = parse_count(it->second);
    if (!page) return error_response(400, "bad_request", "page must be a non-negative integer");
    query.page = *page;
  }
  if (auto it = params.find("page_size"); it != params.end()) {
    auto size = parse_count(it->second);
    if (!size || *size == 0 || *size > 500) {
      return error_response(400, "bad_request", "page_size must be in [1, 500]");
    }
    query.page_size = *size;
  }

  const QueryPage page = snapshot()->query(query);
  json entries = json::array();
  for (const auto& e : page.entries) entries.push_back(to_json(e));
  json body = {{"sort", sort_key_name(query.sort)},
               {"q", query.text},
               {"page", query.page},
               {"page_size", query.page_size},
               {"total", page.total},
               {"pages", (page.total + query.page_size - 1) / query.page_size},
               {"entries", std::move(entries)}};
  return {200, body.dump(), "application/json"};
}

ApiResponse ExplorerApi::get_topic(std::string_view day_text, std::string_view hashtag) const {
  auto day = Day::parse(day_text);
  if (!day) return error_response(400, "bad_request", "day must be YYYY-MM-DD");
  try {
    return {200, snapshot()->get_document(*day, hashtag), "application/json"};
  } catch (const Error& e) {
    if (e.code() == Errc::kNotFound) return error_response(404, "not_found", e.what());
    spdlog::error("topic {}/{}: {}", day_text, hashtag, e.what());
    return error_response(500, "corrupt_record", e.what());
  }
}

ApiResponse ExplorerApi::health() const {
  json body = {{"status", "ok"},
               {"topics_indexed", snapshot()->entries().size()},
               {"schema_version", kSchemaVersion}};
  return {200, body.dump(), "application/json"};
}

// ---------------------------------------------------------------------------

struct ExplorerServer::Impl {
  httplib::Server server;
  int port = -1;
};

namespace {

void send(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  res.set_content(api.body, api.content_type.c_str());
}

bool is_loopback(const std::string& addr) {
  return addr == "127.0.0.1" || addr == "::1" || addr.starts_with("::ffff:127.");
}

}  // namespace

ExplorerServer::ExplorerServer(ApiConfig config)
    : api_(std::make_unique<ExplorerApi>(std::move(config))), impl_(std::make_unique<Impl>()) {
  httplib::Server& s = impl_->server;
  ExplorerApi* api = api_.get();

  s.Get("/api/health", [api](const httplib::Request&, httplib::Response& res) {
    send(res, api->health());
  });
  s.Get("/api/topics", [api](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> params;
    for (const auto& [key, value] : req.params) params.emplace(key, value);
    send(res, api->list_topics(params));
  });
  s.Get(R"(/api/topics/([^/]+)/([^/]+))",
        [api](const httplib::Request& req, httplib::Response& res) {
          send(res, api->get_topic(req.matches[1].str(), req.matches[2].str()));
        });
  s.Post("/api/reload", [api](const httplib::Request& req, httplib::Response& res) {
    if (!is_loopback(req.remote_addr)) {
      send(res, error_response(403, "forbidden", "reload is only accepted from localhost"));
      return;
    }
    api->reload();
    send(res, api->health());
  });

  const std::vector<std::string> allow = api_->config().cors_allow;
  s.set_post_routing_handler([allow](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_header("Origin")) return;
    const std::string origin = req.get_header_value("Origin");
    const bool any = std::find(allow.begin(), allow.end(), "*") != allow.end();
    if (any || std::find(allow.begin(), allow.end(), origin) != allow.end()) {
      res.set_header("Access-Control-Allow-Origin", any ? "*" : origin);
      res.set_header("Vary", "Origin");
    }
  });
  s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty() && res.status == 404) {
      send(res, error_response(404, "not_found", "no such resource"));
    }
  });

  if (const auto& dir = api_->config().static_dir) {
    if (!s.set_mount_point("/", dir->string())) {
      spdlog::warn("static directory {} not found; serving the API only", dir->string());
    }
  }
}

ExplorerServer::~ExplorerServer() { stop(); }

int ExplorerServer::bind() {
  const ApiConfig& config = api_->config();
  if (config.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(config.bind_address);
  } else {
    impl_->port = impl_->server.bind_to_port(config.bind_address, config.port)
                      ? config.port
                      : -1;
  }
  if (impl_->port < 0) {
    throw Error(Errc::kIoError, "cannot bind " + config.bind_address + ":" +
                                    std::to_string(config.port));
  }
  return impl_->port;
}

void ExplorerServer::serve() { impl_->server.listen_after_bind(); }

int ExplorerServer::start() {
  const int port = bind();
  thread_ = std::thread([this] { serve(); });
  impl_->server.wait_until_ready();
  return port;
}

void ExplorerServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace polar
