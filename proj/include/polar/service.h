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

#ifndef POLAR_SERVICE_H_
#define POLAR_SERVICE_H_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "polar/store.h"

namespace polar {

struct ApiConfig {
  std::string bind_address = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path data_dir = "data";
  std::optional<std::filesystem::path> static_dir;
  size_t page_size = 20;
  std::vector<std::string> cors_allow;  // origins, or "*"
};

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent handlers over a read-only store snapshot. Reloading
// swaps the snapshot; in-flight requests keep the one they started with.
class ExplorerApi {
 public:
  explicit ExplorerApi(ApiConfig config);

  // GET /api/topics?sort=score|date&q=text&page=n[&page_size=n]
  ApiResponse list_topics(const std::map<std::string, std::string>& params) const;
  // GET /api/topics/{day}/{hashtag}
  ApiResponse get_topic(std::string_view day, std::string_view hashtag) const;
  // GET /api/health
  ApiResponse health() const;

  void reload();
  const ApiConfig& config() const { return config_; }

 private:
  std::shared_ptr<const TopicStore> snapshot() const;

  ApiConfig config_;
  mutable std::mutex mutex_;
  std::shared_ptr<const TopicStore> store_;
};

ApiResponse error_response(int status, std::string_view code, std::string_view message);

// HTTP/1.1 front end for ExplorerApi; also serves the web client's static
// bundle when a directory is configured.
class ExplorerServer {
 public:
  explicit ExplorerServer(ApiConfig config);
  ~ExplorerServer();
  ExplorerServer(const ExplorerServer&) = delete;
  ExplorerServer& operator=(const ExplorerServer&) = delete;

  // Binds the socket; returns the bound port. Throws Error(kIoError).
  int bind();
  // Blocks until stop(). bind() must have succeeded.
  void serve();
  // bind() + serve() on a background thread.
  int start();
  void stop();

  ExplorerApi& api() { return *api_; }

 private:
  struct Impl;
  std::unique_ptr<ExplorerApi> api_;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace polar

#endif  // POLAR_SERVICE_H_
