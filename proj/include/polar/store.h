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

#ifndef POLAR_STORE_H_
#define POLAR_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "polar/controversy.h"
#include "polar/graph.h"
#include "polar/layout.h"
#include "polar/partition.h"
#include "polar/summary.h"
#include "polar/time.h"

namespace polar {

inline constexpr int kSchemaVersion = 1;

struct GraphStats {
  size_t users = 0;       // vertices of the full retweet graph
  size_t vertices = 0;    // vertices of the scored (largest) component
  size_t edges = 0;       // undirected edges of the scored component
  size_t tweets = 0;
  double largest_component_fraction = 0.0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

struct Provenance {
  uint64_t seed = 42;
  double balance_eps = 0.05;
  size_t authorities_k = 10;
  std::string mode = "auto";
  uint64_t walks = 10000;
  size_t min_users = 50;
  LayoutParams layout;
  std::string software_version;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct LayoutInfo {
  bool converged = false;
  int iterations = 0;
  double final_mean_displacement = 0.0;

  friend bool operator==(const LayoutInfo&, const LayoutInfo&) = default;
};

// The persisted unit: one (hashtag, day) topic with everything needed to
// browse it.
struct TopicRecord {
  std::string hashtag;
  Day day;
  GraphStats stats;
  RetweetGraph graph;         // the scored component
  Partition partition;
  RwcScore score;
  nlohmann::json layout;      // render payload
  LayoutInfo layout_info;
  TopicSummary summary;
  Provenance provenance;

  friend bool operator==(const TopicRecord&, const TopicRecord&) = default;
};

nlohmann::json to_json(const TopicRecord& record);
// Throws Error(kCorruptRecord) on schema violations.
TopicRecord topic_record_from_json(const nlohmann::json& doc);
// First inconsistency between the embedded objects, or nullopt.
std::optional<std::string> validate(const TopicRecord& record);

struct TopicIndexEntry {
  std::string hashtag;
  Day day;
  double display_score = 0.0;
  double rwc_raw = 0.0;
  size_t vertices = 0;
  std::vector<std::string> keywords;

  friend bool operator==(const TopicIndexEntry&, const TopicIndexEntry&) = default;
};

TopicIndexEntry index_entry(const TopicRecord& record);
nlohmann::json to_json(const TopicIndexEntry& entry);
TopicIndexEntry index_entry_from_json(const nlohmann::json& doc);

enum class SortKey { kScore, kDate };

std::optional<SortKey> parse_sort_key(std::string_view text);
std::string_view sort_key_name(SortKey key);

struct TopicQuery {
  SortKey sort = SortKey::kScore;
  std::string text;  // case-folded substring of hashtag or any keyword
  size_t page = 0;
  size_t page_size = 20;
};

struct QueryPage {
  std::vector<TopicIndexEntry> entries;
  size_t total = 0;  // matches before pagination
};

// score: display_score desc, day desc, hashtag asc.
// date:  day desc, display_score desc, hashtag asc.
QueryPage query_index(std::span<const TopicIndexEntry> entries, const TopicQuery& query);

// Filesystem-safe name: bytes outside [a-z0-9_] become %XX.
std::string encode_hashtag(std::string_view hashtag);

// Directory-backed store: <root>/topics/YYYY-MM-DD/<hashtag>.json plus
// <root>/index.json. One writer, many readers; documents are replaced by
// rename so readers never see partial writes.
class TopicStore {
 public:
  enum class Mode { kReadWrite, kReadOnly };
  enum class PutOutcome { kCreated, kUnchanged, kOverwritten };

  struct RebuildReport {
    size_t indexed = 0;
    std::vector<std::filesystem::path> skipped;
  };

  struct VerifyReport {
    size_t checked = 0;
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
  };

  explicit TopicStore(std::filesystem::path root, Mode mode = Mode::kReadWrite);

  // Throws kValidationFailed, kStorageFull, kIoError.
  PutOutcome put(const TopicRecord& record);

  // Throws kNotFound, kCorruptRecord.
  TopicRecord get(Day day, std::string_view hashtag) const;
  // The stored document, after the same checks as get().
  std::string get_document(Day day, std::string_view hashtag) const;

  QueryPage query(const TopicQuery& query) const { return query_index(entries_, query); }
  const std::vector<TopicIndexEntry>& entries() const { return entries_; }

  // Re-scans all record files; corrupt ones are skipped with a warning.
  RebuildReport rebuild_index();
  // Index/record consistency check.
  VerifyReport verify() const;

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path record_path(Day day, std::string_view hashtag) const;

 private:
  void write_index() const;
  bool load_index();

  std::filesystem::path root_;
  Mode mode_;
  std::vector<TopicIndexEntry> entries_;  // sorted by (day, hashtag)
};

}  // namespace polar

#endif  // POLAR_STORE_H_
