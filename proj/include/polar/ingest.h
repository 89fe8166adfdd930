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

#ifndef POLAR_INGEST_H_
#define POLAR_INGEST_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "polar/time.h"

namespace polar {

struct RetweetRef {
  std::string tweet_id;
  std::string author_id;

  friend bool operator==(const RetweetRef&, const RetweetRef&) = default;
};

struct TweetRecord {
  std::string tweet_id;
  std::string author_id;
  Timestamp timestamp;
  std::string text;
  // Case-folded, without '#', unique, in order of first appearance.
  std::vector<std::string> hashtags;
  std::optional<RetweetRef> retweet_of;

  bool has_hashtag(std::string_view tag) const;

  friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

// Parses one corpus line:
//   {"id":..., "user":..., "ts": RFC 3339, "text":..., "tags":[...]?, "rt":{"id","user"}?}
// Unknown fields are ignored. Throws Error(kMalformedRecord).
TweetRecord parse_record(std::string_view line);

// Inverse of parse_record; always writes "tags".
std::string serialize_record(const TweetRecord& record);

// Unicode default case folding of a UTF-8 string.
std::string fold_case(std::string_view utf8);

// Hashtags in `text`: '#' followed by a maximal run of letters, decimal
// digits and '_'; all-digit runs are rejected. Folded, deduplicated, in order
// of first appearance.
std::vector<std::string> extract_hashtags(std::string_view text);

// Normalizes an externally supplied tag ("#SXSW" -> "sxsw"). Returns nullopt
// when the tag does not satisfy the hashtag grammar.
std::optional<std::string> normalize_hashtag(std::string_view tag);

struct TopicActivity {
  std::string hashtag;
  Day day;
  std::vector<TweetRecord> tweets;
  std::set<std::string> users;
};

struct BucketOptions {
  size_t min_users = 50;
};

// One activity per hashtag used on `day` by at least min_users distinct
// authors. Tweets keep their input order.
std::map<std::string, TopicActivity> bucket_topics(std::span<const TweetRecord> records,
                                                   Day day,
                                                   const BucketOptions& options = {});

struct CorpusStats {
  size_t lines = 0;
  size_t blank = 0;
  size_t parsed = 0;
  size_t malformed = 0;
  size_t duplicates = 0;
};

struct Corpus {
  std::vector<TweetRecord> records;
  CorpusStats stats;
};

// Reads a newline-delimited corpus; ".gz" files are decompressed. Malformed
// lines and repeated tweet ids are counted and skipped. Throws
// Error(kIoError) when the file cannot be read.
Corpus read_corpus(const std::filesystem::path& path);

// Distinct UTC days present in the records, ascending.
std::vector<Day> corpus_days(std::span<const TweetRecord> records);

}  // namespace polar

#endif  // POLAR_INGEST_H_
