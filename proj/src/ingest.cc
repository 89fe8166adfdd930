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

#include "polar/ingest.h"

#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>
#include <zlib.h>

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include "json.hpp"
#include "polar/error.h"

namespace polar {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(Errc::kMalformedRecord, what);
}

const std::string& required_string(const json& object, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) malformed(std::string("missing field '") + key + "'");
  if (!it->is_string()) malformed(std::string("field '") + key + "' is not a string");
  return it->get_ref<const std::string&>();
}

bool is_tag_char(UChar32 c) { return c == '_' || u_isalpha(c) || u_isdigit(c); }

// Scans `text` for tag bodies; calls `emit(body)` for each accepted one.
template <typename Emit>
void scan_hashtags(std::string_view text, Emit emit) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const int32_t length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c != '#') continue;
    const int32_t start = i;
    int32_t end = i;
    bool all_digits = true;
    while (end < length) {
      int32_t next = end;
      UChar32 d;
      U8_NEXT(s, next, length, d);
      if (d < 0 || !is_tag_char(d)) break;
      if (!u_isdigit(d)) all_digits = false;
      end = next;
    }
    if (end > start && !all_digits) emit(text.substr(start, end - start));
    i = end;
  }
}

}  // namespace

bool TweetRecord::has_hashtag(std::string_view tag) const {
  return std::find(hashtags.begin(), hashtags.end(), tag) != hashtags.end();
}

std::string fold_case(std::string_view utf8) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  s.foldCase(U_FOLD_CASE_DEFAULT);
  std::string out;
  s.toUTF8String(out);
  return out;
}

std::vector<std::string> extract_hashtags(std::string_view text) {
  std::vector<std::string> tags;
  scan_hashtags(text, [&](std::string_view body) {
    std::string folded = fold_case(body);
    if (std::find(tags.begin(), tags.end(), folded) == tags.end()) {
      tags.push_back(std::move(folded));
    }
  });
  return tags;
}

std::optional<std::string> normalize_hashtag(std::string_view tag) {
  std::string prefixed = "#";
  prefixed.append(tag.starts_with('#') ? tag.substr(1) : tag);
  std::optional<std::string> result;
  size_t accepted = 0;
  scan_hashtags(prefixed, [&](std::string_view body) {
    if (++accepted == 1 && body.size() + 1 == prefixed.size()) {
      result = fold_case(body);
    }
  });
  if (accepted != 1) return std::nullopt;
  return result;
}

TweetRecord parse_record(std::string_view line) {
  json doc = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) malformed("not a JSON document");
  if (!doc.is_object()) malformed("record is not an object");

  TweetRecord record;
  record.tweet_id = required_string(doc, "id");
  record.author_id = required_string(doc, "user");
  record.text = required_string(doc, "text");
  if (record.tweet_id.empty()) malformed("empty id");
  if (record.author_id.empty()) malformed("empty user");
  auto ts = parse_rfc3339(required_string(doc, "ts"));
  if (!ts) malformed("unparseable timestamp");
  record.timestamp = *ts;

  if (auto it = doc.find("tags"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) malformed("'tags' is not an array");
    for (const auto& tag : *it) {
      if (!tag.is_string()) malformed("'tags' entry is not a string");
      auto normalized = normalize_hashtag(tag.get_ref<const std::string&>());
      if (!normalized) continue;
      if (!record.has_hashtag(*normalized)) record.hashtags.push_back(*normalized);
    }
  } else {
    record.hashtags = extract_hashtags(record.text);
  }

  if (auto it = doc.find("rt"); it != doc.end() && !it->is_null()) {
    if (!it->is_object()) malformed("'rt' is not an object");
    RetweetRef ref{required_string(*it, "id"), required_string(*it, "user")};
    if (ref.author_id.empty()) malformed("empty 'rt.user'");
    record.retweet_of = std::move(ref);
  }
  return record;
}

std::string serialize_record(const TweetRecord& record) {
  json doc = {{"id", record.tweet_id},
              {"user", record.author_id},
              {"ts", format_rfc3339(record.timestamp)},
              {"text", record.text},
              {"tags", record.hashtags}};
  if (record.retweet_of) {
    doc["rt"] = {{"id", record.retweet_of->tweet_id},
                 {"user", record.retweet_of->author_id}};
  }
  return doc.dump();
}

std::map<std::string, TopicActivity> bucket_topics(std::span<const TweetRecord> records,
                                                   Day day,
                                                   const BucketOptions& options) {
  std::map<std::string, TopicActivity> topics;
  for (const TweetRecord& record : records) {
    if (Day::of(record.timestamp) != day) continue;
    for (const std::string& tag : record.hashtags) {
      auto [it, inserted] = topics.try_emplace(tag);
      TopicActivity& activity = it->second;
      if (inserted) {
        activity.hashtag = tag;
        activity.day = day;
      }
      activity.tweets.push_back(record);
      activity.users.insert(record.author_id);
    }
  }
  std::erase_if(topics, [&](const auto& entry) {
    return entry.second.users.size() < options.min_users;
  });
  return topics;
}

namespace {

// Line reader over plain or gzip-compressed files.
class LineSource {
 public:
  explicit LineSource(const std::filesystem::path& path) {
    if (path.extension() == ".gz") {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) {
        throw Error(Errc::kIoError, "cannot open corpus " + path.string());
      }
    } else {
      in_.open(path, std::ios::binary);
      if (!in_) throw Error(Errc::kIoError, "cannot open corpus " + path.string());
    }
  }
  ~LineSource() {
    if (gz_ != nullptr) gzclose(gz_);
  }
  LineSource(const LineSource&) = delete;
  LineSource& operator=(const LineSource&) = delete;

  bool next(std::string& line) {
    if (gz_ == nullptr) {
      if (!std::getline(in_, line)) {
        if (in_.bad()) throw Error(Errc::kIoError, "read error");
        return false;
      }
      return true;
    }
    line.clear();
    char buf[8192];
    while (gzgets(gz_, buf, sizeof(buf)) != nullptr) {
      line.append(buf);
      if (!line.empty() && line.back() == '\n') {
        line.pop_back();
        return true;
      }
    }
    int err = 0;
    gzerror(gz_, &err);
    if (err != Z_OK && err != Z_STREAM_END) {
      throw Error(Errc::kIoError, "corrupt gzip stream");
    }
    return !line.empty();
  }

 private:
  std::ifstream in_;
  gzFile gz_ = nullptr;
};

}  // namespace

Corpus read_corpus(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec)) {
    throw Error(Errc::kIoError, path.string() + " is a directory");
  }
  LineSource source(path);
  Corpus corpus;
  std::unordered_set<std::string> seen;
  std::string line;
  while (source.next(line)) {
    ++corpus.stats.lines;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) {
      ++corpus.stats.blank;
      continue;
    }
    try {
      TweetRecord record = parse_record(line);
      if (!seen.insert(record.tweet_id).second) {
        ++corpus.stats.duplicates;
        continue;
      }
      corpus.records.push_back(std::move(record));
      ++corpus.stats.parsed;
    } catch (const Error&) {
      ++corpus.stats.malformed;
    }
  }
  return corpus;
}

std::vector<Day> corpus_days(std::span<const TweetRecord> records) {
  std::set<Day> days;
  for (const auto& record : records) days.insert(Day::of(record.timestamp));
  return {days.begin(), days.end()};
}

}  // namespace polar
