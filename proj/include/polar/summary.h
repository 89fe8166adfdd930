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

#ifndef POLAR_SUMMARY_H_
#define POLAR_SUMMARY_H_

#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "polar/graph.h"
#include "polar/ingest.h"
#include "polar/partition.h"

namespace polar {

class Stopwords {
 public:
  // One word per line, '#' comments, case-folded on load.
  static Stopwords parse(std::string_view text);
  static Stopwords from_file(const std::filesystem::path& path);
  // The 200-word English list shipped in data/stopwords_en.txt.
  static const Stopwords& builtin();

  bool contains(std::string_view word) const { return words_.count(std::string(word)) > 0; }
  size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

struct Keyword {
  std::string term;
  size_t score = 0;  // number of tweets containing the term

  friend bool operator==(const Keyword&, const Keyword&) = default;
};

struct RepresentativeTweet {
  std::string user_id;
  std::string tweet_id;
  std::string text;
  Weight endorsements = 0;

  friend bool operator==(const RepresentativeTweet&, const RepresentativeTweet&) = default;
};

struct TopicSummary {
  std::string hashtag;
  std::vector<Keyword> related_keywords;
  std::array<std::vector<RepresentativeTweet>, 2> representative;  // by Side

  friend bool operator==(const TopicSummary&, const TopicSummary&) = default;
};

// Co-occurring hashtags and non-stopword words of at least 3 characters,
// scored by document frequency; top n by (score desc, term asc). The topic's
// own hashtag is never returned.
std::vector<Keyword> related_keywords(const TopicActivity& activity, size_t n,
                                      const Stopwords& stopwords = Stopwords::builtin());

// Per side, authors in authority order, each contributing their most
// retweeted original tweet (ties: earliest), up to m distinct authors.
std::array<std::vector<RepresentativeTweet>, 2> representative_tweets(
    const TopicActivity& activity, const RetweetGraph& graph, const Partition& p, size_t m);

TopicSummary summarize_topic(const TopicActivity& activity, const RetweetGraph& graph,
                             const Partition& p, size_t keywords, size_t representatives,
                             const Stopwords& stopwords = Stopwords::builtin());

}  // namespace polar

#endif  // POLAR_SUMMARY_H_
