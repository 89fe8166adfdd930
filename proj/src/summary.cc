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

#include "polar/summary.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "polar/controversy.h"
#include "polar/error.h"

namespace polar {

namespace detail {
extern const std::string_view kBuiltinStopwords;
}  // namespace detail

Stopwords Stopwords::parse(std::string_view text) {
  Stopwords out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos || line[begin] == '#') continue;
    const auto end = line.find_last_not_of(" \t\r");
    out.words_.insert(fold_case(line.substr(begin, end - begin + 1)));
  }
  return out;
}

Stopwords Stopwords::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot read stopwords " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const Stopwords& Stopwords::builtin() {
  static const Stopwords words = parse(detail::kBuiltinStopwords);
  return words;
}

namespace {

// Folded words of `text` outside hashtags, mentions and URLs.
std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  UChar32 before = ' ';
  while (i < length) {
    int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    const bool word_char = c == '_' || u_isalpha(c) || u_isdigit(c);
    if (!word_char) {
      before = c;
      continue;
    }
    int32_t end = i;
    int32_t chars = 1;
    bool has_letter = u_isalpha(c);
    while (end < length) {
      int32_t next = end;
      UChar32 d;
      U8_NEXT(s, next, length, d);
      if (d < 0 || !(d == '_' || u_isalpha(d) || u_isdigit(d))) break;
      has_letter = has_letter || u_isalpha(d);
      ++chars;
      end = next;
    }
    std::string_view run = text.substr(start, end - start);
    const bool url = end < length && text.substr(end).starts_with("://");
    if (url) {
      // Skip to the next whitespace.
      while (end < length && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    } else if (before != '#' && before != '@' && chars >= 3 && has_letter) {
      out.push_back(fold_case(run));
    }
    i = end;
    before = 'a';
  }
  return out;
}

}  // namespace

std::vector<Keyword> related_keywords(const TopicActivity& activity, size_t n,
                                      const Stopwords& stopwords) {
  if (n == 0) throw Error(Errc::kInvalidArgument, "n must be at least 1");
  std::map<std::string, size_t> frequency;
  for (const TweetRecord& tweet : activity.tweets) {
    std::set<std::string> terms(tweet.hashtags.begin(), tweet.hashtags.end());
    for (std::string& word : words_of(tweet.text)) {
      if (!stopwords.contains(word)) terms.insert(std::move(word));
    }
    terms.erase(activity.hashtag);
    for (const std::string& term : terms) ++frequency[term];
  }
  std::vector<Keyword> ranked;
  ranked.reserve(frequency.size());
  for (auto& [term, count] : frequency) ranked.push_back({term, count});
  std::stable_sort(ranked.begin(), ranked.end(), [](const Keyword& a, const Keyword& b) {
    return a.score > b.score;  // map order already sorts terms ascending
  });
  if (ranked.size() > n) ranked.resize(n);
  return ranked;
}

std::array<std::vector<RepresentativeTweet>, 2> representative_tweets(
    const TopicActivity& activity, const RetweetGraph& graph, const Partition& p, size_t m) {
  if (m == 0) throw Error(Errc::kInvalidArgument, "m must be at least 1");
  std::unordered_map<std::string_view, size_t> retweets;
  for (const TweetRecord& t : activity.tweets) {
    if (t.retweet_of) ++retweets[t.retweet_of->tweet_id];
  }
  // Best original per author.
  std::unordered_map<std::string_view, const TweetRecord*> best;
  auto better = [&](const TweetRecord& a, const TweetRecord& b) {
    const size_t ra = retweets.count(a.tweet_id) ? retweets.at(a.tweet_id) : 0;
    const size_t rb = retweets.count(b.tweet_id) ? retweets.at(b.tweet_id) : 0;
    if (ra != rb) return ra > rb;
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.tweet_id < b.tweet_id;
  };
  for (const TweetRecord& t : activity.tweets) {
    if (t.retweet_of) continue;
    auto [it, inserted] = best.try_emplace(t.author_id, &t);
    if (!inserted && better(t, *it->second)) it->second = &t;
  }

  std::array<std::vector<RepresentativeTweet>, 2> out;
  for (Side side : {Side::kX, Side::kY}) {
    const size_t side_size = p.count(side);
    if (side_size == 0) continue;
    const AuthoritySet order = select_authorities(graph, p, side, side_size);
    auto& list = out[static_cast<size_t>(side)];
    for (VertexId v : order.vertices) {
      if (list.size() >= m) break;
      auto it = best.find(graph.users[v]);
      if (it == best.end()) continue;
      list.push_back({graph.users[v], it->second->tweet_id, it->second->text,
                      graph.endorsements[v]});
    }
  }
  return out;
}

TopicSummary summarize_topic(const TopicActivity& activity, const RetweetGraph& graph,
                             const Partition& p, size_t keywords, size_t representatives,
                             const Stopwords& stopwords) {
  TopicSummary summary;
  summary.hashtag = activity.hashtag;
  summary.related_keywords = related_keywords(activity, keywords, stopwords);
  summary.representative = representative_tweets(activity, graph, p, representatives);
  return summary;
}

}  // namespace polar
