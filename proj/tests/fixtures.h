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

#ifndef POLAR_TESTS_FIXTURES_H_
#define POLAR_TESTS_FIXTURES_H_

#include <string>

#include "polar/corpus_gen.h"
#include "polar/pipeline.h"

namespace polar::testing {

inline PipelineParams small_params() {
  PipelineParams params;
  params.bucket.min_users = 2;
  params.score.authorities_k = 2;
  params.layout.iterations = 150;
  return params;
}

// A processed topic built from a generated corpus.
inline TopicRecord make_record(Scenario scenario, const std::string& hashtag, const char* day,
                               uint64_t seed = 42, size_t size = 8) {
  GenParams gen;
  gen.scenario = scenario;
  gen.hashtag = hashtag;
  gen.day = *Day::parse(day);
  gen.seed = seed;
  gen.clique_size = size;
  gen.n = 2 * size;
  gen.p = 0.3;
  GeneratedCorpus corpus = generate_corpus(gen);
  PipelineParams params = small_params();
  params.score.seed = seed;
  auto topics = bucket_topics(corpus.records, gen.day, params.bucket);
  return process_topic(topics.at(hashtag), params);
}

}  // namespace polar::testing

#endif  // POLAR_TESTS_FIXTURES_H_
