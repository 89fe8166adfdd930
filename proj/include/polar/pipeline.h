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

#ifndef POLAR_PIPELINE_H_
#define POLAR_PIPELINE_H_

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polar/controversy.h"
#include "polar/ingest.h"
#include "polar/layout.h"
#include "polar/store.h"
#include "polar/summary.h"

namespace polar {

std::string_view software_version();

struct PipelineParams {
  BucketOptions bucket;
  ScoreOptions score;
  LayoutParams layout;
  size_t keywords = 10;
  size_t representatives = 3;
  unsigned jobs = 1;
  const Stopwords* stopwords = nullptr;  // null: built-in list
};

// graph -> largest component -> bipartition -> score -> layout -> summary.
TopicRecord process_topic(const TopicActivity& activity, const PipelineParams& params);

struct TopicFailure {
  Day day;
  std::string hashtag;
  std::string error;
};

struct ProcessReport {
  CorpusStats corpus;
  size_t days = 0;
  size_t attempted = 0;
  size_t succeeded = 0;
  std::vector<TopicFailure> failures;

  // 2 when topics were attempted and none succeeded, else 0.
  int exit_code() const { return attempted > 0 && succeeded == 0 ? 2 : 0; }
};

// Processes every qualifying topic of every day in [from, to] (all days when
// unset) and writes the records in (day, hashtag) order. Per-topic failures
// are logged and counted. Output does not depend on params.jobs.
ProcessReport process_records(std::span<const TweetRecord> records, std::optional<Day> from,
                              std::optional<Day> to, const PipelineParams& params,
                              TopicStore& store);

// read_corpus + process_records. Throws Error(kIoError).
ProcessReport process_corpus(const std::filesystem::path& corpus, std::optional<Day> from,
                             std::optional<Day> to, const PipelineParams& params,
                             TopicStore& store);

}  // namespace polar

#endif  // POLAR_PIPELINE_H_
