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

#ifndef POLAR_TIME_H_
#define POLAR_TIME_H_

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace polar {

using Timestamp = std::chrono::sys_seconds;

// A UTC calendar date. Always holds a valid date.
class Day {
 public:
  Day() = default;
  explicit Day(std::chrono::year_month_day ymd) : ymd_(ymd) {}

  static Day of(Timestamp t);
  // Strict "YYYY-MM-DD"; nullopt for anything else, including impossible
  // dates such as 2015-02-30.
  static std::optional<Day> parse(std::string_view text);

  std::string to_string() const;
  std::chrono::sys_days sys_days() const { return std::chrono::sys_days{ymd_}; }
  const std::chrono::year_month_day& ymd() const { return ymd_; }

  friend bool operator==(const Day& a, const Day& b) { return a.ymd_ == b.ymd_; }
  friend auto operator<=>(const Day& a, const Day& b) { return a.ymd_ <=> b.ymd_; }

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::January,
                                   std::chrono::day{1}};
};

// RFC 3339 date-time. Fractional seconds are truncated; numeric offsets are
// normalized to UTC.
std::optional<Timestamp> parse_rfc3339(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_rfc3339(Timestamp t);

}  // namespace polar

#endif  // POLAR_TIME_H_
