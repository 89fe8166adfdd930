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

#ifndef POLAR_ERROR_H_
#define POLAR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace polar {

enum class Errc {
  kMalformedRecord,
  kEmptyActivity,
  kEmptyGraph,
  kInfeasibleBalance,
  kEmptySide,
  kDomainError,
  kNoTransientStart,
  kDisconnected,
  kZeroWalks,
  kDimensionMismatch,
  kValidationFailed,
  kStorageFull,
  kCorruptRecord,
  kNotFound,
  kInvalidArgument,
  kIoError,
  kSolverFailure,
};

std::string_view errc_name(Errc code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI, HTTP layer) can map it without string matching.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace polar

#endif  // POLAR_ERROR_H_
