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

#include "polar/error.h"

namespace polar {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedRecord: return "MalformedRecord";
    case Errc::kEmptyActivity: return "EmptyActivity";
    case Errc::kEmptyGraph: return "EmptyGraph";
    case Errc::kInfeasibleBalance: return "InfeasibleBalance";
    case Errc::kEmptySide: return "EmptySide";
    case Errc::kDomainError: return "DomainError";
    case Errc::kNoTransientStart: return "NoTransientStart";
    case Errc::kDisconnected: return "Disconnected";
    case Errc::kZeroWalks: return "ZeroWalks";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kValidationFailed: return "ValidationFailed";
    case Errc::kStorageFull: return "StorageFull";
    case Errc::kCorruptRecord: return "CorruptRecord";
    case Errc::kNotFound: return "NotFound";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIoError: return "IoError";
    case Errc::kSolverFailure: return "SolverFailure";
  }
  return "Unknown";
}

}  // namespace polar
