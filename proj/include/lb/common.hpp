// Copyright 2026 The latblossom Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LB_COMMON_HPP
#define LB_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lb {

enum class ErrorCode {
    NonEmptySyndrome,
    OutOfOrderRound,
    GraphInfeasible,
    NoProgress,
    ExpandNonzeroY,
    ExpandOuter,
    NotSameTree,
    InvalidMark,
    TooLarge,
    NoCrossing,
    BadInput,
};

/// Library error carrying a machine-checkable code alongside the message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

/// Thrown when matching would need detection data from rounds that have not
/// been measured yet. Callers roll the current tree back and retry later.
class FutureDataNeeded : public std::runtime_error {
  public:
    explicit FutureDataNeeded(int32_t round)
        : std::runtime_error("matching requires data beyond the newest measured round"),
          round_(round) {}
    int32_t round() const { return round_; }

  private:
    int32_t round_;
};

}  // namespace lb

#endif
