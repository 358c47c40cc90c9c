// Copyright 2026 The noisy-lll Authors. All rights reserved.
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nlll {

enum class ErrorKind {
  kInvalidTopology,
  kInvalidParameter,
  kInvalidInput,
  kDimension,
  kConfiguration,
  kUnsupportedCombination,
  kEnumerationInfeasible,
  kNumericalFailure,
  kParse,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidTopology: return "invalid topology";
    case ErrorKind::kInvalidParameter: return "invalid parameter";
    case ErrorKind::kInvalidInput: return "invalid input";
    case ErrorKind::kDimension: return "dimension mismatch";
    case ErrorKind::kConfiguration: return "configuration error";
    case ErrorKind::kUnsupportedCombination: return "unsupported combination";
    case ErrorKind::kEnumerationInfeasible: return "enumeration infeasible";
    case ErrorKind::kNumericalFailure: return "numerical failure";
    case ErrorKind::kParse: return "parse error";
  }
  return "error";
}

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace nlll
