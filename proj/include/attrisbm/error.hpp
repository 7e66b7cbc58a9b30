// Copyright 2026 The attrisbm Authors.
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

#ifndef ATTRISBM_ERROR_HPP_
#define ATTRISBM_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace attrisbm {

enum class ErrorCode {
  kInvalidInput,
  kConstraintViolation,
  kPrecondition,
  kDegenerate,
  kBudget,
  kNumerical,
  kIo,
};

const char* ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception; `code()` lets
// callers (the CLI in particular) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
      return "invalid-input";
    case ErrorCode::kConstraintViolation:
      return "constraint-violation";
    case ErrorCode::kPrecondition:
      return "precondition";
    case ErrorCode::kDegenerate:
      return "degenerate";
    case ErrorCode::kBudget:
      return "budget";
    case ErrorCode::kNumerical:
      return "numerical";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace attrisbm

#endif  // ATTRISBM_ERROR_HPP_
