// Copyright 2026 The Authors.
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

namespace markov_ipp {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kFactorizationFailure,
  kSingularCovariance,
  kGridTooLarge,
  kInvalidArity,
  kColumnOverflow,
  kBudgetExceeded,
  kConditionViolated,
  kAnisotropyViolated,
  kEmptyUnobservedSet,
  kZeroMeanField,
  kMismatchedInstances,
  kIoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kFactorizationFailure: return "FactorizationFailure";
    case ErrorCode::kSingularCovariance: return "SingularCovariance";
    case ErrorCode::kGridTooLarge: return "GridTooLarge";
    case ErrorCode::kInvalidArity: return "InvalidArity";
    case ErrorCode::kColumnOverflow: return "ColumnOverflow";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kConditionViolated: return "ConditionViolated";
    case ErrorCode::kAnisotropyViolated: return "AnisotropyViolated";
    case ErrorCode::kEmptyUnobservedSet: return "EmptyUnobservedSet";
    case ErrorCode::kZeroMeanField: return "ZeroMeanField";
    case ErrorCode::kMismatchedInstances: return "MismatchedInstances";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace markov_ipp
