// Copyright 2026 The banzhaf-lw Authors
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

#ifndef BANZHAF_ERROR_HPP
#define BANZHAF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace banzhaf {

enum class ErrorCode {
  InvalidArgument,
  PlayerCountTooLarge,
  LengthMismatch,
  InvalidTarget,
  TargetContainsZero,
  NonPositiveWeight,
  ExplicitLengthMismatch,
  OracleTooLarge,
  EmptyAtlas,
  BaselineZero,
  ParseError,
  IoError,
  SpecValidation,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PlayerCountTooLarge: return "PlayerCountTooLarge";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidTarget: return "InvalidTarget";
    case ErrorCode::TargetContainsZero: return "TargetContainsZero";
    case ErrorCode::NonPositiveWeight: return "NonPositiveWeight";
    case ErrorCode::ExplicitLengthMismatch: return "ExplicitLengthMismatch";
    case ErrorCode::OracleTooLarge: return "OracleTooLarge";
    case ErrorCode::EmptyAtlas: return "EmptyAtlas";
    case ErrorCode::BaselineZero: return "BaselineZero";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SpecValidation: return "SpecValidation";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace banzhaf

#endif  // BANZHAF_ERROR_HPP
