// Copyright 2026 The critscene Authors
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

#ifndef CRITSCENE__ERROR_HPP_
#define CRITSCENE__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace critscene
{

enum class ErrorCode {
  // ingest
  MissingColumn,
  NonMonotonicTime,
  BadNumeric,
  UnknownClass,
  UnknownTimestamp,
  // lanemap
  SchemaViolation,
  AsymmetricNeighbor,
  DegenerateCenterline,
  NoLaneMatch,
  // criticality
  ZeroGap,
  InvalidParameter,
  // visexport
  MismatchedTimestamp,
  EmptyWindow,
  // plumbing
  Io,
};

inline std::string_view to_string(ErrorCode code)
{
  switch (code) {
    case ErrorCode::MissingColumn:
      return "MissingColumn";
    case ErrorCode::NonMonotonicTime:
      return "NonMonotonicTime";
    case ErrorCode::BadNumeric:
      return "BadNumeric";
    case ErrorCode::UnknownClass:
      return "UnknownClass";
    case ErrorCode::UnknownTimestamp:
      return "UnknownTimestamp";
    case ErrorCode::SchemaViolation:
      return "SchemaViolation";
    case ErrorCode::AsymmetricNeighbor:
      return "AsymmetricNeighbor";
    case ErrorCode::DegenerateCenterline:
      return "DegenerateCenterline";
    case ErrorCode::NoLaneMatch:
      return "NoLaneMatch";
    case ErrorCode::ZeroGap:
      return "ZeroGap";
    case ErrorCode::InvalidParameter:
      return "InvalidParameter";
    case ErrorCode::MismatchedTimestamp:
      return "MismatchedTimestamp";
    case ErrorCode::EmptyWindow:
      return "EmptyWindow";
    case ErrorCode::Io:
      return "Io";
  }
  return "Unknown";
}

/// Single exception type for every pipeline failure; `code()` discriminates.
class Error : public std::runtime_error
{
public:
  Error(ErrorCode code, const std::string & message)
  : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code)
  {
  }

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace critscene

#endif  // CRITSCENE__ERROR_HPP_
