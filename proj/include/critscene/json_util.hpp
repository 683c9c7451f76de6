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

#ifndef CRITSCENE__JSON_UTIL_HPP_
#define CRITSCENE__JSON_UTIL_HPP_

#include "critscene/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace critscene
{

using Json = nlohmann::ordered_json;

/// Output artifacts carry 6 decimals so repeated runs are byte-identical.
inline double round6(double value)
{
  if (!std::isfinite(value)) {
    return value;
  }
  const double rounded = std::round(value * 1e6) / 1e6;
  return rounded == 0.0 ? 0.0 : rounded;  // no "-0.0"
}

inline Json json_number(double value) { return Json(round6(value)); }

template <typename T>
Json json_optional(const std::optional<T> & value)
{
  if (!value) {
    return Json(nullptr);
  }
  if constexpr (std::is_floating_point_v<T>) {
    return json_number(*value);
  } else {
    return Json(*value);
  }
}

/// Fixed-precision text for CSV outputs.
inline std::string format_fixed(double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", round6(value));
  return buf;
}

inline std::string read_text_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::string & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  }
  out << text;
  if (!out) {
    throw Error(ErrorCode::Io, "write failed for '" + path + "'");
  }
}

inline Json parse_json_text(const std::string & text, ErrorCode on_error, const std::string & what)
{
  try {
    return Json::parse(text);
  } catch (const Json::parse_error & e) {
    throw Error(on_error, what + ": " + e.what());
  }
}

}  // namespace critscene

#endif  // CRITSCENE__JSON_UTIL_HPP_
