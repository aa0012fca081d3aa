// Copyright 2026 The dialectid Authors
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

#ifndef DIALECTID_SRC_NUMBER_FORMAT_H_
#define DIALECTID_SRC_NUMBER_FORMAT_H_

#include <charconv>
#include <cstdio>
#include <string>
#include <string_view>

#include "dialectid/error.h"

namespace dialectid::internal {

// Shortest text that parses back to exactly v.
inline std::string round_trip(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

inline double parse_double(std::string_view text, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DataError("cannot parse " + std::string(what) + " from '" +
                    std::string(text) + "'");
  }
  return v;
}

template <typename Int>
Int parse_integer(std::string_view text, std::string_view what) {
  Int v{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw DataError("cannot parse " + std::string(what) + " from '" +
                    std::string(text) + "'");
  }
  return v;
}

}  // namespace dialectid::internal

#endif  // DIALECTID_SRC_NUMBER_FORMAT_H_
