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

#ifndef DIALECTID_UNICODE_H_
#define DIALECTID_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace dialectid::unicode {

// Decodes UTF-8 into code points. Throws DataError on malformed input
// (overlong forms, surrogates, truncated sequences, values above U+10FFFF).
std::u32string decode_utf8(std::string_view text);

bool is_valid_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view code_points);
void append_utf8(char32_t code_point, std::string& out);

// Byte offset of every code point in a valid UTF-8 string, plus a final
// entry equal to text.size(). The result has codepoint_count + 1 entries.
std::vector<std::size_t> codepoint_offsets(std::string_view text);

std::size_t codepoint_count(std::string_view text);

// Canonical composition (NFC).
std::string to_nfc(std::string_view text);

bool is_whitespace(char32_t code_point);

}  // namespace dialectid::unicode

#endif  // DIALECTID_UNICODE_H_
