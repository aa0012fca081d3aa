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

#ifndef DIALECTID_SRC_BINARY_IO_H_
#define DIALECTID_SRC_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "dialectid/error.h"

namespace dialectid::internal {

// Little-endian primitives for the model and index formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void bytes(std::string_view data) {
    out_.write(data.data(), static_cast<std::streamsize>(data.size()));
  }
  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { unsigned_le(v, 4); }
  void u64(std::uint64_t v) { unsigned_le(v, 8); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s);
  }

  void check(std::string_view what) const {
    if (!out_) throw Error("failed to write " + std::string(what));
  }

 private:
  void unsigned_le(std::uint64_t v, int width) {
    char buf[8];
    for (int i = 0; i < width; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    out_.write(buf, width);
  }

  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string_view what) : in_(in), what_(what) {}

  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    read(s.data(), n);
    return s;
  }
  std::uint8_t u8() {
    char c;
    read(&c, 1);
    return static_cast<std::uint8_t>(c);
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(unsigned_le(4)); }
  std::uint64_t u64() { return unsigned_le(8); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str(std::size_t max_len = 1u << 24) {
    const std::uint32_t n = u32();
    if (n > max_len) fail("string length out of range");
    return bytes(n);
  }

  [[noreturn]] void fail(std::string_view message) const {
    throw FormatError(what_ + ": " + std::string(message));
  }

 private:
  void read(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("truncated data");
  }
  std::uint64_t unsigned_le(int width) {
    unsigned char buf[8];
    read(reinterpret_cast<char*>(buf), static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = width - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }

  std::istream& in_;
  std::string what_;
};

}  // namespace dialectid::internal

#endif  // DIALECTID_SRC_BINARY_IO_H_
