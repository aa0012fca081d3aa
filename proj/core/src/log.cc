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

#include "dialectid/log.h"

#include <iostream>
#include <mutex>
#include <utility>

namespace dialectid {
namespace {

std::mutex& handler_mutex() {
  static std::mutex mu;
  return mu;
}

WarningHandler& handler() {
  static WarningHandler h;
  return h;
}

}  // namespace

void set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex());
  handler() = std::move(h);
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler()) {
    handler()(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

}  // namespace dialectid
