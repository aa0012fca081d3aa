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

#ifndef DIALECTID_ERROR_H_
#define DIALECTID_ERROR_H_

#include <stdexcept>
#include <string>

namespace dialectid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: bad feature-set names, out-of-range fractions, empty
// grids and similar caller mistakes.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data: bad UTF-8, malformed TSV lines,
// labels with too few sentences, unknown labels.
class DataError : public Error {
 public:
  using Error::Error;
};

// A serialized model or feature index that cannot be decoded.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace dialectid

#endif  // DIALECTID_ERROR_H_
