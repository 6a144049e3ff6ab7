// Copyright 2026 The NewsGauge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEWSGAUGE_ERROR_H_
#define NEWSGAUGE_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace newsgauge {

// Runtime failure: IO, network, exhausted resources. Maps to CLI exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration, flags or input data. Maps to CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Malformed record in an input document. `line` is 1-based (0 when the
// location is a byte offset instead, see `offset`).
class ParseError : public ValidationError {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : ValidationError(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)),
        line_(line) {}

  static ParseError AtOffset(std::string source, std::size_t offset,
                             const std::string& message) {
    ParseError e(std::move(source), 0, message, offset);
    return e;
  }

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }
  std::size_t offset() const { return offset_; }

 private:
  ParseError(std::string source, std::size_t line, const std::string& message,
             std::size_t offset)
      : ValidationError(source + ": byte " + std::to_string(offset) + ": " +
                        message),
        source_(std::move(source)),
        line_(line),
        offset_(offset) {}

  std::string source_;
  std::size_t line_ = 0;
  std::size_t offset_ = 0;
};

}  // namespace newsgauge

#endif  // NEWSGAUGE_ERROR_H_
