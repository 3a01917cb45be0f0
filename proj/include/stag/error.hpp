// Copyright 2026 The stag Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stag {

/// Violated precondition on an argument (bad rate, too few samples, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input whose statistics make the requested quantity undefined,
/// e.g. a zero-variance channel passed to z-normalization.
class DegenerateInputError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Nothing to compute over (no overlapping interval, no rows).
class EmptyInputError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Inconsistent external input, e.g. ids that do not match across files.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed file content. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace stag
