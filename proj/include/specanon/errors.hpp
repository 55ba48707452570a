//
// Copyright 2026 The specanon Authors
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
//

#ifndef SPECANON_ERRORS_HPP_
#define SPECANON_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specanon {

// Base class for every error raised by the library. Each failure class has
// its own subtype so callers (notably the CLI) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class TooFewRows : public Error {
 public:
  using Error::Error;
};

class NonFiniteInput : public Error {
 public:
  using Error::Error;
};

class NotSymmetric : public Error {
 public:
  using Error::Error;
};

class NegativeEigenvalue : public Error {
 public:
  using Error::Error;
};

class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroTarget : public Error {
 public:
  using Error::Error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

// Malformed text input. `row` and `column` are 1-based positions in the
// source file (row 1 is the header); zero means "not applicable".
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row = 0,
             std::size_t column = 0)
      : Error(describe(what, row, column)), row_(row), column_(column) {}

  std::size_t row() const { return row_; }
  std::size_t column() const { return column_; }

 private:
  static std::string describe(const std::string& what, std::size_t row,
                              std::size_t column) {
    std::string out = what;
    if (row != 0) out += " (row " + std::to_string(row);
    if (row != 0 && column != 0) out += ", column " + std::to_string(column);
    if (row != 0) out += ")";
    return out;
  }

  std::size_t row_;
  std::size_t column_;
};

}  // namespace specanon

#endif  // SPECANON_ERRORS_HPP_
