// Copyright 2026 The SharpSearch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sharpsearch {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text input (space files, logs, tables, datasets).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The request cannot be satisfied by the search space: too many
// configurations to enumerate, cardinality overflow, or nothing left to try.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class CardinalityOverflow : public InfeasibleError {
 public:
  using InfeasibleError::InfeasibleError;
};

class CardinalityExceeded : public InfeasibleError {
 public:
  CardinalityExceeded(std::uint64_t cardinality, std::uint64_t limit)
      : InfeasibleError("search space has " + std::to_string(cardinality) +
                        " configurations, above the limit of " +
                        std::to_string(limit)),
        cardinality_(cardinality) {}
  std::uint64_t cardinality() const noexcept { return cardinality_; }

 private:
  std::uint64_t cardinality_;
};

class ExhaustedSpace : public InfeasibleError {
 public:
  ExhaustedSpace() : InfeasibleError("every configuration has been evaluated") {}
};

class SingularKernel : public Error {
 public:
  using Error::Error;
};

// An objective could not produce a value at all (as opposed to a training
// run that diverged, which is reported as a failed evaluation).
class ObjectiveError : public Error {
 public:
  using Error::Error;
};

}  // namespace sharpsearch
