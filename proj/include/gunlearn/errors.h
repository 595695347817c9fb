//
// Copyright 2026 The gunlearn Authors
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

#ifndef GUNLEARN_ERRORS_H_
#define GUNLEARN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gunlearn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters: weights, thresholds, privacy parameters, empty sets.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed input text. `line` is 1-based, 0 when not tied to a line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Node id outside [0, n).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Removal of an edge or node that does not exist (or is no longer live).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// Optimizer failed to reach the gradient tolerance.
class TrainingError : public Error {
 public:
  TrainingError(const std::string& what, double gradient_norm);
  double gradient_norm() const { return gradient_norm_; }

 private:
  double gradient_norm_;
};

// Cholesky factorization of the Hessian failed.
class SolveError : public Error {
 public:
  using Error::Error;
};

// Workload generator could not find enough qualifying items.
class ShortfallError : public Error {
 public:
  ShortfallError(const std::string& what, std::size_t achievable);
  std::size_t achievable() const { return achievable_; }

 private:
  std::size_t achievable_;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace gunlearn

#endif  // GUNLEARN_ERRORS_H_
