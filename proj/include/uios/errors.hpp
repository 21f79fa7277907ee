/*
 * Copyright 2026 The uios Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef UIOS_ERRORS_HPP_
#define UIOS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace uios {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of a function (x <= 0 for
// log_gamma, a point off the simplex, an invalid distribution).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Matrix / vector dimensions disagree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent input data (CSV, checkpoint, labels).
class DataError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf encountered during training or inference.
class NumericError : public Error {
 public:
  using Error::Error;
};

// Threshold selection impossible (e.g. no wrong predictions to detect).
class CalibrationError : public Error {
 public:
  using Error::Error;
};

// Invalid combination of options supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace uios

#endif  // UIOS_ERRORS_HPP_
