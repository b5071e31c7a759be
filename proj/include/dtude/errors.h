// Copyright 2026 The dtude Authors
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

#ifndef DTUDE_ERRORS_H_
#define DTUDE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dtude {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of matrix operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A matrix that must be inverted is (numerically) singular.
class SingularityError : public Error {
 public:
  using Error::Error;
};

// An iterative kernel failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// A Schur/Hurwitz or filter-parameter precondition does not hold.
class StabilityError : public Error {
 public:
  using Error::Error;
};

// A pair (F, G) or (C, F) fails a Kalman rank test.
class ControllabilityError : public Error {
 public:
  using Error::Error;
};

// Malformed user input (targets, parameters, traces).
class InputError : public Error {
 public:
  using Error::Error;
};

// Controller/observer steps were called out of sequence.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Configuration file or override could not be parsed.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace dtude

#endif  // DTUDE_ERRORS_H_
