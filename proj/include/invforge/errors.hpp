// Copyright 2026 The invforge Authors
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

#ifndef INVFORGE_ERRORS_HPP
#define INVFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace invforge {

/// Base of every error raised by the library. The category doubles as the
/// CLI exit code family.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class UnsupportedGateError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Qubit count or matrix dimension exceeds what a simulation path supports.
class SimulationBoundError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace invforge

#endif  // INVFORGE_ERRORS_HPP
