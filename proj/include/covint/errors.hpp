// Copyright 2026 The covint authors
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

#ifndef COVINT_ERRORS_HPP
#define COVINT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace covint {

/// Base class for all covint errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed inputs: bad tables, bad parameters, parse failures.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Arguments outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A truncated procedure table cannot certify an answer (the tail limits
/// do not pin down the behaviour of the bounds beyond the table).
class CertificationError : public Error {
 public:
  using Error::Error;
};

}  // namespace covint

#endif  // COVINT_ERRORS_HPP
