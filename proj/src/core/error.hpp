// Copyright 2026 The mlcount Authors
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

#include <stdexcept>
#include <string>

namespace mlcount {

// Base of every error raised by the library. The C API maps each subclass to
// one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (a <= 0, z < 0...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid ensemble parameters or disk configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Requested cumulant order is above the supported maximum.
class OrderError : public Error {
 public:
  using Error::Error;
};

// Too few samples or data points for the requested estimate or fit.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// A quantity that is positive in exact arithmetic came out non-positive.
class NumericalFault : public Error {
 public:
  using Error::Error;
};

}  // namespace mlcount
