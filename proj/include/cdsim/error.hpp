// Copyright 2026 The cdsim Authors
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

namespace cdsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Register sizes disagree, or a register is too large for dense export.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside the domain of an operation (T <= 0, lambda > 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed: no convergence, singular matrix, NaN.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A Pauli term the circuit compiler has no decomposition for.
class UnsupportedTermError : public Error {
 public:
  UnsupportedTermError(const std::string& term, const std::string& why)
      : Error("unsupported term " + term + ": " + why), term_(term) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

}  // namespace cdsim
