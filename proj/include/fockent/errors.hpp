// Copyright 2026 The fockent Authors
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

namespace fockent {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Duplicate or unknown mode ids, wrong mode kinds, incompatible layouts.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// An occupation would exceed the capacity of its mode.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// A state or operator violates its invariants (norm, Hermiticity, PSD, trace).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input outside the region where truncated phase-operator identities hold.
class NonPhysicalStateError : public Error {
 public:
  NonPhysicalStateError(const std::string& what, double tail_mass)
      : Error(what), tail_mass_(tail_mass) {}
  double tail_mass() const { return tail_mass_; }

 private:
  double tail_mass_;
};

/// Malformed input file or document.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fockent
