// Copyright 2026 The uspn Authors.
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

namespace uspn {

// Precondition violated: the requested quantity is not defined for the input.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical procedure did not reach its target accuracy.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : std::runtime_error(what), achieved_(achieved) {}
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

// Argument too close to a pole of a meromorphic kernel.
class SingularityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Truncated integral whose tail did not decay.
class TruncationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Problem size beyond what the chosen method supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace uspn
