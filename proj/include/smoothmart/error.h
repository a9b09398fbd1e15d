// Copyright 2026 The Smoothmart Authors
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

#ifndef SMOOTHMART_ERROR_H_
#define SMOOTHMART_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smoothmart {

// Bad arguments: dimension mismatch, parameter outside its domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A non-finite or otherwise unusable intermediate value. `step` is the
// martingale step at which it appeared, or 0 when not step-related.
class NumericError : public std::runtime_error {
 public:
  NumericError(const std::string& what, std::size_t step = 0)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// Requested enumeration exceeds the configured memory cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A generator produced a difference larger than its dominating value.
class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace smoothmart

#endif  // SMOOTHMART_ERROR_H_
