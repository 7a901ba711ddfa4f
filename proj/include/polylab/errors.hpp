/* Copyright 2026 The polylab Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polylab {

/// A documented precondition of an operation was not met by the caller.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input points are affinely dependent within tolerance.
class DegeneracyError : public std::runtime_error {
 public:
  DegeneracyError(const std::string& what, std::size_t subset_size)
      : std::runtime_error(what), subset_size_(subset_size) {}

  /// Size of the affinely independent subset found before failing.
  std::size_t subset_size() const noexcept { return subset_size_; }

 private:
  std::size_t subset_size_;
};

/// No closed form or quadrature route for this (body, ell) combination.
class UnsupportedReference : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An intrinsic volume without an exact path was requested without a panel.
class MissingPanel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Internal bookkeeping inconsistency; indicates a bug.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace polylab
