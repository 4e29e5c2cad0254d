// Copyright 2026 The LinZero Authors
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

#ifndef LINZERO_ERROR_HPP
#define LINZERO_ERROR_HPP

#include <stdexcept>
#include <string>

namespace linzero {

/// Action indices out of range or action shape does not match the space.
class InvalidAction : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-finite reward/weight or a numerically impossible state.
class NumericError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad configuration value, unknown key, or missing section.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration request larger than the configured cap.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Environment used outside of its episode protocol (e.g. step after done).
class ProtocolError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Caller broke an operation precondition (unexpanded node, unregistered
/// candidate with caching only, empty partition block, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// File could not be opened, written, or parsed.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace linzero

#endif  // LINZERO_ERROR_HPP
