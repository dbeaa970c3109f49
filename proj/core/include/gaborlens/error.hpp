// Copyright 2026 The gaborlens authors
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

#ifndef GABORLENS_ERROR_HPP_
#define GABORLENS_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace gaborlens {

// Caller passed arguments that violate a documented precondition.
struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Input is structurally valid but numerically degenerate (e.g. constant
// signal fed to a standardizer).
struct DegenerateInputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed file or stream contents.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Recognized but unsupported variant (e.g. an exotic sample encoding).
struct UnsupportedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A derived configuration (e.g. a layer geometry) is infeasible.
struct SpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Bad user-facing configuration value or unknown key.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Numerical failure during computation (non-finite values, failed solve).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Object used in a state that does not permit the operation.
struct StateError : std::logic_error {
  using std::logic_error::logic_error;
};

// Filesystem or stream I/O failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace gaborlens

#endif  // GABORLENS_ERROR_HPP_
