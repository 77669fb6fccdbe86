// Copyright 2026 The qdac Authors
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

namespace qdac {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument value is outside its admissible range.
struct DomainError : Error {
    using Error::Error;
};

/// A dense representation would exceed the configured qubit limit.
struct CapacityError : Error {
    using Error::Error;
};

/// Malformed input file; the message names the offending line.
struct ParseError : Error {
    using Error::Error;
};

/// Register layout does not match what an operation requires.
struct LayoutError : Error {
    using Error::Error;
};

/// Operation would break the product structure of the structured backend;
/// the caller must densify first.
struct BackendError : Error {
    using Error::Error;
};

/// A state is not in the algebraic form an operation requires.
struct FormError : Error {
    using Error::Error;
};

/// A projector set is not a complete orthogonal measurement.
struct MeasurementError : Error {
    using Error::Error;
};

/// A density-matrix invariant (Hermiticity, trace, positivity) is violated.
struct InvariantError : Error {
    using Error::Error;
};

}  // namespace qdac
