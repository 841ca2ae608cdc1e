// Copyright 2026 The stablearn Authors
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

#ifndef STABLEARN_ERRORS_H
#define STABLEARN_ERRORS_H

#include <stdexcept>
#include <string>

namespace stablearn {

/// Operands disagree on qubit count, or an index is out of range.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A size cap (simulation, oracle table, enumeration, tomography) would be exceeded.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The input broke an algorithm's promise (e.g. a non-isotropic subspace).
struct PromiseViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A metered state source ran out of copies.
struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace stablearn

#endif
