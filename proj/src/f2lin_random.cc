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

#include "stablearn/clifford.h"
#include "stablearn/errors.h"
#include "stablearn/f2lin.h"

namespace stablearn {

Subspace random_isotropic_subspace(size_t num_qubits, size_t d, Rng &rng) {
    if (d > num_qubits) {
        throw DimensionError("random_isotropic_subspace: isotropic subspaces have dimension <= n");
    }
    // Enough random gates to scramble every qubit pair several times.
    size_t gates = 4 * num_qubits * num_qubits + 16;
    CliffordCircuit scramble = random_clifford_circuit(num_qubits, gates, rng);
    return act(scramble, Subspace::trailing_z_block(num_qubits, d));
}

}  // namespace stablearn
