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

#ifndef STABLEARN_CLIFFORD_H
#define STABLEARN_CLIFFORD_H

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablearn/f2lin.h"
#include "stablearn/rng.h"

namespace stablearn {

enum class GateKind : uint8_t { H, S, CNOT };

struct CliffordGate {
    GateKind kind;
    uint32_t q0;      // target of H/S, control of CNOT
    uint32_t q1 = 0;  // target of CNOT

    static CliffordGate h(uint32_t q) {
        return {GateKind::H, q, 0};
    }
    static CliffordGate s(uint32_t q) {
        return {GateKind::S, q, 0};
    }
    static CliffordGate cnot(uint32_t control, uint32_t target) {
        return {GateKind::CNOT, control, target};
    }

    /// "H q", "S q" or "CNOT c t".
    std::string str() const;
    bool operator==(const CliffordGate &other) const = default;
};

/// Applies the tableau column rule of `gate` to one row (H: swap x_q, z_q; S: z_q ^= x_q;
/// CNOT(c, t): x_t ^= x_c and z_c ^= z_t). This is the unsigned conjugation action
/// W_x -> +-G W_x G^dagger.
void gate_action(const CliffordGate &gate, F2Vector &row);
void gate_action(const CliffordGate &gate, std::span<F2Vector> rows);

/// A sequence of H/S/CNOT gates together with its symplectic action on F_2^{2n}.
///
/// The action matrix is stored by columns (column j is C(e_j)) and updated as gates are
/// appended, so act() never replays the gate list.
class CliffordCircuit {
   public:
    explicit CliffordCircuit(size_t num_qubits);

    /// Parses the one-gate-per-line text format ("H q", "S q", "CNOT c t"; '#' comments).
    static CliffordCircuit from_text(std::string_view text, size_t num_qubits);

    void append(const CliffordGate &gate);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<CliffordGate> &gates() const {
        return gates_;
    }
    size_t size() const {
        return gates_.size();
    }
    /// C(e_j).
    const F2Vector &column(size_t j) const {
        return columns_[j];
    }

    /// Checks [C e_i, C e_j] = [e_i, e_j] for every pair of basis vectors (S^T J S = J).
    bool is_symplectic() const;

    std::string str() const;

   private:
    size_t num_qubits_;
    std::vector<CliffordGate> gates_;
    std::vector<F2Vector> columns_;
};

F2Vector act(const CliffordCircuit &circuit, const F2Vector &x);
/// C(H), returned in canonical form.
Subspace act(const CliffordCircuit &circuit, const Subspace &h);

/// Reversed gate list with S^{-1} = S S S; H and CNOT are self-inverse.
CliffordCircuit inverse(const CliffordCircuit &circuit);

/// Upper bound on gates emitted by isotropic_mapping_circuit: at most K * n * d.
///
/// Row reduction spends at most (n - i) normalizing gates, one witness CNOT and (n - i - 1)
/// clearing CNOTs on row i; the Hadamard layer and the swaps add 3 gates per row. That is <= 2nd + 3d <= 5nd.
/// K = 6 leaves slack for n = 1.
inline constexpr size_t kMappingGateConstant = 6;

/// Builds a Clifford circuit C with C(H) = 0^{2n-d} x F_2^d for an isotropic H of
/// dimension d.
///
/// Works on the echelon basis of H as a tableau: per row i, normalize each qubit j >= i
/// to X or I (H on Z, S on Y), pull a witness X onto qubit i with CNOT(k -> i), clear the
/// rest of the row with CNOT(i -> j), and clear column i from later rows by row addition.
/// Then Hadamard the first d qubits and move the Z block to the last d qubits with a
/// CNOT ladder processed from the rightmost column leftward.
///
/// With `check_invariants` the staircase shape of the partially processed tableau is
/// verified after every row (throws std::logic_error on violation).
///
/// Throws PromiseViolation if H is not isotropic (dim <= n always holds for isotropic H).
CliffordCircuit isotropic_mapping_circuit(const Subspace &h, bool check_invariants = false);

/// `num_gates` gates drawn uniformly from {H, S, CNOT} on uniform qubits.
CliffordCircuit random_clifford_circuit(size_t num_qubits, size_t num_gates, Rng &rng);

/// Draws one uniformly random Clifford gate for an n-qubit register.
CliffordGate random_clifford_gate(size_t num_qubits, Rng &rng);

}  // namespace stablearn

#endif
