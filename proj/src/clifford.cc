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

#include <sstream>
#include <stdexcept>

#include "stablearn/errors.h"

namespace stablearn {

namespace {

void check_gate(const CliffordGate &gate, size_t n) {
    bool bad = gate.q0 >= n;
    if (gate.kind == GateKind::CNOT) {
        bad = bad || gate.q1 >= n || gate.q0 == gate.q1;
    }
    if (bad) {
        throw DimensionError("invalid gate '" + gate.str() + "' for " + std::to_string(n) + " qubits");
    }
}

}  // namespace

std::string CliffordGate::str() const {
    switch (kind) {
        case GateKind::H:
            return "H " + std::to_string(q0);
        case GateKind::S:
            return "S " + std::to_string(q0);
        case GateKind::CNOT:
            return "CNOT " + std::to_string(q0) + " " + std::to_string(q1);
    }
    return "?";
}

void gate_action(const CliffordGate &gate, F2Vector &row) {
    size_t n = row.num_qubits();
    check_gate(gate, n);
    switch (gate.kind) {
        case GateKind::H: {
            bool xq = row.x(gate.q0);
            bool zq = row.z(gate.q0);
            row.set(gate.q0, zq);
            row.set(n + gate.q0, xq);
            break;
        }
        case GateKind::S:
            if (row.x(gate.q0)) {
                row.flip(n + gate.q0);
            }
            break;
        case GateKind::CNOT:
            if (row.x(gate.q0)) {
                row.flip(gate.q1);
            }
            if (row.z(gate.q1)) {
                row.flip(n + gate.q0);
            }
            break;
    }
}

void gate_action(const CliffordGate &gate, std::span<F2Vector> rows) {
    for (auto &row : rows) {
        gate_action(gate, row);
    }
}

CliffordCircuit::CliffordCircuit(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0) {
        throw DimensionError("CliffordCircuit: need at least one qubit");
    }
    columns_.reserve(2 * num_qubits);
    for (size_t j = 0; j < 2 * num_qubits; j++) {
        F2Vector e(num_qubits);
        e.set(j, true);
        columns_.push_back(std::move(e));
    }
}

CliffordCircuit CliffordCircuit::from_text(std::string_view text, size_t num_qubits) {
    CliffordCircuit circuit(num_qubits);
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream fields(line);
        std::string name;
        if (!(fields >> name)) {
            continue;
        }
        long long a = -1;
        long long b = -1;
        CliffordGate gate{};
        if (name == "H" || name == "S") {
            if (!(fields >> a) || a < 0) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": expected qubit index");
            }
            gate = name == "H" ? CliffordGate::h(static_cast<uint32_t>(a)) : CliffordGate::s(static_cast<uint32_t>(a));
        } else if (name == "CNOT") {
            if (!(fields >> a >> b) || a < 0 || b < 0) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": expected control and target");
            }
            gate = CliffordGate::cnot(static_cast<uint32_t>(a), static_cast<uint32_t>(b));
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown Clifford gate '" + name + "'");
        }
        std::string extra;
        if (fields >> extra) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": trailing tokens");
        }
        circuit.append(gate);
    }
    return circuit;
}

void CliffordCircuit::append(const CliffordGate &gate) {
    check_gate(gate, num_qubits_);
    gates_.push_back(gate);
    gate_action(gate, std::span<F2Vector>(columns_));
}

bool CliffordCircuit::is_symplectic() const {
    size_t nbits = 2 * num_qubits_;
    for (size_t i = 0; i < nbits; i++) {
        for (size_t j = i; j < nbits; j++) {
            // [e_i, e_j] = 1 exactly when i and j are the X and Z bit of one qubit.
            bool expected = (i + num_qubits_ == j);
            if (symplectic_product(columns_[i], columns_[j]) != expected) {
                return false;
            }
        }
    }
    return true;
}

std::string CliffordCircuit::str() const {
    std::string out;
    for (const auto &g : gates_) {
        out += g.str();
        out += '\n';
    }
    return out;
}

F2Vector act(const CliffordCircuit &circuit, const F2Vector &x) {
    size_t n = circuit.num_qubits();
    if (x.num_qubits() != n) {
        throw DimensionError("act: qubit count mismatch");
    }
    F2Vector out(n);
    for (size_t j = 0; j < 2 * n; j++) {
        if (x.get(j)) {
            out ^= circuit.column(j);
        }
    }
    return out;
}

Subspace act(const CliffordCircuit &circuit, const Subspace &h) {
    std::vector<F2Vector> images;
    images.reserve(h.dim());
    for (const auto &v : h.basis()) {
        images.push_back(act(circuit, v));
    }
    return row_reduce(images, circuit.num_qubits());
}

CliffordCircuit inverse(const CliffordCircuit &circuit) {
    CliffordCircuit out(circuit.num_qubits());
    const auto &gates = circuit.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.append(*it);
        if (it->kind == GateKind::S) {
            out.append(*it);
            out.append(*it);
        }
    }
    return out;
}

namespace {

/// Records each gate in the circuit and applies its column rule to the working tableau.
struct TableauBuilder {
    CliffordCircuit circuit;
    std::vector<F2Vector> rows;

    void apply(const CliffordGate &gate) {
        circuit.append(gate);
        gate_action(gate, std::span<F2Vector>(rows));
    }
};

void check_staircase(const std::vector<F2Vector> &rows, size_t processed, size_t n) {
    for (size_t r = 0; r < rows.size(); r++) {
        if (r < processed) {
            F2Vector expected(n);
            expected.set(r, true);
            if (rows[r] != expected) {
                throw std::logic_error("isotropic_mapping_circuit: processed row " + std::to_string(r) +
                                       " is not e_" + std::to_string(r) + ": " + rows[r].str());
            }
        } else {
            for (size_t c = 0; c < processed; c++) {
                if (rows[r].x(c) || rows[r].z(c)) {
                    throw std::logic_error("isotropic_mapping_circuit: row " + std::to_string(r) +
                                           " has a nonzero entry on processed qubit " + std::to_string(c));
                }
            }
        }
    }
}

}  // namespace

CliffordCircuit isotropic_mapping_circuit(const Subspace &h, bool check_invariants) {
    size_t n = h.num_qubits();
    size_t d = h.dim();
    if (d > n) {
        throw DimensionError("isotropic_mapping_circuit: dimension " + std::to_string(d) + " exceeds n = " +
                             std::to_string(n) + "; no isotropic subspace is that large");
    }
    if (!is_isotropic(h)) {
        throw PromiseViolation("isotropic_mapping_circuit: input subspace is not isotropic");
    }

    TableauBuilder b{CliffordCircuit(n), h.basis()};

    // Reduce the tableau to (I 0 | 0).
    for (size_t i = 0; i < d; i++) {
        auto &row = b.rows[i];
        for (size_t j = i; j < n; j++) {
            bool xj = row.x(j);
            bool zj = row.z(j);
            if (!xj && zj) {
                b.apply(CliffordGate::h(static_cast<uint32_t>(j)));
            } else if (xj && zj) {
                b.apply(CliffordGate::s(static_cast<uint32_t>(j)));
            }
        }
        if (!b.rows[i].x(i)) {
            size_t k = i + 1;
            while (k < n && !b.rows[i].x(k)) {
                k++;
            }
            if (k == n) {
                throw std::logic_error("isotropic_mapping_circuit: no witness column for row " + std::to_string(i));
            }
            b.apply(CliffordGate::cnot(static_cast<uint32_t>(k), static_cast<uint32_t>(i)));
        }
        for (size_t j = i + 1; j < n; j++) {
            if (b.rows[i].x(j)) {
                b.apply(CliffordGate::cnot(static_cast<uint32_t>(i), static_cast<uint32_t>(j)));
            }
        }
        // Row additions only; the span is unchanged and no gate is emitted.
        for (size_t r = i + 1; r < d; r++) {
            if (b.rows[r].x(i)) {
                b.rows[r] ^= b.rows[i];
            }
        }
        if (check_invariants) {
            check_staircase(b.rows, i + 1, n);
        }
    }

    // Hadamard layer: (I 0 | 0) -> (0 | I 0).
    for (size_t i = 0; i < d; i++) {
        b.apply(CliffordGate::h(static_cast<uint32_t>(i)));
    }

    // Swaps: move Z on qubit d-1-i to qubit n-1-i, rightmost first. When d == n the
    // block is already in place.
    if (d < n) {
        for (size_t i = 0; i < d; i++) {
            auto hi = static_cast<uint32_t>(n - 1 - i);
            auto lo = static_cast<uint32_t>(d - 1 - i);
            b.apply(CliffordGate::cnot(hi, lo));
            b.apply(CliffordGate::cnot(lo, hi));
        }
    }

    if (check_invariants) {
        Subspace image = row_reduce(b.rows, n);
        if (image != Subspace::trailing_z_block(n, d)) {
            throw std::logic_error("isotropic_mapping_circuit: final tableau is not 0^{2n-d} x F_2^d");
        }
    }
    return std::move(b.circuit);
}

CliffordGate random_clifford_gate(size_t num_qubits, Rng &rng) {
    uint64_t kind = num_qubits >= 2 ? uniform_below(rng, 3) : uniform_below(rng, 2);
    auto q = static_cast<uint32_t>(uniform_below(rng, num_qubits));
    if (kind == 0) {
        return CliffordGate::h(q);
    }
    if (kind == 1) {
        return CliffordGate::s(q);
    }
    auto t = static_cast<uint32_t>(uniform_below(rng, num_qubits - 1));
    if (t >= q) {
        t++;
    }
    return CliffordGate::cnot(q, t);
}

CliffordCircuit random_clifford_circuit(size_t num_qubits, size_t num_gates, Rng &rng) {
    CliffordCircuit c(num_qubits);
    for (size_t k = 0; k < num_gates; k++) {
        c.append(random_clifford_gate(num_qubits, rng));
    }
    return c;
}

}  // namespace stablearn
