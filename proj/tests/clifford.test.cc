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

#include "gtest/gtest.h"

#include "stablearn/errors.h"
#include "stablearn/pauli.h"
#include "test_util.h"

using namespace stablearn;
using namespace stablearn::testing;

namespace {

/// G P_x G^dagger equals +-P_{G(x)} as dense matrices.
bool conjugation_matches(size_t n, const CliffordGate &g, const F2Vector &x) {
    Dense gm = gate_matrix(n, g);
    Dense gd(gm.dim);
    for (size_t i = 0; i < gm.dim; i++) {
        for (size_t j = 0; j < gm.dim; j++) {
            gd(i, j) = std::conj(gm(j, i));
        }
    }
    Dense lhs = matmul(matmul(gm, pauli_matrix(x)), gd);
    F2Vector image = x;
    gate_action(g, image);
    Dense rhs = pauli_matrix(image);
    double plus = 0;
    double minus = 0;
    for (size_t k = 0; k < lhs.m.size(); k++) {
        plus = std::max(plus, std::abs(lhs.m[k] - rhs.m[k]));
        minus = std::max(minus, std::abs(lhs.m[k] + rhs.m[k]));
    }
    return std::min(plus, minus) < 1e-12;
}

}  // namespace

TEST(gate_action, examples) {
    F2Vector x = F2Vector::from_str("100|000");
    F2Vector h = x;
    gate_action(CliffordGate::h(0), h);
    ASSERT_EQ(h.str(), "000|100");
    F2Vector s = x;
    gate_action(CliffordGate::s(0), s);
    ASSERT_EQ(s.str(), "100|100");
    F2Vector c = x;
    gate_action(CliffordGate::cnot(0, 1), c);
    ASSERT_EQ(c.str(), "110|000");
    F2Vector zc = F2Vector::from_str("000|010");
    gate_action(CliffordGate::cnot(0, 1), zc);
    ASSERT_EQ(zc.str(), "000|110");

    ASSERT_THROW(gate_action(CliffordGate::h(3), x), DimensionError);
    ASSERT_THROW(gate_action(CliffordGate::cnot(1, 1), x), DimensionError);
}

TEST(gate_action, agrees_with_matrix_conjugation) {
    auto rng = test_rng(20);
    for (size_t n = 1; n <= 3; n++) {
        for (uint64_t xi = 0; xi < (uint64_t{1} << (2 * n)); xi++) {
            F2Vector x = vec_of(n, xi);
            for (uint32_t q = 0; q < n; q++) {
                ASSERT_TRUE(conjugation_matches(n, CliffordGate::h(q), x));
                ASSERT_TRUE(conjugation_matches(n, CliffordGate::s(q), x));
                for (uint32_t r = 0; r < n; r++) {
                    if (r != q) {
                        ASSERT_TRUE(conjugation_matches(n, CliffordGate::cnot(q, r), x));
                    }
                }
            }
        }
    }
}

TEST(clifford_circuit, text_round_trip) {
    std::string text = "# prep\nH 0\nS 1  # phase\n\nCNOT 0 2\n";
    CliffordCircuit c = CliffordCircuit::from_text(text, 3);
    ASSERT_EQ(c.size(), 3);
    ASSERT_EQ(c.gates()[0], CliffordGate::h(0));
    ASSERT_EQ(c.gates()[1], CliffordGate::s(1));
    ASSERT_EQ(c.gates()[2], CliffordGate::cnot(0, 2));
    ASSERT_EQ(c.str(), "H 0\nS 1\nCNOT 0 2\n");
    CliffordCircuit again = CliffordCircuit::from_text(c.str(), 3);
    ASSERT_EQ(again.gates(), c.gates());

    ASSERT_THROW(CliffordCircuit::from_text("X 0\n", 3), std::invalid_argument);
    ASSERT_THROW(CliffordCircuit::from_text("H\n", 3), std::invalid_argument);
    ASSERT_THROW(CliffordCircuit::from_text("H 3\n", 3), std::invalid_argument);
    ASSERT_THROW(CliffordCircuit::from_text("CNOT 1 1\n", 3), std::invalid_argument);
    ASSERT_THROW(CliffordCircuit::from_text("H 0 1\n", 3), std::invalid_argument);
}

TEST(clifford_circuit, empty_is_identity) {
    CliffordCircuit c(4);
    auto rng = test_rng(21);
    for (int rep = 0; rep < 20; rep++) {
        F2Vector x = random_vector(4, rng);
        ASSERT_EQ(act(c, x), x);
    }
    ASSERT_TRUE(c.is_symplectic());
    ASSERT_EQ(inverse(c).size(), 0);
}

TEST(clifford_circuit, action_matches_gate_replay) {
    auto rng = test_rng(22);
    for (size_t n : {1, 2, 5, 9, 40, 70}) {
        CliffordCircuit c = random_clifford_circuit(n, 5 * n + 3, rng);
        ASSERT_TRUE(c.is_symplectic());
        for (int rep = 0; rep < 20; rep++) {
            F2Vector x = random_vector(n, rng);
            F2Vector replay = x;
            for (const auto &g : c.gates()) {
                gate_action(g, replay);
            }
            ASSERT_EQ(act(c, x), replay);
        }
    }
}

TEST(clifford_circuit, preserves_products_and_inverts) {
    auto rng = test_rng(23);
    for (size_t n : {1, 3, 6, 10}) {
        CliffordCircuit c = random_clifford_circuit(n, 4 * n * n, rng);
        CliffordCircuit ci = inverse(c);
        for (int rep = 0; rep < 50; rep++) {
            F2Vector x = random_vector(n, rng);
            F2Vector y = random_vector(n, rng);
            ASSERT_EQ(symplectic_product(act(c, x), act(c, y)), symplectic_product(x, y));
            ASSERT_EQ(act(c, act(ci, x)), x);
            ASSERT_EQ(act(ci, act(c, x)), x);
        }
    }
}

TEST(clifford_circuit, inverse_examples) {
    CliffordCircuit h(1);
    h.append(CliffordGate::h(0));
    ASSERT_EQ(inverse(h).gates(), h.gates());

    CliffordCircuit s(1);
    s.append(CliffordGate::s(0));
    CliffordCircuit si = inverse(s);
    ASSERT_EQ(si.size(), 3);
    // S maps X -> Y, Z -> Z; over F_2 the inverse matrix equals the matrix itself.
    ASSERT_EQ(act(si, F2Vector::from_str("1|0")).str(), "1|1");
    ASSERT_EQ(act(si, F2Vector::from_str("0|1")).str(), "0|1");
}

TEST(clifford_circuit, isotropy_preserved) {
    auto rng = test_rng(24);
    for (size_t n = 1; n <= 6; n++) {
        for (int rep = 0; rep < 30; rep++) {
            Subspace t = random_subspace(n, uniform_below(rng, n + 2), rng);
            CliffordCircuit c = random_clifford_circuit(n, 3 * n * n + 4, rng);
            Subspace image = act(c, t);
            ASSERT_EQ(image.dim(), t.dim());
            ASSERT_EQ(is_isotropic(image), is_isotropic(t));
        }
    }
}

TEST(clifford_circuit, covariance_with_simulation) {
    auto rng = test_rng(25);
    for (size_t n = 1; n <= 5; n++) {
        for (int rep = 0; rep < 10; rep++) {
            CliffordCircuit c = random_clifford_circuit(n, 4 * n * n + 4, rng);
            StateVector psi = haar_random_state(n, rng);
            StateVector cpsi = psi;
            cpsi.apply(c);
            for (int k = 0; k < 20; k++) {
                F2Vector x = random_vector(n, rng);
                double before = std::abs(weyl_expectation(psi, x));
                double after = std::abs(weyl_expectation(cpsi, act(c, x)));
                ASSERT_NEAR(before, after, 1e-9);
            }
        }
    }
}

TEST(isotropic_mapping_circuit, single_x) {
    Subspace h = row_reduce(std::vector<F2Vector>{F2Vector::from_str("1|0")}, 1);
    CliffordCircuit c = isotropic_mapping_circuit(h, true);
    ASSERT_EQ(act(c, F2Vector::from_str("1|0")).str(), "0|1");
}

TEST(isotropic_mapping_circuit, already_canonical) {
    for (size_t n = 1; n <= 5; n++) {
        for (size_t d = 0; d <= n; d++) {
            Subspace h = Subspace::trailing_z_block(n, d);
            CliffordCircuit c = isotropic_mapping_circuit(h, true);
            ASSERT_EQ(act(c, h), h);
        }
    }
}

TEST(isotropic_mapping_circuit, maps_random_isotropic_subspaces) {
    auto rng = test_rng(26);
    for (size_t n = 1; n <= 12; n++) {
        for (size_t d = 0; d <= n; d++) {
            for (int rep = 0; rep < 4; rep++) {
                Subspace h = random_isotropic_subspace(n, d, rng);
                CliffordCircuit c = isotropic_mapping_circuit(h, true);
                ASSERT_EQ(act(c, h), Subspace::trailing_z_block(n, d)) << "n=" << n << " d=" << d;
                ASSERT_LE(c.size(), kMappingGateConstant * n * d);
                ASSERT_TRUE(c.is_symplectic());
            }
        }
    }
}

TEST(isotropic_mapping_circuit, rejects_bad_input) {
    ASSERT_THROW(isotropic_mapping_circuit(Subspace::full(1)), DimensionError);
    Subspace xz = row_reduce(std::vector<F2Vector>{F2Vector::from_str("10|00"), F2Vector::from_str("00|10")}, 2);
    ASSERT_THROW(isotropic_mapping_circuit(xz), PromiseViolation);
}
