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

#include "stablearn/simstate.h"

#include <numeric>
#include <thread>

#include "gtest/gtest.h"

#include "stablearn/errors.h"
#include "stablearn/pauli.h"
#include "test_util.h"

using namespace stablearn;
using namespace stablearn::testing;

namespace {

Dense dense_of(const Mat2 &m) {
    return mat2(m[0], m[1], m[2], m[3]);
}

double tv_distance(const std::vector<double> &a, const std::vector<double> &b) {
    double acc = 0;
    for (size_t i = 0; i < a.size(); i++) {
        acc += std::abs(a[i] - b[i]);
    }
    return acc / 2;
}

}  // namespace

TEST(state_vector, construction) {
    StateVector zero(3);
    ASSERT_EQ(zero.size(), 8);
    ASSERT_EQ(zero[0], Complex(1));
    StateVector empty(0);
    ASSERT_EQ(empty.size(), 1);
    ASSERT_EQ(empty[0], Complex(1));

    StateVector b = StateVector::basis_state(3, 5);
    ASSERT_EQ(b[5], Complex(1));
    ASSERT_THROW(StateVector::basis_state(2, 4), DimensionError);
    ASSERT_THROW(StateVector::from_amplitudes({1, 1}), std::invalid_argument);
    ASSERT_THROW(StateVector::from_amplitudes({1, 0, 0}), DimensionError);
    StateVector norm = StateVector::from_amplitudes({1, 1}, true);
    ASSERT_NEAR(norm.norm(), 1, 1e-12);
}

TEST(state_vector, gates_match_dense_matrices) {
    auto rng = test_rng(30);
    for (size_t n = 1; n <= 4; n++) {
        for (int rep = 0; rep < 10; rep++) {
            StateVector psi = haar_random_state(n, rng);
            for (uint32_t q = 0; q < n; q++) {
                StateVector h = psi;
                h.apply_h(q);
                ASSERT_LT(max_abs_diff(h.amplitudes(), apply_dense(embed(n, q, hadamard()), psi.amplitudes())), 1e-12);

                StateVector s = psi;
                s.apply_s(q);
                ASSERT_LT(max_abs_diff(s.amplitudes(), apply_dense(embed(n, q, phase_s()), psi.amplitudes())), 1e-12);

                StateVector sd = psi;
                sd.apply_s_dag(q);
                Dense sdm = mat2(1, 0, 0, Complex(0, -1));
                ASSERT_LT(max_abs_diff(sd.amplitudes(), apply_dense(embed(n, q, sdm), psi.amplitudes())), 1e-12);

                Mat2 u = haar_random_unitary(rng);
                StateVector uu = psi;
                uu.apply_u1(q, u);
                ASSERT_LT(max_abs_diff(uu.amplitudes(), apply_dense(embed(n, q, dense_of(u)), psi.amplitudes())),
                          1e-12);
                ASSERT_NEAR(uu.norm(), 1, 1e-9);

                for (uint32_t r = 0; r < n; r++) {
                    if (r == q) {
                        continue;
                    }
                    StateVector c = psi;
                    c.apply_cnot(q, r);
                    ASSERT_LT(max_abs_diff(c.amplitudes(), apply_dense(cnot_matrix(n, q, r), psi.amplitudes())),
                              1e-12);
                }
            }
        }
    }
    StateVector psi(2);
    ASSERT_THROW(psi.apply_h(2), DimensionError);
    ASSERT_THROW(psi.apply_cnot(1, 1), DimensionError);
}

TEST(state_vector, norm_preserved_by_random_circuits) {
    auto rng = test_rng(31);
    for (size_t n = 1; n <= 8; n++) {
        StateVector psi = haar_random_state(n, rng);
        for (int g = 0; g < 200; g++) {
            psi.apply(random_clifford_gate(n, rng));
            if (g % 17 == 0) {
                psi.apply_u1(uniform_below(rng, n), haar_random_unitary(rng));
            }
            ASSERT_NEAR(psi.norm(), 1, 1e-9);
        }
    }
}

TEST(unitary, t_gate_and_haar) {
    Mat2 t = t_gate_matrix();
    ASSERT_TRUE(is_unitary(t));
    ASSERT_NEAR(std::arg(t[3]), M_PI / 4, 1e-15);
    ASSERT_FALSE(is_unitary({Complex(1), 0, 0, Complex(2)}));
    auto rng = test_rng(32);
    for (int rep = 0; rep < 100; rep++) {
        ASSERT_TRUE(is_unitary(haar_random_unitary(rng)));
    }
}

TEST(tensor, qubit_ordering) {
    StateVector low = StateVector::basis_state(2, 1);   // qubit 0 = 1
    StateVector high = StateVector::basis_state(1, 1);  // qubit 2 = 1
    StateVector joined = tensor(low, high);
    ASSERT_EQ(joined.num_qubits(), 3);
    ASSERT_EQ(joined[0b101], Complex(1));
    ASSERT_EQ(tensor(StateVector(0), low)[1], Complex(1));
}

TEST(fidelity, identities) {
    auto rng = test_rng(33);
    StateVector a = haar_random_state(3, rng);
    ASSERT_NEAR(fidelity(a, a), 1, 1e-12);
    ASSERT_NEAR(trace_distance(a, a), 0, 1e-6);
    ASSERT_NEAR(fidelity(StateVector::basis_state(2, 0), StateVector::basis_state(2, 3)), 0, 1e-15);
    ASSERT_NEAR(trace_distance(StateVector::basis_state(2, 0), StateVector::basis_state(2, 3)), 1, 1e-15);
    for (int rep = 0; rep < 50; rep++) {
        StateVector x = haar_random_state(3, rng);
        StateVector y = haar_random_state(3, rng);
        double f = fidelity(x, y);
        double d = trace_distance(x, y);
        ASSERT_GE(f, 0);
        ASSERT_LE(f, 1);
        ASSERT_NEAR(d * d + f, 1, 1e-12);
    }
    ASSERT_THROW(fidelity(StateVector(1), StateVector(2)), DimensionError);
}

TEST(doped_circuit, text_format) {
    std::string text =
        "H 0\n"
        "T 1\n"
        "CNOT 0 1  # entangle\n"
        "U1 0 0 0 1 0 1 0 0 0\n";
    DopedCircuit c = DopedCircuit::from_text(text, 2);
    ASSERT_EQ(c.gates().size(), 4);
    ASSERT_EQ(c.t(), 2);
    DopedCircuit again = DopedCircuit::from_text(c.str(), 2);
    ASSERT_EQ(again.t(), 2);
    ASSERT_EQ(again.str(), c.str());
    ASSERT_LT(max_abs_diff(prepare(c).amplitudes(), prepare(again).amplitudes()), 1e-15);

    ASSERT_THROW(DopedCircuit::from_text("U1 0 1 0 0 0 0 0 2 0\n", 2), std::invalid_argument);
    ASSERT_THROW(DopedCircuit::from_text("U1 0 1 0\n", 2), std::invalid_argument);
    ASSERT_THROW(DopedCircuit::from_text("T 2\n", 2), std::invalid_argument);
    ASSERT_THROW(DopedCircuit::from_text("Q 0\n", 2), std::invalid_argument);
}

TEST(prepare, examples) {
    DopedCircuit empty(3);
    StateVector zero = prepare(empty);
    ASSERT_EQ(zero[0], Complex(1));

    DopedCircuit h(1);
    h.append(CliffordGate::h(0));
    StateVector plus = prepare(h);
    ASSERT_NEAR(plus[0].real(), 1 / std::sqrt(2.0), 1e-15);
    ASSERT_NEAR(plus[1].real(), 1 / std::sqrt(2.0), 1e-15);

    ASSERT_THROW(prepare(DopedCircuit(15)), CapacityError);
    ASSERT_THROW(prepare(DopedCircuit(5), 4), CapacityError);

    DopedCircuit bad(1);
    ASSERT_THROW(bad.append_u1(0, {Complex(1), 0, 0, Complex(0.5)}), std::invalid_argument);
}

TEST(prepare, clifford_circuits_give_stabilizer_states) {
    auto rng = test_rng(34);
    for (size_t n = 1; n <= 5; n++) {
        for (int rep = 0; rep < 5; rep++) {
            DopedCircuit c(n);
            for (size_t g = 0; g < 4 * n * n + 8; g++) {
                c.append(random_clifford_gate(n, rng));
            }
            ASSERT_EQ(unsigned_stabilizer_group(prepare(c)).dim(), n);
        }
    }
}

TEST(measurement, marginals_match_brute_force) {
    auto rng = test_rng(35);
    StateVector psi = haar_random_state(4, rng);
    std::vector<size_t> qubits{3, 1};
    std::vector<double> marg = marginal_probabilities(psi, qubits);
    ASSERT_EQ(marg.size(), 4);
    std::vector<double> expected(4, 0);
    for (size_t z = 0; z < 16; z++) {
        size_t outcome = ((z >> 3) & 1) | (((z >> 1) & 1) << 1);
        expected[outcome] += std::norm(psi[z]);
    }
    for (size_t k = 0; k < 4; k++) {
        ASSERT_NEAR(marg[k], expected[k], 1e-12);
    }
    std::vector<size_t> bad{4};
    ASSERT_THROW(marginal_probabilities(psi, bad), DimensionError);
}

TEST(measurement, basis_states_are_deterministic) {
    auto rng = test_rng(36);
    StateVector b = StateVector::basis_state(4, 0b1011);
    std::vector<size_t> all{0, 1, 2, 3};
    for (int rep = 0; rep < 50; rep++) {
        Measurement m = measure_computational(b, all, rng);
        ASSERT_EQ(m.outcome, 0b1011);
        ASSERT_NEAR(fidelity(m.collapsed, b), 1, 1e-12);
    }
}

TEST(measurement, bell_pair) {
    auto rng = test_rng(37);
    StateVector bell(2);
    bell.apply_h(0);
    bell.apply_cnot(0, 1);
    std::vector<size_t> second{1};
    size_t ones = 0;
    const size_t shots = 20000;
    for (size_t i = 0; i < shots; i++) {
        Measurement m = measure_computational(bell, second, rng);
        ASSERT_NEAR(m.collapsed.norm(), 1, 1e-12);
        ASSERT_NEAR(fidelity(m.collapsed, StateVector::basis_state(2, m.outcome ? 3 : 0)), 1, 1e-12);
        ones += m.outcome;
    }
    // 5 sigma of a fair coin over 20000 draws is about 0.018.
    ASSERT_NEAR(static_cast<double>(ones) / shots, 0.5, 0.02);
}

TEST(measurement, postselect_tail) {
    auto rng = test_rng(38);
    StateVector phi = haar_random_state(2, rng);
    StateVector joined = tensor(phi, StateVector::basis_state(3, 0b101));
    StateVector back = postselect_tail(joined, 2, 0b101);
    ASSERT_EQ(back.num_qubits(), 2);
    ASSERT_NEAR(fidelity(back, phi), 1, 1e-12);
    ASSERT_THROW(postselect_tail(joined, 2, 0b100), std::invalid_argument);
    ASSERT_EQ(postselect_tail(StateVector::basis_state(3, 5), 0, 5).num_qubits(), 0);
}

TEST(state_source, metering) {
    StateSource src(StateVector(2), 10);
    ASSERT_EQ(src.copies_used(), 0);
    src.take(3);
    ASSERT_EQ(src.copies_used(), 3);
    ASSERT_EQ(src.remaining(), 7);
    ASSERT_THROW(src.take(8), BudgetExhausted);
    ASSERT_EQ(src.copies_used(), 3);
    src.take(7);
    ASSERT_EQ(src.remaining(), 0);
    ASSERT_THROW(src.take(1), BudgetExhausted);

    auto rng = test_rng(39);
    StateSource bell_src(StateVector(2), 7);
    bell_difference_sample(bell_src, rng);
    ASSERT_EQ(bell_src.copies_used(), 4);
    ASSERT_THROW(bell_difference_sample(bell_src, rng), BudgetExhausted);
    ASSERT_EQ(bell_src.copies_used(), 4);
}

TEST(state_source, concurrent_takes_are_counted_exactly) {
    StateSource src(StateVector(3));
    std::vector<std::thread> threads;
    for (int w = 0; w < 4; w++) {
        threads.emplace_back([&] {
            for (int i = 0; i < 1000; i++) {
                src.take(1 + (i % 3));
            }
        });
    }
    for (auto &t : threads) {
        t.join();
    }
    ASSERT_EQ(src.copies_used(), 4 * (334 * 1 + 333 * 2 + 333 * 3));
}

TEST(bell_sampler, difference_distribution_is_exactly_q) {
    auto rng = test_rng(40);
    for (size_t n = 1; n <= 3; n++) {
        for (int rep = 0; rep < 4; rep++) {
            StateVector psi = rep % 2 ? haar_random_state(n, rng) : random_doped_state(n, 2, rng);
            BellSampler sampler(psi);
            std::vector<double> round(uint64_t{1} << (2 * n));
            for (uint64_t x = 0; x < round.size(); x++) {
                round[x] = sampler.round_probability(vec_of(n, x));
            }
            ASSERT_NEAR(std::accumulate(round.begin(), round.end(), 0.0), 1, 1e-12);
            std::vector<double> diff = naive_convolution(round);
            std::vector<double> q = naive_convolution(dense_char_table(psi));
            for (uint64_t x = 0; x < q.size(); x++) {
                ASSERT_NEAR(diff[x], q[x], 1e-12) << "n=" << n << " x=" << x;
            }
        }
    }
}

TEST(bell_sampler, empirical_tv_against_oracle) {
    auto rng = test_rng(41);
    const size_t n = 4;
    const size_t samples = 50000;
    for (int rep = 0; rep < 2; rep++) {
        StateVector psi = random_doped_state(n, 2, rng);
        std::vector<double> q = naive_convolution(dense_char_table(psi));
        StateSource src(psi);
        std::vector<double> hist(q.size(), 0);
        for (size_t i = 0; i < samples; i++) {
            hist[bell_difference_sample(src, rng).to_index()] += 1.0 / samples;
        }
        ASSERT_EQ(src.copies_used(), 4 * samples);
        ASSERT_LE(tv_distance(hist, q), 0.05);
    }
}

TEST(bell_sampler, samples_respect_weyl_structure) {
    auto rng = test_rng(42);
    for (size_t n = 1; n <= 5; n++) {
        StateVector stab = random_stabilizer_state(n, rng);
        Subspace weyl = unsigned_stabilizer_group(stab);
        ASSERT_EQ(weyl.dim(), n);
        StateSource src(stab);
        for (int i = 0; i < 200; i++) {
            ASSERT_TRUE(contains(weyl, bell_difference_sample(src, rng)));
        }

        StateVector doped = random_doped_state(n, 1, rng);
        Subspace perp = symplectic_complement(unsigned_stabilizer_group(doped));
        StateSource dsrc(doped);
        for (int i = 0; i < 200; i++) {
            ASSERT_TRUE(contains(perp, bell_difference_sample(dsrc, rng)));
        }
    }
}

TEST(bell_sampler, capacity) {
    ASSERT_THROW(BellSampler(StateVector(13)), CapacityError);
    ASSERT_THROW(BellSampler(StateVector(5), 4), CapacityError);
}

TEST(measurement, collision_frequency_matches_char_mass) {
    auto rng = test_rng(43);
    const size_t n = 4;
    for (size_t t = 0; t <= 2; t++) {
        StateVector psi = random_doped_state(n, 2, rng);
        std::vector<size_t> tail;
        for (size_t q = t; q < n; q++) {
            tail.push_back(q);
        }
        std::vector<double> p = dense_char_table(psi);
        double mass = 0;
        for (uint64_t b = 0; b < (uint64_t{1} << (n - t)); b++) {
            mass += p[(b << t) << n];
        }
        double expected = std::ldexp(mass, static_cast<int>(t));

        const size_t pairs = 20000;
        size_t hits = 0;
        for (size_t i = 0; i < pairs; i++) {
            hits += measure_computational(psi, tail, rng).outcome == measure_computational(psi, tail, rng).outcome;
        }
        ASSERT_NEAR(static_cast<double>(hits) / pairs, expected, 0.02) << "t=" << t;
    }
}
