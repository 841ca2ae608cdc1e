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

#ifndef STABLEARN_SIMSTATE_H
#define STABLEARN_SIMSTATE_H

#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stablearn/clifford.h"
#include "stablearn/f2lin.h"
#include "stablearn/rng.h"

namespace stablearn {

using Complex = std::complex<double>;

/// Default simulation caps. Single-copy work is bounded by n; two-copy work (the Bell
/// sampling register of 2n qubits) is bounded by n as well, so 2n <= 24.
inline constexpr size_t kSingleCopyCap = 14;
inline constexpr size_t kTwoCopyCap = 12;

/// Row-major 2x2 complex matrix {m00, m01, m10, m11}.
using Mat2 = std::array<Complex, 4>;

Mat2 t_gate_matrix();
bool is_unitary(const Mat2 &m, double tol = 1e-9);
/// Haar-random single-qubit unitary.
Mat2 haar_random_unitary(Rng &rng);

/// Dense amplitudes of an n-qubit pure state. Qubit q is bit q of the basis index.
class StateVector {
   public:
    /// |0^n>. n = 0 is the one-amplitude empty register.
    explicit StateVector(size_t num_qubits);
    /// Takes ownership of the amplitudes; size must be 2^n. Throws if the norm differs
    /// from 1 by more than `norm_tol` unless `normalize` is set.
    static StateVector from_amplitudes(std::vector<Complex> amplitudes, bool normalize = false,
                                       double norm_tol = 1e-9);
    static StateVector basis_state(size_t num_qubits, uint64_t index);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t size() const {
        return amplitudes_.size();
    }
    std::span<const Complex> amplitudes() const {
        return amplitudes_;
    }
    const Complex &operator[](size_t index) const {
        return amplitudes_[index];
    }
    double norm() const;

    void apply_h(size_t q);
    void apply_s(size_t q);
    void apply_s_dag(size_t q);
    void apply_cnot(size_t control, size_t target);
    void apply_u1(size_t q, const Mat2 &m);
    void apply(const CliffordGate &gate);
    void apply(const CliffordCircuit &circuit);

   private:
    StateVector() = default;
    void check_qubit(size_t q) const;

    size_t num_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

/// The product state `low` (on the first qubits) tensored with `high` (on the rest).
StateVector tensor(const StateVector &low, const StateVector &high);

StateVector haar_random_state(size_t num_qubits, Rng &rng);

/// |<psi|phi>|^2.
double fidelity(const StateVector &psi, const StateVector &phi);
/// sqrt(1 - fidelity).
double trace_distance(const StateVector &psi, const StateVector &phi);
/// <psi|phi>.
Complex inner_product(const StateVector &psi, const StateVector &phi);

/// A gate of a t-doped circuit: a Clifford gate or a single-qubit unitary.
struct U1Gate {
    uint32_t qubit;
    Mat2 matrix;
};
using DopedGate = std::variant<CliffordGate, U1Gate>;

class DopedCircuit {
   public:
    explicit DopedCircuit(size_t num_qubits);

    /// The Clifford text format plus "T q" and "U1 q re00 im00 re01 im01 re10 im10 re11 im11".
    static DopedCircuit from_text(std::string_view text, size_t num_qubits);

    void append(const CliffordGate &gate);
    /// Throws std::invalid_argument if `matrix` is not unitary within 1e-9.
    void append_u1(uint32_t qubit, const Mat2 &matrix);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<DopedGate> &gates() const {
        return gates_;
    }
    /// Number of U1 gates.
    size_t t() const {
        return t_count_;
    }

    /// Text form; T gates are written with the shorthand, other U1 gates in full.
    std::string str() const;

   private:
    size_t num_qubits_;
    size_t t_count_ = 0;
    std::vector<DopedGate> gates_;
};

/// Runs the circuit on |0^n>.
StateVector prepare(const DopedCircuit &circuit, size_t max_qubits = kSingleCopyCap);

/// Born probabilities of the listed qubits; outcome bit k is qubit qubits[k].
std::vector<double> marginal_probabilities(const StateVector &psi, std::span<const size_t> qubits);

struct Measurement {
    uint64_t outcome;  // bit k is the result on qubits[k]
    StateVector collapsed;
};

/// Samples the listed qubits by inverse CDF with one 64-bit draw and returns the
/// renormalized post-measurement state on all n qubits.
Measurement measure_computational(const StateVector &psi, std::span<const size_t> qubits, Rng &rng);

/// Projects the qubits [keep, n) onto |outcome> (bit k of outcome is qubit keep + k) and
/// returns the normalized state of qubits [0, keep). Throws if the branch has zero weight.
StateVector postselect_tail(const StateVector &psi, size_t keep, uint64_t outcome);

/// Precomputed output distribution of one Bell measurement round on |psi>|psi>.
///
/// Copy 1 occupies qubits [0, n) and copy 2 qubits [n, 2n). The round applies CNOT(i -> n+i)
/// then H(i) for every i and measures all 2n qubits. With m_i the result on qubit i and
/// m'_i the result on qubit n+i, the round reports x = (a | b) with a_i = m'_i, b_i = m_i.
class BellSampler {
   public:
    explicit BellSampler(const StateVector &psi, size_t max_qubits = kTwoCopyCap);

    size_t num_qubits() const {
        return num_qubits_;
    }
    /// One round (two copies).
    F2Vector sample_round(Rng &rng) const;
    /// Probability of the round reporting `x`.
    double round_probability(const F2Vector &x) const;

   private:
    size_t num_qubits_;
    std::vector<double> probabilities_;  // indexed by m | (m' << n)
    std::vector<double> cdf_;
};

/// A metered supply of copies of one fixed state.
///
/// take() hands out read-only access to the state and advances the counter by exactly the
/// number of copies requested; requests beyond the budget throw BudgetExhausted and
/// consume nothing. Measurement randomness is supplied by the caller's Rng, so every
/// measured copy is an independent draw. Thread-safe.
class StateSource {
   public:
    static constexpr uint64_t kUnlimited = std::numeric_limits<uint64_t>::max();

    explicit StateSource(StateVector state, uint64_t budget = kUnlimited, size_t two_copy_cap = kTwoCopyCap);

    size_t num_qubits() const {
        return state_->num_qubits();
    }
    std::shared_ptr<const StateVector> take(uint64_t copies);
    uint64_t copies_used() const;
    uint64_t remaining() const;
    uint64_t budget() const {
        return budget_;
    }

    /// Lazily built sampler for Bell rounds on this state. Building it consumes no copies.
    const BellSampler &bell_sampler();

   private:
    std::shared_ptr<const StateVector> state_;
    uint64_t budget_;
    size_t two_copy_cap_;
    mutable std::mutex mutex_;
    uint64_t used_ = 0;
    std::unique_ptr<BellSampler> bell_;
};

/// Bell difference sampling: consumes 4 copies (two Bell rounds on fresh pairs) and returns
/// the XOR of the two rounds, which is distributed as q_psi.
F2Vector bell_difference_sample(StateSource &src, Rng &rng);

}  // namespace stablearn

#endif
