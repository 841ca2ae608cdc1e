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

#ifndef STABLEARN_PAULI_H
#define STABLEARN_PAULI_H

#include <filesystem>
#include <vector>

#include "stablearn/f2lin.h"
#include "stablearn/simstate.h"

namespace stablearn {

/// Largest n for which the exact 4^n tables are built.
inline constexpr size_t kOracleCap = 7;
/// Largest subspace dimension subspace_mass will enumerate.
inline constexpr size_t kEnumerationCap = 24;

// Weyl operators are indexed by F2Vector x = (a | b):
//   W_x = i^{a.b} (X^{a_1} Z^{b_1}) (x) ... (x) (X^{a_n} Z^{b_n}),
// with a.b the integer dot product. W_x is Hermitian and squares to I.

/// W_x |psi>: amplitude at z moves to z ^ a with factor i^{a.b} (-1)^{b.z}.
StateVector weyl_apply(const F2Vector &x, const StateVector &psi);

/// <psi|W_x|psi>, real. Throws std::logic_error if the imaginary residue exceeds 1e-9.
double weyl_expectation(const StateVector &psi, const F2Vector &x);

/// A real table over F_2^{2n}, indexed by F2Vector::to_index().
///
/// Holds p_psi(x) = 2^{-n} <psi|W_x|psi>^2 (the characteristic distribution) or its
/// XOR self-convolution q_psi.
class CharDistribution {
   public:
    CharDistribution(size_t num_qubits, std::vector<double> table);

    size_t num_qubits() const {
        return num_qubits_;
    }
    const std::vector<double> &table() const {
        return table_;
    }
    double operator[](const F2Vector &x) const;
    double at(uint64_t index) const {
        return table_[index];
    }
    double total() const;

    /// Binary layout: uint32 n (little-endian) followed by 4^n little-endian doubles.
    void save(const std::filesystem::path &path) const;
    static CharDistribution load(const std::filesystem::path &path);

   private:
    size_t num_qubits_;
    std::vector<double> table_;
};

/// Exact p_psi over all 4^n Weyl indices. One Walsh-Hadamard pass per X part a.
CharDistribution char_distribution(const StateVector &psi, size_t max_qubits = kOracleCap);

/// q(x) = sum_a p(a) p(x + a), via the Walsh-Hadamard transform on 2n bits.
CharDistribution q_distribution(const CharDistribution &p);

/// sum_{x in T} dist(x), enumerating T from its basis.
double subspace_mass(const CharDistribution &dist, const Subspace &t, size_t max_dim = kEnumerationCap);

/// Weyl(psi) = {x : |<psi|W_x|psi>| >= 1 - 1e-8}, by brute force over 4^n.
Subspace unsigned_stabilizer_group(const StateVector &psi, size_t max_qubits = kOracleCap);

/// In-place unnormalized Walsh-Hadamard transform; size must be a power of two.
void walsh_hadamard(std::vector<double> &values);

}  // namespace stablearn

#endif
