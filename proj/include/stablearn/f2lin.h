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

#ifndef STABLEARN_F2LIN_H
#define STABLEARN_F2LIN_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablearn/rng.h"

namespace stablearn {

/// An element x = (a | b) of F_2^{2n}.
///
/// Bit j < n is a_j (the X part of qubit j); bit n + j is b_j (the Z part of qubit j).
/// Storage is two word-aligned halves so that the symplectic product is a pair of
/// AND/XOR/popcount sweeps and the X/Z block swap is a word swap.
class F2Vector {
   public:
    /// The zero vector on n qubits (n >= 1).
    explicit F2Vector(size_t num_qubits);

    /// Parses "a|b" with both halves given as '0'/'1' strings of equal length, e.g. "10|01".
    static F2Vector from_str(std::string_view text);
    /// Inverse of hex().
    static F2Vector from_hex(std::string_view text, size_t num_qubits);
    /// Bit j of `index` becomes bit j of the vector. Requires 2n <= 64.
    static F2Vector from_index(size_t num_qubits, uint64_t index);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t num_bits() const {
        return 2 * num_qubits_;
    }

    bool get(size_t bit) const;
    void set(size_t bit, bool value);
    void flip(size_t bit);
    bool x(size_t qubit) const {
        return get(qubit);
    }
    bool z(size_t qubit) const {
        return get(num_qubits_ + qubit);
    }

    bool is_zero() const;
    /// Lowest set bit index, or -1 for the zero vector.
    int first_set_bit() const;
    /// Inverse of from_index. Requires 2n <= 64.
    uint64_t to_index() const;
    /// The (b | a) vector.
    F2Vector swapped_halves() const;

    std::span<const uint64_t> x_words() const {
        return {words_.data(), words_per_half_};
    }
    std::span<const uint64_t> z_words() const {
        return {words_.data() + words_per_half_, words_per_half_};
    }

    F2Vector &operator^=(const F2Vector &other);
    friend F2Vector operator^(F2Vector lhs, const F2Vector &rhs) {
        lhs ^= rhs;
        return lhs;
    }
    bool operator==(const F2Vector &other) const = default;
    /// Lexicographic on bit index (bit 0 most significant), for deterministic ordering.
    bool operator<(const F2Vector &other) const;

    /// "a|b" rendering, bit 0 first.
    std::string str() const;
    /// The 2n bits a-part first, packed four per hex digit with the earliest bit in the
    /// most significant position; the tail is zero-padded to a whole digit.
    std::string hex() const;

   private:
    size_t num_qubits_;
    size_t words_per_half_;
    std::vector<uint64_t> words_;
};

/// Sum over qubits of a_i b'_i + b_i a'_i, mod 2.
bool symplectic_product(const F2Vector &x, const F2Vector &y);

/// A subspace of F_2^{2n} held as its reduced row echelon basis.
///
/// Pivots are the lowest set bit of each basis vector, strictly increasing along the
/// basis, and every pivot column is zero in all other basis vectors. Two Subspace values
/// span the same set iff they compare equal.
class Subspace {
   public:
    /// The zero subspace.
    explicit Subspace(size_t num_qubits);

    /// All of F_2^{2n}.
    static Subspace full(size_t num_qubits);
    /// 0^{2n-d} x F_2^d: the Z parts of the last d qubits.
    static Subspace trailing_z_block(size_t num_qubits, size_t d);

    size_t num_qubits() const {
        return num_qubits_;
    }
    size_t dim() const {
        return basis_.size();
    }
    const std::vector<F2Vector> &basis() const {
        return basis_;
    }
    /// Pivot column of basis vector i.
    size_t pivot(size_t i) const {
        return pivots_[i];
    }

    /// Residue of v after eliminating every pivot column; zero iff v is in the span.
    F2Vector reduce(F2Vector v) const;
    /// Adds v to the span, keeping the basis canonical. Returns false if v was already in it.
    bool insert(F2Vector v);

    bool operator==(const Subspace &other) const = default;

   private:
    size_t num_qubits_;
    std::vector<F2Vector> basis_;
    std::vector<size_t> pivots_;
};

Subspace row_reduce(std::span<const F2Vector> vectors, size_t num_qubits);

/// H^perp: swap the X and Z column blocks of the basis matrix and return
/// a basis of its nullspace.
Subspace symplectic_complement(const Subspace &h);

bool is_isotropic(const Subspace &h);
bool contains(const Subspace &h, const F2Vector &x);
/// Whether every basis vector of `inner` lies in `outer`.
bool is_subspace_of(const Subspace &inner, const Subspace &outer);

/// A d-dimensional isotropic subspace: 0^{2n-d} x F_2^d pushed through a random Clifford
/// circuit's symplectic action. Throws DimensionError for d > n.
Subspace random_isotropic_subspace(size_t num_qubits, size_t d, Rng &rng);

/// Span of `count` independent uniform vectors (test fixture helper).
Subspace random_subspace(size_t num_qubits, size_t count, Rng &rng);
F2Vector random_vector(size_t num_qubits, Rng &rng);

}  // namespace stablearn

#endif
