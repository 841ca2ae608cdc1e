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

#include "stablearn/f2lin.h"

#include <algorithm>
#include <bit>
#include <sstream>

#include "stablearn/errors.h"

namespace stablearn {

namespace {

void check_same_qubits(size_t a, size_t b, const char *where) {
    if (a != b) {
        std::stringstream ss;
        ss << where << ": qubit count mismatch (" << a << " vs " << b << ")";
        throw DimensionError(ss.str());
    }
}

}  // namespace

F2Vector::F2Vector(size_t num_qubits)
    : num_qubits_(num_qubits), words_per_half_((num_qubits + 63) / 64), words_(2 * words_per_half_, 0) {
    if (num_qubits == 0) {
        throw DimensionError("F2Vector: need at least one qubit");
    }
}

F2Vector F2Vector::from_str(std::string_view text) {
    auto bar = text.find('|');
    if (bar == std::string_view::npos || bar != text.size() - bar - 1 || bar == 0) {
        throw std::invalid_argument("F2Vector::from_str: expected 'a|b' with equal-length halves");
    }
    size_t n = bar;
    F2Vector v(n);
    for (size_t j = 0; j < n; j++) {
        char ca = text[j];
        char cb = text[bar + 1 + j];
        if ((ca != '0' && ca != '1') || (cb != '0' && cb != '1')) {
            throw std::invalid_argument("F2Vector::from_str: bits must be '0' or '1'");
        }
        v.set(j, ca == '1');
        v.set(n + j, cb == '1');
    }
    return v;
}

F2Vector F2Vector::from_hex(std::string_view text, size_t num_qubits) {
    F2Vector v(num_qubits);
    size_t nbits = 2 * num_qubits;
    if (text.size() != (nbits + 3) / 4) {
        throw std::invalid_argument("F2Vector::from_hex: wrong digit count");
    }
    for (size_t d = 0; d < text.size(); d++) {
        char c = text[d];
        int nibble;
        if (c >= '0' && c <= '9') {
            nibble = c - '0';
        } else if (c >= 'a' && c <= 'f') {
            nibble = c - 'a' + 10;
        } else if (c >= 'A' && c <= 'F') {
            nibble = c - 'A' + 10;
        } else {
            throw std::invalid_argument("F2Vector::from_hex: bad digit");
        }
        for (int k = 0; k < 4; k++) {
            size_t bit = 4 * d + k;
            bool on = (nibble >> (3 - k)) & 1;
            if (bit < nbits) {
                v.set(bit, on);
            } else if (on) {
                throw std::invalid_argument("F2Vector::from_hex: nonzero padding");
            }
        }
    }
    return v;
}

F2Vector F2Vector::from_index(size_t num_qubits, uint64_t index) {
    if (2 * num_qubits > 64) {
        throw CapacityError("F2Vector::from_index: needs 2n <= 64");
    }
    F2Vector v(num_qubits);
    uint64_t mask = (uint64_t{1} << num_qubits) - 1;
    v.words_[0] = index & mask;
    v.words_[1] = (index >> num_qubits) & mask;
    return v;
}

bool F2Vector::get(size_t bit) const {
    size_t half = bit / num_qubits_;
    size_t k = bit % num_qubits_;
    return (words_[half * words_per_half_ + k / 64] >> (k % 64)) & 1;
}

void F2Vector::set(size_t bit, bool value) {
    size_t half = bit / num_qubits_;
    size_t k = bit % num_qubits_;
    uint64_t &w = words_[half * words_per_half_ + k / 64];
    uint64_t m = uint64_t{1} << (k % 64);
    w = value ? (w | m) : (w & ~m);
}

void F2Vector::flip(size_t bit) {
    size_t half = bit / num_qubits_;
    size_t k = bit % num_qubits_;
    words_[half * words_per_half_ + k / 64] ^= uint64_t{1} << (k % 64);
}

bool F2Vector::is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](uint64_t w) { return w == 0; });
}

int F2Vector::first_set_bit() const {
    for (size_t w = 0; w < words_.size(); w++) {
        if (words_[w]) {
            size_t half = w / words_per_half_;
            size_t k = (w % words_per_half_) * 64 + static_cast<size_t>(std::countr_zero(words_[w]));
            return static_cast<int>(half * num_qubits_ + k);
        }
    }
    return -1;
}

uint64_t F2Vector::to_index() const {
    if (2 * num_qubits_ > 64) {
        throw CapacityError("F2Vector::to_index: needs 2n <= 64");
    }
    return words_[0] | (words_[1] << num_qubits_);
}

F2Vector F2Vector::swapped_halves() const {
    F2Vector out(num_qubits_);
    std::copy(words_.begin() + words_per_half_, words_.end(), out.words_.begin());
    std::copy(words_.begin(), words_.begin() + words_per_half_, out.words_.begin() + words_per_half_);
    return out;
}

F2Vector &F2Vector::operator^=(const F2Vector &other) {
    check_same_qubits(num_qubits_, other.num_qubits_, "F2Vector::operator^=");
    for (size_t w = 0; w < words_.size(); w++) {
        words_[w] ^= other.words_[w];
    }
    return *this;
}

bool F2Vector::operator<(const F2Vector &other) const {
    check_same_qubits(num_qubits_, other.num_qubits_, "F2Vector::operator<");
    for (size_t b = 0; b < num_bits(); b++) {
        bool l = get(b);
        bool r = other.get(b);
        if (l != r) {
            return r;
        }
    }
    return false;
}

std::string F2Vector::str() const {
    std::string out;
    out.reserve(num_bits() + 1);
    for (size_t j = 0; j < num_qubits_; j++) {
        out.push_back(x(j) ? '1' : '0');
    }
    out.push_back('|');
    for (size_t j = 0; j < num_qubits_; j++) {
        out.push_back(z(j) ? '1' : '0');
    }
    return out;
}

std::string F2Vector::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    size_t nbits = num_bits();
    std::string out;
    for (size_t d = 0; d < (nbits + 3) / 4; d++) {
        int nibble = 0;
        for (int k = 0; k < 4; k++) {
            size_t bit = 4 * d + k;
            nibble = (nibble << 1) | (bit < nbits && get(bit) ? 1 : 0);
        }
        out.push_back(kDigits[nibble]);
    }
    return out;
}

bool symplectic_product(const F2Vector &x, const F2Vector &y) {
    check_same_qubits(x.num_qubits(), y.num_qubits(), "symplectic_product");
    auto xa = x.x_words();
    auto xb = x.z_words();
    auto ya = y.x_words();
    auto yb = y.z_words();
    uint64_t acc = 0;
    for (size_t w = 0; w < xa.size(); w++) {
        acc ^= (xa[w] & yb[w]) ^ (xb[w] & ya[w]);
    }
    return std::popcount(acc) & 1;
}

Subspace::Subspace(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0) {
        throw DimensionError("Subspace: need at least one qubit");
    }
}

Subspace Subspace::full(size_t num_qubits) {
    Subspace s(num_qubits);
    for (size_t b = 0; b < 2 * num_qubits; b++) {
        F2Vector v(num_qubits);
        v.set(b, true);
        s.basis_.push_back(std::move(v));
        s.pivots_.push_back(b);
    }
    return s;
}

Subspace Subspace::trailing_z_block(size_t num_qubits, size_t d) {
    if (d > num_qubits) {
        throw DimensionError("trailing_z_block: d exceeds n");
    }
    Subspace s(num_qubits);
    for (size_t b = 2 * num_qubits - d; b < 2 * num_qubits; b++) {
        F2Vector v(num_qubits);
        v.set(b, true);
        s.basis_.push_back(std::move(v));
        s.pivots_.push_back(b);
    }
    return s;
}

F2Vector Subspace::reduce(F2Vector v) const {
    check_same_qubits(num_qubits_, v.num_qubits(), "Subspace::reduce");
    for (size_t i = 0; i < basis_.size(); i++) {
        if (v.get(pivots_[i])) {
            v ^= basis_[i];
        }
    }
    return v;
}

bool Subspace::insert(F2Vector v) {
    v = reduce(std::move(v));
    int p = v.first_set_bit();
    if (p < 0) {
        return false;
    }
    size_t pivot = static_cast<size_t>(p);
    // Clear the new pivot column from the existing rows to stay fully reduced.
    for (auto &row : basis_) {
        if (row.get(pivot)) {
            row ^= v;
        }
    }
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pivot) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, pivot);
    basis_.insert(basis_.begin() + pos, std::move(v));
    return true;
}

Subspace row_reduce(std::span<const F2Vector> vectors, size_t num_qubits) {
    Subspace s(num_qubits);
    for (const auto &v : vectors) {
        if (s.dim() == 2 * num_qubits) {
            check_same_qubits(num_qubits, v.num_qubits(), "row_reduce");
            continue;
        }
        s.insert(v);
    }
    return s;
}

Subspace symplectic_complement(const Subspace &h) {
    size_t n = h.num_qubits();
    size_t nbits = 2 * n;
    // Rows of the block-swapped matrix M; M v = 0 iff [row, v] = 0 for every basis row.
    std::vector<F2Vector> swapped;
    swapped.reserve(h.dim());
    for (const auto &row : h.basis()) {
        swapped.push_back(row.swapped_halves());
    }
    Subspace m = row_reduce(swapped, n);

    std::vector<bool> is_pivot(nbits, false);
    for (size_t i = 0; i < m.dim(); i++) {
        is_pivot[m.pivot(i)] = true;
    }
    std::vector<F2Vector> null_basis;
    null_basis.reserve(nbits - m.dim());
    for (size_t f = 0; f < nbits; f++) {
        if (is_pivot[f]) {
            continue;
        }
        F2Vector v(n);
        v.set(f, true);
        for (size_t i = 0; i < m.dim(); i++) {
            if (m.basis()[i].get(f)) {
                v.set(m.pivot(i), true);
            }
        }
        null_basis.push_back(std::move(v));
    }
    return row_reduce(null_basis, n);
}

bool is_isotropic(const Subspace &h) {
    const auto &b = h.basis();
    for (size_t i = 0; i < b.size(); i++) {
        for (size_t j = i + 1; j < b.size(); j++) {
            if (symplectic_product(b[i], b[j])) {
                return false;
            }
        }
    }
    return true;
}

bool contains(const Subspace &h, const F2Vector &x) {
    return h.reduce(x).is_zero();
}

bool is_subspace_of(const Subspace &inner, const Subspace &outer) {
    check_same_qubits(inner.num_qubits(), outer.num_qubits(), "is_subspace_of");
    return std::all_of(inner.basis().begin(), inner.basis().end(),
                       [&](const F2Vector &v) { return contains(outer, v); });
}

F2Vector random_vector(size_t num_qubits, Rng &rng) {
    F2Vector v(num_qubits);
    for (size_t b = 0; b < 2 * num_qubits; b++) {
        v.set(b, rng() & 1);
    }
    return v;
}

Subspace random_subspace(size_t num_qubits, size_t count, Rng &rng) {
    std::vector<F2Vector> vs;
    vs.reserve(count);
    for (size_t k = 0; k < count; k++) {
        vs.push_back(random_vector(num_qubits, rng));
    }
    return row_reduce(vs, num_qubits);
}

}  // namespace stablearn
