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

#include "stablearn/pauli.h"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>

#include "stablearn/errors.h"

namespace stablearn {

namespace {

/// i^k for k mod 4.
Complex i_power(unsigned k) {
    switch (k & 3) {
        case 0:
            return {1, 0};
        case 1:
            return {0, 1};
        case 2:
            return {-1, 0};
        default:
            return {0, -1};
    }
}

struct WeylMasks {
    uint64_t a;
    uint64_t b;
};

WeylMasks masks_for(const F2Vector &x, const StateVector &psi) {
    if (x.num_qubits() != psi.num_qubits()) {
        throw DimensionError("Weyl operator and state have different qubit counts");
    }
    return {x.x_words()[0], x.z_words()[0]};
}

bool parity(uint64_t v) {
    return std::popcount(v) & 1;
}

}  // namespace

StateVector weyl_apply(const F2Vector &x, const StateVector &psi) {
    auto [a, b] = masks_for(x, psi);
    Complex phase = i_power(static_cast<unsigned>(std::popcount(a & b)));
    std::vector<Complex> out(psi.size());
    for (uint64_t z = 0; z < psi.size(); z++) {
        Complex v = phase * psi[z];
        out[z ^ a] = parity(b & z) ? -v : v;
    }
    return StateVector::from_amplitudes(std::move(out), false, 1e-6);
}

double weyl_expectation(const StateVector &psi, const F2Vector &x) {
    auto [a, b] = masks_for(x, psi);
    Complex acc = 0;
    for (uint64_t z = 0; z < psi.size(); z++) {
        Complex term = std::conj(psi[z ^ a]) * psi[z];
        acc += parity(b & z) ? -term : term;
    }
    acc *= i_power(static_cast<unsigned>(std::popcount(a & b)));
    if (std::abs(acc.imag()) > 1e-9) {
        throw std::logic_error("weyl_expectation: imaginary residue " + std::to_string(acc.imag()));
    }
    return acc.real();
}

CharDistribution::CharDistribution(size_t num_qubits, std::vector<double> table)
    : num_qubits_(num_qubits), table_(std::move(table)) {
    if (num_qubits == 0 || 2 * num_qubits >= 64 || table_.size() != (uint64_t{1} << (2 * num_qubits))) {
        throw DimensionError("CharDistribution: table must have 4^n entries");
    }
}

double CharDistribution::operator[](const F2Vector &x) const {
    if (x.num_qubits() != num_qubits_) {
        throw DimensionError("CharDistribution: qubit count mismatch");
    }
    return table_[x.to_index()];
}

double CharDistribution::total() const {
    return std::accumulate(table_.begin(), table_.end(), 0.0);
}

void CharDistribution::save(const std::filesystem::path &path) const {
    static_assert(std::endian::native == std::endian::little, "binary table format assumes little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("CharDistribution::save: cannot open " + path.string());
    }
    auto n = static_cast<uint32_t>(num_qubits_);
    out.write(reinterpret_cast<const char *>(&n), sizeof(n));
    out.write(reinterpret_cast<const char *>(table_.data()), static_cast<std::streamsize>(table_.size() * sizeof(double)));
    if (!out) {
        throw std::runtime_error("CharDistribution::save: write failed for " + path.string());
    }
}

CharDistribution CharDistribution::load(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("CharDistribution::load: cannot open " + path.string());
    }
    uint32_t n = 0;
    in.read(reinterpret_cast<char *>(&n), sizeof(n));
    if (!in || n == 0 || n > 16) {
        throw std::runtime_error("CharDistribution::load: bad header in " + path.string());
    }
    std::vector<double> table(uint64_t{1} << (2 * n));
    in.read(reinterpret_cast<char *>(table.data()), static_cast<std::streamsize>(table.size() * sizeof(double)));
    if (!in || in.peek() != std::ifstream::traits_type::eof()) {
        throw std::runtime_error("CharDistribution::load: body size mismatch in " + path.string());
    }
    return CharDistribution(n, std::move(table));
}

void walsh_hadamard(std::vector<double> &values) {
    size_t size = values.size();
    if (size == 0 || (size & (size - 1)) != 0) {
        throw DimensionError("walsh_hadamard: size must be a power of two");
    }
    for (size_t h = 1; h < size; h <<= 1) {
        for (size_t i = 0; i < size; i += 2 * h) {
            for (size_t j = i; j < i + h; j++) {
                double u = values[j];
                double v = values[j + h];
                values[j] = u + v;
                values[j + h] = u - v;
            }
        }
    }
}

CharDistribution char_distribution(const StateVector &psi, size_t max_qubits) {
    size_t n = psi.num_qubits();
    if (n > max_qubits) {
        throw CapacityError("char_distribution: n = " + std::to_string(n) + " exceeds the oracle cap of " +
                            std::to_string(max_qubits));
    }
    if (n == 0) {
        throw DimensionError("char_distribution: need at least one qubit");
    }
    size_t dim = psi.size();
    double scale = std::ldexp(1.0, -static_cast<int>(n));
    std::vector<double> table(dim * dim);
    std::vector<double> re(dim);
    std::vector<double> im(dim);
    for (uint64_t a = 0; a < dim; a++) {
        for (uint64_t z = 0; z < dim; z++) {
            Complex f = std::conj(psi[z ^ a]) * psi[z];
            re[z] = f.real();
            im[z] = f.imag();
        }
        walsh_hadamard(re);
        walsh_hadamard(im);
        for (uint64_t b = 0; b < dim; b++) {
            Complex e = i_power(static_cast<unsigned>(std::popcount(a & b))) * Complex(re[b], im[b]);
            if (std::abs(e.imag()) > 1e-9) {
                throw std::logic_error("char_distribution: Weyl expectation is not real");
            }
            table[a | (b << n)] = scale * e.real() * e.real();
        }
    }
    return CharDistribution(n, std::move(table));
}

CharDistribution q_distribution(const CharDistribution &p) {
    std::vector<double> spectrum = p.table();
    walsh_hadamard(spectrum);
    for (auto &v : spectrum) {
        v *= v;
    }
    walsh_hadamard(spectrum);
    double inv = 1.0 / static_cast<double>(spectrum.size());
    for (auto &v : spectrum) {
        v = std::max(0.0, v * inv);
    }
    return CharDistribution(p.num_qubits(), std::move(spectrum));
}

double subspace_mass(const CharDistribution &dist, const Subspace &t, size_t max_dim) {
    if (t.num_qubits() != dist.num_qubits()) {
        throw DimensionError("subspace_mass: qubit count mismatch");
    }
    size_t d = t.dim();
    if (d > max_dim) {
        throw CapacityError("subspace_mass: dimension " + std::to_string(d) + " exceeds the enumeration cap of " +
                            std::to_string(max_dim));
    }
    std::vector<uint64_t> basis;
    basis.reserve(d);
    for (const auto &v : t.basis()) {
        basis.push_back(v.to_index());
    }
    // Gray-code walk: step k flips the basis vector at the lowest set bit of k.
    uint64_t cur = 0;
    double total = dist.at(0);
    for (uint64_t k = 1; k < (uint64_t{1} << d); k++) {
        cur ^= basis[static_cast<size_t>(std::countr_zero(k))];
        total += dist.at(cur);
    }
    return total;
}

Subspace unsigned_stabilizer_group(const StateVector &psi, size_t max_qubits) {
    CharDistribution p = char_distribution(psi, max_qubits);
    size_t n = psi.num_qubits();
    double threshold = std::ldexp((1 - 1e-8) * (1 - 1e-8), -static_cast<int>(n));
    std::vector<F2Vector> members;
    for (uint64_t x = 0; x < p.table().size(); x++) {
        if (p.at(x) >= threshold) {
            members.push_back(F2Vector::from_index(n, x));
        }
    }
    return row_reduce(members, n);
}

}  // namespace stablearn
