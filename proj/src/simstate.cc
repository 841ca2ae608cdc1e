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

#include <bit>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "stablearn/errors.h"

namespace stablearn {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

uint64_t gather_bits(uint64_t index, std::span<const size_t> qubits) {
    uint64_t out = 0;
    for (size_t k = 0; k < qubits.size(); k++) {
        out |= ((index >> qubits[k]) & 1) << k;
    }
    return out;
}

void check_capacity(size_t n, size_t cap, const char *what) {
    if (n > cap) {
        throw CapacityError(std::string(what) + ": " + std::to_string(n) + " qubits exceeds the cap of " +
                            std::to_string(cap));
    }
}

}  // namespace

Mat2 t_gate_matrix() {
    return {Complex(1, 0), Complex(0, 0), Complex(0, 0), std::polar(1.0, std::numbers::pi / 4)};
}

bool is_unitary(const Mat2 &m, double tol) {
    // M^dagger M = I
    Complex a = std::conj(m[0]) * m[0] + std::conj(m[2]) * m[2];
    Complex b = std::conj(m[0]) * m[1] + std::conj(m[2]) * m[3];
    Complex d = std::conj(m[1]) * m[1] + std::conj(m[3]) * m[3];
    return std::abs(a - 1.0) <= tol && std::abs(b) <= tol && std::abs(d - 1.0) <= tol;
}

Mat2 haar_random_unitary(Rng &rng) {
    std::normal_distribution<double> normal;
    Complex a(normal(rng), normal(rng));
    Complex b(normal(rng), normal(rng));
    double r = std::sqrt(std::norm(a) + std::norm(b));
    a /= r;
    b /= r;
    Complex phase = std::polar(1.0, 2 * std::numbers::pi * uniform_unit(rng));
    return {a, -std::conj(b) * phase, b, std::conj(a) * phase};
}

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits >= 40) {
        throw CapacityError("StateVector: too many qubits for a dense state");
    }
    amplitudes_.assign(size_t{1} << num_qubits, Complex(0, 0));
    amplitudes_[0] = 1;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes, bool normalize, double norm_tol) {
    size_t size = amplitudes.size();
    if (size == 0 || (size & (size - 1)) != 0) {
        throw DimensionError("StateVector::from_amplitudes: size must be a power of two");
    }
    StateVector out;
    out.num_qubits_ = static_cast<size_t>(std::countr_zero(size));
    out.amplitudes_ = std::move(amplitudes);
    double nrm = out.norm();
    if (normalize) {
        if (!(nrm > 0)) {
            throw std::invalid_argument("StateVector::from_amplitudes: zero vector");
        }
        for (auto &a : out.amplitudes_) {
            a /= nrm;
        }
    } else if (std::abs(nrm - 1.0) > norm_tol) {
        throw std::invalid_argument("StateVector::from_amplitudes: amplitudes are not normalized");
    }
    return out;
}

StateVector StateVector::basis_state(size_t num_qubits, uint64_t index) {
    StateVector out(num_qubits);
    if (index >= out.size()) {
        throw DimensionError("StateVector::basis_state: index out of range");
    }
    out.amplitudes_[0] = 0;
    out.amplitudes_[index] = 1;
    return out;
}

double StateVector::norm() const {
    double s = 0;
    for (const auto &a : amplitudes_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

void StateVector::check_qubit(size_t q) const {
    if (q >= num_qubits_) {
        throw DimensionError("qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) +
                             " qubits");
    }
}

void StateVector::apply_h(size_t q) {
    check_qubit(q);
    size_t stride = size_t{1} << q;
    for (size_t i = 0; i < amplitudes_.size(); i++) {
        if (i & stride) {
            continue;
        }
        Complex a = amplitudes_[i];
        Complex b = amplitudes_[i | stride];
        amplitudes_[i] = (a + b) * kInvSqrt2;
        amplitudes_[i | stride] = (a - b) * kInvSqrt2;
    }
}

void StateVector::apply_s(size_t q) {
    check_qubit(q);
    size_t stride = size_t{1} << q;
    for (size_t i = 0; i < amplitudes_.size(); i++) {
        if (i & stride) {
            amplitudes_[i] = Complex(-amplitudes_[i].imag(), amplitudes_[i].real());
        }
    }
}

void StateVector::apply_s_dag(size_t q) {
    check_qubit(q);
    size_t stride = size_t{1} << q;
    for (size_t i = 0; i < amplitudes_.size(); i++) {
        if (i & stride) {
            amplitudes_[i] = Complex(amplitudes_[i].imag(), -amplitudes_[i].real());
        }
    }
}

void StateVector::apply_cnot(size_t control, size_t target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw DimensionError("CNOT control and target must differ");
    }
    size_t cmask = size_t{1} << control;
    size_t tmask = size_t{1} << target;
    for (size_t i = 0; i < amplitudes_.size(); i++) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
}

void StateVector::apply_u1(size_t q, const Mat2 &m) {
    check_qubit(q);
    size_t stride = size_t{1} << q;
    for (size_t i = 0; i < amplitudes_.size(); i++) {
        if (i & stride) {
            continue;
        }
        Complex a = amplitudes_[i];
        Complex b = amplitudes_[i | stride];
        amplitudes_[i] = m[0] * a + m[1] * b;
        amplitudes_[i | stride] = m[2] * a + m[3] * b;
    }
}

void StateVector::apply(const CliffordGate &gate) {
    switch (gate.kind) {
        case GateKind::H:
            apply_h(gate.q0);
            break;
        case GateKind::S:
            apply_s(gate.q0);
            break;
        case GateKind::CNOT:
            apply_cnot(gate.q0, gate.q1);
            break;
    }
}

void StateVector::apply(const CliffordCircuit &circuit) {
    if (circuit.num_qubits() != num_qubits_) {
        throw DimensionError("StateVector::apply: circuit qubit count mismatch");
    }
    for (const auto &g : circuit.gates()) {
        apply(g);
    }
}

StateVector tensor(const StateVector &low, const StateVector &high) {
    size_t n = low.num_qubits() + high.num_qubits();
    if (n >= 40) {
        throw CapacityError("tensor: result too large");
    }
    std::vector<Complex> amps(size_t{1} << n);
    for (size_t h = 0; h < high.size(); h++) {
        for (size_t l = 0; l < low.size(); l++) {
            amps[l | (h << low.num_qubits())] = low[l] * high[h];
        }
    }
    return StateVector::from_amplitudes(std::move(amps), false, 1e-6);
}

StateVector haar_random_state(size_t num_qubits, Rng &rng) {
    std::normal_distribution<double> normal;
    std::vector<Complex> amps(size_t{1} << num_qubits);
    for (auto &a : amps) {
        a = Complex(normal(rng), normal(rng));
    }
    return StateVector::from_amplitudes(std::move(amps), true);
}

Complex inner_product(const StateVector &psi, const StateVector &phi) {
    if (psi.num_qubits() != phi.num_qubits()) {
        throw DimensionError("inner_product: qubit count mismatch");
    }
    Complex s = 0;
    for (size_t i = 0; i < psi.size(); i++) {
        s += std::conj(psi[i]) * phi[i];
    }
    return s;
}

double fidelity(const StateVector &psi, const StateVector &phi) {
    return std::min(1.0, std::norm(inner_product(psi, phi)));
}

double trace_distance(const StateVector &psi, const StateVector &phi) {
    return std::sqrt(std::max(0.0, 1.0 - fidelity(psi, phi)));
}

DopedCircuit::DopedCircuit(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0) {
        throw DimensionError("DopedCircuit: need at least one qubit");
    }
}

void DopedCircuit::append(const CliffordGate &gate) {
    bool bad = gate.q0 >= num_qubits_ ||
               (gate.kind == GateKind::CNOT && (gate.q1 >= num_qubits_ || gate.q0 == gate.q1));
    if (bad) {
        throw DimensionError("DopedCircuit: invalid gate '" + gate.str() + "'");
    }
    gates_.emplace_back(gate);
}

void DopedCircuit::append_u1(uint32_t qubit, const Mat2 &matrix) {
    if (qubit >= num_qubits_) {
        throw DimensionError("DopedCircuit: U1 qubit out of range");
    }
    if (!is_unitary(matrix)) {
        throw std::invalid_argument("DopedCircuit: U1 matrix is not unitary");
    }
    gates_.emplace_back(U1Gate{qubit, matrix});
    t_count_++;
}

DopedCircuit DopedCircuit::from_text(std::string_view text, size_t num_qubits) {
    DopedCircuit circuit(num_qubits);
    std::istringstream in{std::string(text)};
    std::string line;
    size_t line_no = 0;
    auto fail = [&](const std::string &msg) {
        throw std::invalid_argument("line " + std::to_string(line_no) + ": " + msg);
    };
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
        long long q = -1;
        if (name == "T" || name == "U1") {
            if (!(fields >> q) || q < 0) {
                fail("expected qubit index");
            }
            Mat2 m = t_gate_matrix();
            if (name == "U1") {
                double v[8];
                for (double &x : v) {
                    if (!(fields >> x)) {
                        fail("U1 needs 8 real numbers");
                    }
                }
                m = {Complex(v[0], v[1]), Complex(v[2], v[3]), Complex(v[4], v[5]), Complex(v[6], v[7])};
            }
            std::string extra;
            if (fields >> extra) {
                fail("trailing tokens");
            }
            circuit.append_u1(static_cast<uint32_t>(q), m);
        } else {
            // Clifford gate lines go through the Clifford parser.
            CliffordCircuit one = CliffordCircuit::from_text(line, num_qubits);
            for (const auto &g : one.gates()) {
                circuit.append(g);
            }
        }
    }
    return circuit;
}

std::string DopedCircuit::str() const {
    std::ostringstream out;
    out << std::setprecision(17);
    Mat2 t = t_gate_matrix();
    for (const auto &g : gates_) {
        if (const auto *c = std::get_if<CliffordGate>(&g)) {
            out << c->str() << '\n';
            continue;
        }
        const auto &u = std::get<U1Gate>(g);
        if (u.matrix == t) {
            out << "T " << u.qubit << '\n';
            continue;
        }
        out << "U1 " << u.qubit;
        for (const auto &z : u.matrix) {
            out << ' ' << z.real() << ' ' << z.imag();
        }
        out << '\n';
    }
    return out.str();
}

StateVector prepare(const DopedCircuit &circuit, size_t max_qubits) {
    check_capacity(circuit.num_qubits(), max_qubits, "prepare");
    StateVector psi(circuit.num_qubits());
    for (const auto &g : circuit.gates()) {
        if (const auto *c = std::get_if<CliffordGate>(&g)) {
            psi.apply(*c);
        } else {
            const auto &u = std::get<U1Gate>(g);
            psi.apply_u1(u.qubit, u.matrix);
        }
    }
    return psi;
}

std::vector<double> marginal_probabilities(const StateVector &psi, std::span<const size_t> qubits) {
    for (size_t q : qubits) {
        if (q >= psi.num_qubits()) {
            throw DimensionError("marginal_probabilities: qubit out of range");
        }
    }
    if (qubits.size() >= 40) {
        throw CapacityError("marginal_probabilities: too many qubits");
    }
    std::vector<double> probs(size_t{1} << qubits.size(), 0.0);
    for (size_t i = 0; i < psi.size(); i++) {
        probs[gather_bits(i, qubits)] += std::norm(psi[i]);
    }
    return probs;
}

Measurement measure_computational(const StateVector &psi, std::span<const size_t> qubits, Rng &rng) {
    std::vector<double> cdf = marginal_probabilities(psi, qubits);
    for (size_t k = 1; k < cdf.size(); k++) {
        cdf[k] += cdf[k - 1];
    }
    uint64_t outcome = sample_from_cdf(cdf, uniform_unit(rng));
    std::vector<Complex> amps(psi.amplitudes().begin(), psi.amplitudes().end());
    for (size_t i = 0; i < amps.size(); i++) {
        if (gather_bits(i, qubits) != outcome) {
            amps[i] = 0;
        }
    }
    return {outcome, StateVector::from_amplitudes(std::move(amps), true)};
}

StateVector postselect_tail(const StateVector &psi, size_t keep, uint64_t outcome) {
    size_t n = psi.num_qubits();
    if (keep > n) {
        throw DimensionError("postselect_tail: keep exceeds qubit count");
    }
    if ((n - keep) < 64 && (outcome >> (n - keep)) != 0) {
        throw DimensionError("postselect_tail: outcome has too many bits");
    }
    std::vector<Complex> amps(size_t{1} << keep);
    for (size_t low = 0; low < amps.size(); low++) {
        amps[low] = psi[low | (outcome << keep)];
    }
    return StateVector::from_amplitudes(std::move(amps), true);
}

BellSampler::BellSampler(const StateVector &psi, size_t max_qubits) : num_qubits_(psi.num_qubits()) {
    check_capacity(num_qubits_, max_qubits, "BellSampler");
    if (num_qubits_ == 0) {
        throw DimensionError("BellSampler: need at least one qubit");
    }
    size_t n = num_qubits_;
    StateVector pair = tensor(psi, psi);
    for (size_t i = 0; i < n; i++) {
        pair.apply_cnot(i, n + i);
        pair.apply_h(i);
    }
    probabilities_.resize(pair.size());
    cdf_.resize(pair.size());
    double acc = 0;
    for (size_t i = 0; i < pair.size(); i++) {
        probabilities_[i] = std::norm(pair[i]);
        acc += probabilities_[i];
        cdf_[i] = acc;
    }
}

F2Vector BellSampler::sample_round(Rng &rng) const {
    uint64_t index = sample_from_cdf(cdf_, uniform_unit(rng));
    uint64_t mask = (uint64_t{1} << num_qubits_) - 1;
    uint64_t m = index & mask;
    uint64_t m_prime = index >> num_qubits_;
    return F2Vector::from_index(num_qubits_, m_prime | (m << num_qubits_));
}

double BellSampler::round_probability(const F2Vector &x) const {
    if (x.num_qubits() != num_qubits_) {
        throw DimensionError("BellSampler::round_probability: qubit count mismatch");
    }
    uint64_t v = x.to_index();
    uint64_t mask = (uint64_t{1} << num_qubits_) - 1;
    uint64_t a = v & mask;
    uint64_t b = v >> num_qubits_;
    return probabilities_[b | (a << num_qubits_)];
}

StateSource::StateSource(StateVector state, uint64_t budget, size_t two_copy_cap)
    : state_(std::make_shared<const StateVector>(std::move(state))), budget_(budget), two_copy_cap_(two_copy_cap) {
}

std::shared_ptr<const StateVector> StateSource::take(uint64_t copies) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (copies > budget_ - used_) {
        throw BudgetExhausted("StateSource: requested " + std::to_string(copies) + " copies with " +
                              std::to_string(budget_ - used_) + " remaining");
    }
    used_ += copies;
    return state_;
}

uint64_t StateSource::copies_used() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return used_;
}

uint64_t StateSource::remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return budget_ - used_;
}

const BellSampler &StateSource::bell_sampler() {
    std::lock_guard<std::mutex> lock(mutex_);
    if (!bell_) {
        bell_ = std::make_unique<BellSampler>(*state_, two_copy_cap_);
    }
    return *bell_;
}

F2Vector bell_difference_sample(StateSource &src, Rng &rng) {
    const BellSampler &sampler = src.bell_sampler();
    src.take(4);
    F2Vector first = sampler.sample_round(rng);
    F2Vector second = sampler.sample_round(rng);
    return first ^ second;
}

}  // namespace stablearn
