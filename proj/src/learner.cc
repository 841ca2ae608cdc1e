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

#include "stablearn/learner.h"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "stablearn/errors.h"

namespace stablearn {

namespace {

/// Ceiling that ignores floating-point noise just above an integer.
uint64_t ceil_count(double x) {
    return static_cast<uint64_t>(std::ceil(x - 1e-9 * std::max(1.0, x)));
}

void require_unit_interval(double v, const char *name, const char *who) {
    if (!(v > 0 && v <= 1)) {
        throw std::invalid_argument(std::string(who) + ": " + name + " must lie in (0, 1]");
    }
}

uint64_t majority_extra(double delta) {
    return ceil_count(24 * std::log(3 / delta));
}

std::string bits_to_string(uint64_t value, size_t width) {
    std::string s(width, '0');
    for (size_t k = 0; k < width; k++) {
        if ((value >> k) & 1) {
            s[k] = '1';
        }
    }
    return s;
}

uint64_t string_to_bits(std::string_view s) {
    uint64_t v = 0;
    for (size_t k = 0; k < s.size(); k++) {
        if (s[k] == '1') {
            v |= uint64_t{1} << k;
        } else if (s[k] != '0') {
            throw std::invalid_argument("bit string may contain only '0' and '1'");
        }
    }
    return v;
}

/// Probability of even parity on `support` after rotating W_x to a Z string.
double even_parity_probability(const StateVector &phi, uint64_t a, uint64_t b) {
    StateVector rotated = phi;
    for (size_t q = 0; q < phi.num_qubits(); q++) {
        bool xa = (a >> q) & 1;
        bool zb = (b >> q) & 1;
        if (xa && zb) {
            rotated.apply_s_dag(q);
            rotated.apply_h(q);
        } else if (xa) {
            rotated.apply_h(q);
        }
    }
    uint64_t support = a | b;
    double even = 0;
    for (uint64_t i = 0; i < rotated.size(); i++) {
        if ((std::popcount(i & support) & 1) == 0) {
            even += std::norm(rotated[i]);
        }
    }
    return std::clamp(even, 0.0, 1.0);
}

Complex i_power(unsigned k) {
    static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return table[k & 3];
}

void add_weyl(Eigen::MatrixXcd &rho, uint64_t a, uint64_t b, double coefficient) {
    Complex phase = i_power(static_cast<unsigned>(std::popcount(a & b))) * coefficient;
    for (uint64_t z = 0; z < static_cast<uint64_t>(rho.rows()); z++) {
        rho(static_cast<Eigen::Index>(z ^ a), static_cast<Eigen::Index>(z)) +=
            (std::popcount(b & z) & 1) ? -phase : phase;
    }
}

}  // namespace

Budget sample_counts(size_t num_qubits, double eps, double delta, BudgetMode mode) {
    Budget budget;
    budget.eps = eps;
    budget.delta = delta;
    auto n = static_cast<double>(num_qubits);
    if (mode == BudgetMode::kTester) {
        if (!(eps > 0 && eps < 0.375)) {
            throw std::invalid_argument("sample_counts: tester eps must lie in (0, 3/8)");
        }
        require_unit_interval(delta, "delta", "sample_counts");
        budget.bell_samples = ceil_count((2 * std::log(1 / delta) + 8 * n) / eps);
    } else {
        require_unit_interval(eps, "eps", "sample_counts");
        require_unit_interval(delta, "delta", "sample_counts");
        budget.bell_samples = ceil_count((8 * std::log(3 / delta) + 32 * n) / (eps * eps));
    }
    return budget;
}

uint64_t pure_tomography_copies(size_t t, double eps, double delta, double constant) {
    require_unit_interval(eps, "eps", "pure_tomography_copies");
    require_unit_interval(delta, "delta", "pure_tomography_copies");
    if (!(constant > 0)) {
        throw std::invalid_argument("pure_tomography_copies: constant must be positive");
    }
    if (t == 0) {
        return 0;
    }
    if (t > 16) {
        throw CapacityError("pure_tomography_copies: t too large");
    }
    double td = static_cast<double>(t);
    return ceil_count(constant * std::pow(16.0, td) * (td * std::log(4.0) + std::log(1 / delta)) / (eps * eps));
}

Budget learner_budget(size_t num_qubits, size_t t_hat, double eps, double delta, double constant) {
    if (t_hat > num_qubits) {
        throw DimensionError("learner_budget: t_hat exceeds n");
    }
    Budget budget = sample_counts(num_qubits, eps, delta, BudgetMode::kLearner);
    budget.tomography_copies = pure_tomography_copies(t_hat, eps / 2, delta / 3, constant);
    budget.majority_copies = 2 * budget.tomography_copies + majority_extra(delta);
    return budget;
}

TesterOutcome run_property_test(StateSource &src, size_t k, double eps, double delta, Rng &rng) {
    size_t n = src.num_qubits();
    if (k < 1 || k > n) {
        throw std::invalid_argument("property_test: k must lie in [1, n]");
    }
    Budget budget = sample_counts(n, eps, delta, BudgetMode::kTester);
    uint64_t before = src.copies_used();
    Subspace span(n);
    for (uint64_t i = 0; i < budget.bell_samples; i++) {
        span.insert(bell_difference_sample(src, rng));
    }
    TesterOutcome out;
    out.k_hat = 2 * n - span.dim();
    out.accept = out.k_hat >= k;
    out.samples = budget.bell_samples;
    out.copies_used = src.copies_used() - before;
    return out;
}

bool property_test(StateSource &src, size_t k, double eps, double delta, Rng &rng) {
    return run_property_test(src, k, eps, delta, rng).accept;
}

std::string majority_basis_state(std::span<const std::string> outcomes) {
    if (outcomes.empty()) {
        throw std::invalid_argument("majority_basis_state: no outcomes");
    }
    std::map<std::string, size_t> counts;
    for (const auto &s : outcomes) {
        counts[s]++;
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    return best->first;
}

StateVector pure_state_tomography(StateSource &src, double eps, double delta, Rng &rng, double constant,
                                  size_t max_qubits) {
    size_t t = src.num_qubits();
    if (t > max_qubits) {
        throw CapacityError("pure_state_tomography: t = " + std::to_string(t) + " exceeds the tomography cap of " +
                            std::to_string(max_qubits));
    }
    uint64_t copies = pure_tomography_copies(t, eps, delta, constant);
    if (t == 0) {
        return StateVector(0);
    }
    auto phi = src.take(copies);

    uint64_t dim = uint64_t{1} << t;
    uint64_t observables = dim * dim - 1;
    uint64_t share = copies / observables;
    uint64_t extra = copies % observables;

    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (uint64_t x = 1; x <= observables; x++) {
        uint64_t shots = share + (x - 1 < extra ? 1 : 0);
        if (shots == 0) {
            continue;
        }
        uint64_t a = x & (dim - 1);
        uint64_t b = x >> t;
        double p_even = even_parity_probability(*phi, a, b);
        uint64_t even = 0;
        for (uint64_t s = 0; s < shots; s++) {
            even += uniform_unit(rng) < p_even;
        }
        double estimate = (2.0 * static_cast<double>(even) - static_cast<double>(shots)) / static_cast<double>(shots);
        add_weyl(rho, a, b, estimate);
    }
    rho /= static_cast<double>(dim);
    rho = (rho + rho.adjoint().eval()) / 2.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
    Eigen::VectorXcd top = solver.eigenvectors().col(static_cast<Eigen::Index>(dim - 1));

    // Fix the global phase: largest amplitude real and positive.
    Eigen::Index arg = 0;
    top.cwiseAbs().maxCoeff(&arg);
    Complex phase = std::abs(top(arg)) > 0 ? std::conj(top(arg)) / std::abs(top(arg)) : Complex(1);
    std::vector<Complex> amps(dim);
    for (uint64_t i = 0; i < dim; i++) {
        amps[i] = top(static_cast<Eigen::Index>(i)) * phase;
    }
    return StateVector::from_amplitudes(std::move(amps), true);
}

LearnedState learn_state(StateSource &src, double eps, double delta, Rng &rng, const LearnerOptions &options) {
    size_t n = src.num_qubits();
    if (n == 0) {
        throw DimensionError("learn_state: need at least one qubit");
    }
    Budget budget = sample_counts(n, eps, delta, BudgetMode::kLearner);
    uint64_t before = src.copies_used();

    Subspace span(n);
    for (uint64_t i = 0; i < budget.bell_samples; i++) {
        span.insert(bell_difference_sample(src, rng));
    }
    Subspace h = symplectic_complement(span);
    if (!is_isotropic(h)) {
        throw PromiseViolation("learn_state: the learned subspace H is not isotropic (dim H = " +
                               std::to_string(h.dim()) + ")");
    }
    size_t t_hat = n - h.dim();
    if (t_hat > options.tomography_cap) {
        throw CapacityError("learn_state: t_hat = " + std::to_string(t_hat) + " exceeds the tomography cap of " +
                            std::to_string(options.tomography_cap));
    }
    CliffordCircuit circuit = isotropic_mapping_circuit(h);

    budget = learner_budget(n, t_hat, eps, delta, options.tomography_constant);
    uint64_t needed = budget.tomography_copies;

    auto psi = src.take(budget.majority_copies);
    StateVector mapped = *psi;
    mapped.apply(circuit);

    LearnedState out;
    if (options.instrument) {
        if (n > options.oracle_cap) {
            throw CapacityError("learn_state: instrumented mode needs n <= the oracle cap");
        }
        std::vector<size_t> tail(n - t_hat);
        std::iota(tail.begin(), tail.end(), t_hat);
        std::vector<double> marginal = marginal_probabilities(mapped, tail);
        double collision = 0;
        for (double p : marginal) {
            collision += p * p;
        }
        double mass = subspace_mass(char_distribution(mapped, options.oracle_cap), Subspace::trailing_z_block(n, n - t_hat));
        double residual = std::abs(collision - std::ldexp(mass, static_cast<int>(t_hat)));
        if (residual > 1e-9) {
            throw std::logic_error("learn_state: collision identity residual " + std::to_string(residual));
        }
        out.collision_residual = residual;
    }

    std::vector<size_t> tail(n - t_hat);
    std::iota(tail.begin(), tail.end(), t_hat);
    std::vector<double> cdf = marginal_probabilities(mapped, tail);
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    std::vector<uint64_t> counts(cdf.size(), 0);
    for (uint64_t i = 0; i < budget.majority_copies; i++) {
        counts[sample_from_cdf(cdf, uniform_unit(rng))]++;
    }
    // Majority with ties going to the lexicographically smallest string.
    uint64_t best = 0;
    std::string best_str = bits_to_string(0, n - t_hat);
    for (uint64_t v = 1; v < counts.size(); v++) {
        if (counts[v] < counts[best]) {
            continue;
        }
        std::string s = bits_to_string(v, n - t_hat);
        if (counts[v] > counts[best] || s < best_str) {
            best = v;
            best_str = std::move(s);
        }
    }
    uint64_t reserved = counts[best];
    if (reserved < needed) {
        throw PromiseViolation("learn_state: only " + std::to_string(reserved) + " copies read the majority string, " +
                               std::to_string(needed) + " needed");
    }

    StateSource phi_src(postselect_tail(mapped, t_hat, best), reserved);
    out.phi_hat = pure_state_tomography(phi_src, eps / 2, delta / 3, rng, options.tomography_constant,
                                        options.tomography_cap);
    out.num_qubits = n;
    out.t_hat = t_hat;
    out.circuit = std::move(circuit);
    out.x_hat = std::move(best_str);
    out.copies_used = src.copies_used() - before;
    out.budget = budget;
    out.reserved_copies = reserved;
    out.stabilizers = std::move(h);
    return out;
}

StateVector reconstruct(const LearnedState &learned, size_t max_qubits) {
    size_t n = learned.num_qubits;
    if (n > max_qubits) {
        throw CapacityError("reconstruct: n exceeds the simulation cap");
    }
    if (learned.t_hat > n || learned.x_hat.size() != n - learned.t_hat ||
        learned.phi_hat.num_qubits() != learned.t_hat || learned.circuit.num_qubits() != n) {
        throw DimensionError("reconstruct: inconsistent LearnedState");
    }
    StateVector state = tensor(learned.phi_hat, StateVector::basis_state(n - learned.t_hat, string_to_bits(learned.x_hat)));
    state.apply(inverse(learned.circuit));
    return state;
}

std::string to_json(const LearnedState &learned) {
    nlohmann::json phi = nlohmann::json::array();
    for (const auto &amp : learned.phi_hat.amplitudes()) {
        phi.push_back({amp.real(), amp.imag()});
    }
    nlohmann::json doc = {
        {"n", learned.num_qubits},
        {"t_hat", learned.t_hat},
        {"x_hat", learned.x_hat},
        {"circuit", learned.circuit.str()},
        {"phi_hat", std::move(phi)},
        {"copies_used", learned.copies_used},
        {"seed", learned.seed},
        {"bell_samples", learned.budget.bell_samples},
        {"majority_copies", learned.budget.majority_copies},
        {"tomography_copies", learned.budget.tomography_copies},
        {"reserved_copies", learned.reserved_copies},
    };
    return doc.dump(2);
}

LearnedState learned_state_from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw std::invalid_argument(std::string("learned_state_from_json: ") + e.what());
    }
    try {
        LearnedState out;
        out.num_qubits = doc.at("n").get<size_t>();
        out.t_hat = doc.at("t_hat").get<size_t>();
        out.x_hat = doc.at("x_hat").get<std::string>();
        out.circuit = CliffordCircuit::from_text(doc.at("circuit").get<std::string>(), out.num_qubits);
        std::vector<Complex> amps;
        for (const auto &pair : doc.at("phi_hat")) {
            amps.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        out.phi_hat = StateVector::from_amplitudes(std::move(amps), false, 1e-6);
        out.copies_used = doc.at("copies_used").get<uint64_t>();
        out.seed = doc.at("seed").get<uint64_t>();
        out.budget.bell_samples = doc.value("bell_samples", uint64_t{0});
        out.budget.majority_copies = doc.value("majority_copies", uint64_t{0});
        out.budget.tomography_copies = doc.value("tomography_copies", uint64_t{0});
        out.reserved_copies = doc.value("reserved_copies", uint64_t{0});
        if (out.t_hat > out.num_qubits || out.x_hat.size() != out.num_qubits - out.t_hat ||
            out.phi_hat.num_qubits() != out.t_hat) {
            throw DimensionError("learned_state_from_json: inconsistent dimensions");
        }
        string_to_bits(out.x_hat);
        return out;
    } catch (const nlohmann::json::exception &e) {
        throw std::invalid_argument(std::string("learned_state_from_json: ") + e.what());
    }
}

CalibrationResult calibrate_tomography_constant(std::span<const double> grid, std::span<const size_t> ts,
                                                size_t trials, double eps, double delta, uint64_t seed) {
    if (grid.empty() || ts.empty() || trials == 0) {
        throw std::invalid_argument("calibrate_tomography_constant: empty grid, t list or trial count");
    }
    std::vector<double> sorted(grid.begin(), grid.end());
    std::sort(sorted.begin(), sorted.end());

    CalibrationResult result;
    result.eps = eps;
    result.delta = delta;
    result.trials = trials;
    auto required = static_cast<size_t>(std::ceil((1 - delta) * static_cast<double>(trials) - 1e-9));
    for (double c : sorted) {
        bool all_pass = true;
        for (size_t ti = 0; ti < ts.size(); ti++) {
            size_t t = ts[ti];
            CalibrationPoint point{c, t, trials, 0};
            for (size_t trial = 0; trial < trials; trial++) {
                Rng rng(mix_seed(mix_seed(seed, t), trial));
                StateVector phi = haar_random_state(t, rng);
                StateSource src(phi);
                StateVector est = pure_state_tomography(src, eps, delta, rng, c, std::max(t, kTomographyCap));
                point.successes += trace_distance(phi, est) <= eps;
            }
            all_pass = all_pass && point.successes >= required;
            result.sweep.push_back(point);
        }
        if (all_pass) {
            result.found = true;
            result.constant = c;
            break;
        }
    }
    return result;
}

void save_calibration(const std::filesystem::path &path, const CalibrationResult &result) {
    nlohmann::json sweep = nlohmann::json::array();
    for (const auto &p : result.sweep) {
        sweep.push_back({{"constant", p.constant}, {"t", p.t}, {"trials", p.trials}, {"successes", p.successes}});
    }
    nlohmann::json doc = {
        {"found", result.found}, {"tomography_constant", result.constant},
        {"eps", result.eps},     {"delta", result.delta},
        {"trials", result.trials}, {"sweep", std::move(sweep)},
    };
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("save_calibration: cannot open " + path.string());
    }
    out << doc.dump(2) << "\n";
}

double load_tomography_constant(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_tomography_constant: cannot open " + path.string());
    }
    nlohmann::json doc = nlohmann::json::parse(in);
    double c = doc.at("tomography_constant").get<double>();
    if (!(c > 0)) {
        throw std::invalid_argument("load_tomography_constant: constant must be positive");
    }
    return c;
}

}  // namespace stablearn
