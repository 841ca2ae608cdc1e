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

#include "stablearn/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>
#include <thread>

#include "stablearn/errors.h"
#include "stablearn/pauli.h"

namespace stablearn {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

size_t parse_size(std::string_view text, std::string_view what) {
    size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad value for " + std::string(what) + ": '" + std::string(text) + "'");
    }
    return value;
}

std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TrialInput {
    StateVector psi;
    size_t t;
};

TrialInput make_input(const ExperimentConfig &config, const std::optional<DopedCircuit> &fixed, Rng &rng) {
    if (fixed) {
        return {prepare(*fixed, config.caps.single_copy), fixed->t()};
    }
    if (config.state == StateKind::kHaar) {
        if (config.n > config.caps.single_copy) {
            throw CapacityError("Haar state above the simulation cap");
        }
        return {haar_random_state(config.n, rng), config.n};
    }
    size_t gates = config.gates ? config.gates : default_gate_count(config.n);
    DopedCircuit circuit = random_doped_circuit(config.n, gates, config.t, rng, config.doping);
    return {prepare(circuit, config.caps.single_copy), config.t};
}

void run_test_trial(const ExperimentConfig &config, TrialInput &input, Rng &rng, TrialReport &report) {
    size_t k = config.k ? config.k : config.n;
    StateSource src(input.psi, StateSource::kUnlimited, config.caps.two_copy);
    TesterOutcome outcome = run_property_test(src, k, config.eps, config.delta, rng);
    report.k_hat = outcome.k_hat;
    report.accept = outcome.accept;
    report.copies_used = outcome.copies_used;
    report.expected_copies = 4 * sample_counts(config.n, config.eps, config.delta, BudgetMode::kTester).bell_samples;
    report.checks["meter"] = report.copies_used == report.expected_copies;

    // Haar inputs are scored as far from the class. Circuit inputs are scored against the
    // exact stabilizer dimension when the oracle fits, otherwise against the n - 2t bound.
    bool expect_accept;
    if (config.state == StateKind::kHaar && !config.circuit_file) {
        expect_accept = false;
    } else if (config.n <= config.caps.oracle) {
        expect_accept = unsigned_stabilizer_group(input.psi, config.caps.oracle).dim() >= k;
    } else {
        expect_accept = k + 2 * input.t <= config.n;
    }
    report.checks["expected_accept"] = expect_accept;
    report.success = outcome.accept == expect_accept && report.checks["meter"];
}

void run_learn_trial(const ExperimentConfig &config, TrialInput &input, Rng &rng, TrialReport &report) {
    StateSource src(input.psi, StateSource::kUnlimited, config.caps.two_copy);
    LearnerOptions options;
    options.tomography_constant = config.tomography_constant;
    options.tomography_cap = config.caps.tomography;
    options.oracle_cap = config.caps.oracle;
    LearnedState learned = learn_state(src, config.eps, config.delta, rng, options);
    learned.seed = report.seed;
    StateVector estimate = reconstruct(learned, config.caps.single_copy);
    report.t_hat = learned.t_hat;
    for (const auto &v : learned.stabilizers->basis()) {
        report.stabilizer_basis.push_back(v.hex());
    }
    report.copies_used = learned.copies_used;
    report.expected_copies = learned.budget.total_copies();
    report.fidelity = fidelity(input.psi, estimate);
    report.trace_distance = trace_distance(input.psi, estimate);
    report.checks["meter"] = report.copies_used == report.expected_copies;
    if (config.state == StateKind::kCircuit || config.circuit_file) {
        report.checks["t_hat_bound"] = learned.t_hat <= 2 * input.t;
    }
    report.success = *report.trace_distance <= config.eps && report.checks["meter"];
}

void run_validate_trial(const ExperimentConfig &config, TrialInput &input, Rng &rng, TrialReport &report) {
    size_t n = config.n;
    CharDistribution p = char_distribution(input.psi, config.caps.oracle);
    CharDistribution q = q_distribution(p);
    std::vector<double> p_sq = p.table();
    for (auto &v : p_sq) {
        v *= v;
    }
    CharDistribution p2(n, std::move(p_sq));

    Subspace t = random_subspace(n, uniform_below(rng, 2 * n + 1), rng);
    Subspace t_perp = symplectic_complement(t);
    double size_t_sub = std::ldexp(1.0, static_cast<int>(t.dim()));
    double lhs_p = subspace_mass(p, t);
    double rhs_p = size_t_sub * std::ldexp(subspace_mass(p, t_perp), -static_cast<int>(n));
    double lhs_q = subspace_mass(q, t);
    double rhs_q = size_t_sub * subspace_mass(p2, t_perp);
    report.checks["duality_p"] = std::abs(lhs_p - rhs_p) <= 1e-9;
    report.checks["duality_q"] = std::abs(lhs_q - rhs_q) <= 1e-9;
    report.checks["q_below_p"] = lhs_q <= lhs_p + 1e-12;

    Subspace weyl = unsigned_stabilizer_group(input.psi, config.caps.oracle);
    Subspace weyl_perp = symplectic_complement(weyl);
    bool support_ok = true;
    for (uint64_t x = 0; x < q.table().size() && support_ok; x++) {
        if (q.at(x) > 1e-12) {
            support_ok = contains(weyl_perp, F2Vector::from_index(n, x));
        }
    }
    report.checks["q_support"] = support_ok;

    size_t kept = static_cast<size_t>(uniform_below(rng, n + 1));
    std::vector<size_t> tail(n - kept);
    std::iota(tail.begin(), tail.end(), kept);
    double collision = 0;
    for (double v : marginal_probabilities(input.psi, tail)) {
        collision += v * v;
    }
    double mass = std::ldexp(subspace_mass(p, Subspace::trailing_z_block(n, n - kept)), static_cast<int>(kept));
    report.checks["collision"] = std::abs(collision - mass) <= 1e-9;

    if (config.state == StateKind::kCircuit || config.circuit_file) {
        report.checks["stabilizer_dimension"] = weyl.dim() + 2 * input.t >= n;
    }
    report.success = std::all_of(report.checks.begin(), report.checks.end(), [](const auto &kv) { return kv.second; });
}

TrialReport run_trial(const ExperimentConfig &config, const std::optional<DopedCircuit> &fixed, size_t index) {
    TrialReport report;
    report.trial = index;
    report.seed = mix_seed(config.seed, index);
    auto start = Clock::now();
    try {
        Rng rng(report.seed);
        TrialInput input = make_input(config, fixed, rng);
        report.t = input.t;
        switch (config.mode) {
            case Mode::kTest:
                run_test_trial(config, input, rng, report);
                break;
            case Mode::kLearn:
                run_learn_trial(config, input, rng, report);
                break;
            case Mode::kValidate:
                run_validate_trial(config, input, rng, report);
                break;
            case Mode::kCalibrate:
                throw std::logic_error("calibrate mode has no per-trial runner");
        }
    } catch (const std::exception &e) {
        report.success = false;
        report.error = e.what();
    }
    report.wall_ms = elapsed_ms(start);
    return report;
}

AggregateReport aggregate(const ExperimentConfig &config, const std::vector<TrialReport> &trials) {
    AggregateReport agg;
    agg.trials = trials.size();
    double td_sum = 0;
    size_t td_count = 0;
    double copies = 0;
    for (const auto &r : trials) {
        agg.successes += r.success;
        agg.errors += !r.error.empty();
        copies += static_cast<double>(r.copies_used);
        if (r.trace_distance) {
            td_sum += *r.trace_distance;
            td_count++;
        }
    }
    if (agg.trials) {
        agg.success_rate = static_cast<double>(agg.successes) / static_cast<double>(agg.trials);
        agg.mean_copies = copies / static_cast<double>(agg.trials);
    }
    if (td_count) {
        agg.mean_trace_distance = td_sum / static_cast<double>(td_count);
    }
    agg.threshold = config.threshold.value_or(config.mode == Mode::kValidate ? 1.0 : 1.0 - config.delta);
    agg.passed = agg.trials > 0 && agg.success_rate >= agg.threshold;
    return agg;
}

std::vector<double> default_calibration_grid() {
    return {0.005, 0.01, 0.015, 0.02, 0.025, 0.03, 0.035, 0.04, 0.05, 0.06, 0.08, 0.1, 0.15, 0.2, 0.3, 0.5, 1.0};
}

const char *format_state(StateKind kind) {
    return kind == StateKind::kHaar ? "haar" : "circuit";
}

nlohmann::json config_json(const ExperimentConfig &c) {
    nlohmann::json j = {
        {"mode", mode_name(c.mode)},
        {"n", c.n},
        {"t", c.t},
        {"eps", c.eps},
        {"delta", c.delta},
        {"trials", c.trials},
        {"seed", c.seed},
        {"gates", c.gates ? c.gates : default_gate_count(c.n)},
        {"state", format_state(c.state)},
        {"doping", c.doping == DopingKind::kT ? "T" : "U1"},
        {"k", c.k ? c.k : c.n},
        {"tomography_constant", c.tomography_constant},
        {"caps", {{"sim", c.caps.single_copy}, {"pair", c.caps.two_copy}, {"oracle", c.caps.oracle},
                  {"tomo", c.caps.tomography}}},
    };
    if (c.circuit_file) {
        j["circuit"] = c.circuit_file->string();
    }
    return j;
}

template <typename T>
nlohmann::json optional_json(const std::optional<T> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <typename T>
std::string optional_csv(const std::optional<T> &v) {
    if (!v) {
        return "";
    }
    std::ostringstream ss;
    ss.precision(17);
    ss << *v;
    return ss.str();
}

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char ch : s) {
        out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    }
    return out + "\"";
}

}  // namespace

size_t default_gate_count(size_t num_qubits) {
    return 4 * num_qubits * num_qubits + 16;
}

DopedCircuit random_doped_circuit(size_t num_qubits, size_t clifford_gates, size_t t, Rng &rng, DopingKind kind) {
    if (num_qubits == 0) {
        throw std::invalid_argument("random_doped_circuit: need at least one qubit");
    }
    if (t > clifford_gates + 1) {
        throw std::invalid_argument("random_doped_circuit: t exceeds the number of insertion positions");
    }
    size_t total = clifford_gates + t;
    // Choose t distinct slots of the combined sequence (partial Fisher-Yates).
    std::vector<size_t> slots(total);
    std::iota(slots.begin(), slots.end(), 0);
    for (size_t i = 0; i < t; i++) {
        std::swap(slots[i], slots[i + uniform_below(rng, total - i)]);
    }
    std::vector<bool> doped(total, false);
    for (size_t i = 0; i < t; i++) {
        doped[slots[i]] = true;
    }
    DopedCircuit circuit(num_qubits);
    for (size_t i = 0; i < total; i++) {
        if (doped[i]) {
            auto q = static_cast<uint32_t>(uniform_below(rng, num_qubits));
            circuit.append_u1(q, kind == DopingKind::kT ? t_gate_matrix() : haar_random_unitary(rng));
        } else {
            circuit.append(random_clifford_gate(num_qubits, rng));
        }
    }
    return circuit;
}

SimulationCaps SimulationCaps::parse(std::string_view spec) {
    SimulationCaps caps;
    while (!spec.empty()) {
        size_t comma = spec.find(',');
        std::string_view item = spec.substr(0, comma);
        spec = comma == std::string_view::npos ? std::string_view() : spec.substr(comma + 1);
        if (item.empty()) {
            continue;
        }
        size_t eq = item.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("STABLEARN_CAPS entries must look like key=value");
        }
        std::string_view key = item.substr(0, eq);
        size_t value = parse_size(item.substr(eq + 1), key);
        if (key == "sim") {
            caps.single_copy = value;
        } else if (key == "pair") {
            caps.two_copy = value;
        } else if (key == "oracle") {
            caps.oracle = value;
        } else if (key == "tomo") {
            caps.tomography = value;
        } else {
            throw std::invalid_argument("unknown STABLEARN_CAPS key '" + std::string(key) + "'");
        }
    }
    if (caps.single_copy > 30 || caps.two_copy > 15 || caps.oracle > 12 || caps.tomography > 10) {
        throw std::invalid_argument("STABLEARN_CAPS value exceeds what dense simulation can address");
    }
    return caps;
}

SimulationCaps SimulationCaps::from_env() {
    const char *env = std::getenv("STABLEARN_CAPS");
    return env ? parse(env) : SimulationCaps{};
}

Mode parse_mode(std::string_view text) {
    if (text == "test") {
        return Mode::kTest;
    }
    if (text == "learn") {
        return Mode::kLearn;
    }
    if (text == "validate") {
        return Mode::kValidate;
    }
    if (text == "calibrate") {
        return Mode::kCalibrate;
    }
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::kTest:
            return "test";
        case Mode::kLearn:
            return "learn";
        case Mode::kValidate:
            return "validate";
        default:
            return "calibrate";
    }
}

void validate_config(const ExperimentConfig &c) {
    if (c.trials < 1) {
        throw std::invalid_argument("trials must be at least 1");
    }
    if (c.threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
    if (!(c.delta > 0 && c.delta <= 1)) {
        throw std::invalid_argument("delta must lie in (0, 1]");
    }
    if (c.mode == Mode::kTest ? !(c.eps > 0 && c.eps < 0.375) : !(c.eps > 0 && c.eps <= 1)) {
        throw std::invalid_argument(c.mode == Mode::kTest ? "eps must lie in (0, 3/8) for test mode"
                                                           : "eps must lie in (0, 1]");
    }
    if (c.mode == Mode::kCalibrate) {
        return;
    }
    if (c.n < 1) {
        throw std::invalid_argument("n must be at least 1");
    }
    if (!c.circuit_file && c.state == StateKind::kCircuit && c.t > c.n) {
        throw std::invalid_argument("t must not exceed n");
    }
    if (c.mode == Mode::kTest && c.k > c.n) {
        throw std::invalid_argument("k must lie in [1, n]");
    }
    if (c.mode == Mode::kValidate && c.n > c.caps.oracle) {
        throw std::invalid_argument("validate mode needs n <= the oracle cap (" + std::to_string(c.caps.oracle) + ")");
    }
    if (c.n > c.caps.single_copy) {
        throw std::invalid_argument("n exceeds the simulation cap (" + std::to_string(c.caps.single_copy) + ")");
    }
}

ExperimentReport run_experiment(const ExperimentConfig &config) {
    validate_config(config);
    ExperimentReport report;
    report.config = config;
    auto start = Clock::now();

    if (config.mode == Mode::kCalibrate) {
        std::vector<double> grid = config.calibration_grid.empty() ? default_calibration_grid() : config.calibration_grid;
        report.calibration = calibrate_tomography_constant(grid, config.calibration_ts, config.trials, config.eps,
                                                           config.delta, config.seed);
        report.aggregate.trials = config.trials;
        report.aggregate.threshold = 1 - config.delta;
        report.aggregate.passed = report.calibration->found;
        report.wall_ms = elapsed_ms(start);
        return report;
    }

    std::optional<DopedCircuit> fixed;
    if (config.circuit_file) {
        fixed = DopedCircuit::from_text(read_file(*config.circuit_file), config.n);
    }

    report.trials.resize(config.trials);
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < config.trials; i = next++) {
            report.trials[i] = run_trial(config, fixed, i);
        }
    };
    size_t workers = std::min(config.threads, config.trials);
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (size_t w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
    }
    report.aggregate = aggregate(config, report.trials);
    report.wall_ms = elapsed_ms(start);
    return report;
}

std::string report_to_json(const ExperimentReport &report, bool include_timing) {
    nlohmann::json trials = nlohmann::json::array();
    for (const auto &r : report.trials) {
        nlohmann::json j = {
            {"trial", r.trial},
            {"seed", r.seed},
            {"success", r.success},
            {"t", r.t},
            {"t_hat", optional_json(r.t_hat)},
            {"k_hat", optional_json(r.k_hat)},
            {"accept", optional_json(r.accept)},
            {"trace_distance", optional_json(r.trace_distance)},
            {"fidelity", optional_json(r.fidelity)},
            {"copies_used", r.copies_used},
            {"expected_copies", r.expected_copies},
            {"checks", r.checks},
        };
        if (report.config.mode == Mode::kLearn) {
            j["stabilizer_basis"] = r.stabilizer_basis;
        }
        if (!r.error.empty()) {
            j["error"] = r.error;
        }
        if (include_timing) {
            j["wall_ms"] = r.wall_ms;
        }
        trials.push_back(std::move(j));
    }
    const AggregateReport &a = report.aggregate;
    nlohmann::json doc = {
        {"config", config_json(report.config)},
        {"trials", std::move(trials)},
        {"aggregate",
         {{"trials", a.trials},
          {"successes", a.successes},
          {"errors", a.errors},
          {"success_rate", a.success_rate},
          {"mean_trace_distance", optional_json(a.mean_trace_distance)},
          {"mean_copies", a.mean_copies},
          {"threshold", a.threshold},
          {"passed", a.passed}}},
    };
    if (report.calibration) {
        const CalibrationResult &c = *report.calibration;
        nlohmann::json sweep = nlohmann::json::array();
        for (const auto &p : c.sweep) {
            sweep.push_back({{"constant", p.constant}, {"t", p.t}, {"trials", p.trials}, {"successes", p.successes}});
        }
        doc["calibration"] = {{"found", c.found},
                              {"tomography_constant", c.constant},
                              {"eps", c.eps},
                              {"delta", c.delta},
                              {"trials", c.trials},
                              {"sweep", std::move(sweep)}};
    }
    if (include_timing) {
        doc["wall_ms"] = report.wall_ms;
    }
    return doc.dump(2) + "\n";
}

std::string report_to_csv(const ExperimentReport &report, bool include_timing) {
    std::ostringstream out;
    out.precision(17);
    if (report.calibration) {
        out << "constant,t,trials,successes\n";
        for (const auto &p : report.calibration->sweep) {
            out << p.constant << "," << p.t << "," << p.trials << "," << p.successes << "\n";
        }
        return out.str();
    }
    out << "trial,seed,success,error,t,t_hat,k_hat,accept,trace_distance,fidelity,copies_used,expected_copies";
    out << (include_timing ? ",wall_ms\n" : "\n");
    for (const auto &r : report.trials) {
        out << r.trial << "," << r.seed << "," << (r.success ? 1 : 0) << "," << csv_escape(r.error) << "," << r.t << ","
            << optional_csv(r.t_hat) << "," << optional_csv(r.k_hat) << ","
            << (r.accept ? std::string(*r.accept ? "1" : "0") : std::string()) << "," << optional_csv(r.trace_distance)
            << "," << optional_csv(r.fidelity) << "," << r.copies_used << "," << r.expected_copies;
        if (include_timing) {
            out << "," << r.wall_ms;
        }
        out << "\n";
    }
    return out.str();
}

void write_report(const ExperimentReport &report, const std::filesystem::path &path, ReportFormat format,
                  bool include_timing) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open report file " + path.string());
    }
    out << (format == ReportFormat::kJson ? report_to_json(report, include_timing)
                                          : report_to_csv(report, include_timing));
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

int exit_code(const ExperimentReport &report) {
    return report.aggregate.passed ? 0 : 1;
}

}  // namespace stablearn
