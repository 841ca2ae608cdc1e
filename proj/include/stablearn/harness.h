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

#ifndef STABLEARN_HARNESS_H
#define STABLEARN_HARNESS_H

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stablearn/learner.h"
#include "stablearn/simstate.h"

namespace stablearn {

enum class DopingKind { kT, kHaarU1 };

/// Uniformly random H/S/CNOT sequence of `clifford_gates` gates with exactly `t` doping
/// gates (T or Haar-random U1) at uniformly random positions on uniformly random qubits.
DopedCircuit random_doped_circuit(size_t num_qubits, size_t clifford_gates, size_t t, Rng &rng,
                                  DopingKind kind = DopingKind::kT);

/// Default Clifford gate count for random circuits.
size_t default_gate_count(size_t num_qubits);

/// Simulation limits, overridable through the STABLEARN_CAPS environment variable as a
/// comma-separated list such as "sim=14,pair=12,oracle=7,tomo=6".
struct SimulationCaps {
    size_t single_copy = kSingleCopyCap;
    size_t two_copy = kTwoCopyCap;
    size_t oracle = kOracleCap;
    size_t tomography = kTomographyCap;

    static SimulationCaps parse(std::string_view spec);
    static SimulationCaps from_env();
};

enum class Mode { kTest, kLearn, kValidate, kCalibrate };
enum class ReportFormat { kJson, kCsv };
/// Input state family: t-doped random circuit output, or Haar-random.
enum class StateKind { kCircuit, kHaar };

Mode parse_mode(std::string_view text);
std::string mode_name(Mode mode);

struct ExperimentConfig {
    Mode mode = Mode::kLearn;
    size_t n = 4;
    size_t t = 0;
    double eps = 0.2;
    double delta = 0.1;
    size_t trials = 1;
    uint64_t seed = 0;
    /// Circuit file used for every trial instead of a random circuit.
    std::optional<std::filesystem::path> circuit_file;
    /// Clifford gate count for random circuits; 0 selects default_gate_count(n).
    size_t gates = 0;
    DopingKind doping = DopingKind::kT;
    StateKind state = StateKind::kCircuit;
    /// Tester threshold k; 0 means k = n.
    size_t k = 0;
    /// Required aggregate success rate; unset means 1 - delta (1 for validate).
    std::optional<double> threshold;
    double tomography_constant = kDefaultTomographyConstant;
    size_t threads = 1;
    SimulationCaps caps;
    /// Calibration grid and register sizes (calibrate mode).
    std::vector<double> calibration_grid;
    std::vector<size_t> calibration_ts{1, 2, 3};
};

/// Throws std::invalid_argument when the config is unusable for its mode.
void validate_config(const ExperimentConfig &config);

struct TrialReport {
    size_t trial = 0;
    uint64_t seed = 0;
    bool success = false;
    std::string error;
    size_t t = 0;  // doping count of the input circuit
    std::optional<size_t> t_hat;
    std::optional<size_t> k_hat;
    std::optional<bool> accept;
    std::optional<double> trace_distance;
    std::optional<double> fidelity;
    uint64_t copies_used = 0;
    uint64_t expected_copies = 0;
    /// Named boolean checks (validate mode identities, learner bounds).
    std::map<std::string, bool> checks;
    /// Learn mode: basis of the learned isotropic subspace H, one hex string per vector.
    std::vector<std::string> stabilizer_basis;
    double wall_ms = 0;
};

struct AggregateReport {
    size_t trials = 0;
    size_t successes = 0;
    size_t errors = 0;
    double success_rate = 0;
    std::optional<double> mean_trace_distance;
    double mean_copies = 0;
    double threshold = 0;
    bool passed = false;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<TrialReport> trials;
    AggregateReport aggregate;
    std::optional<CalibrationResult> calibration;
    double wall_ms = 0;
};

/// Runs `config.trials` independent trials with seeds mix_seed(seed, i). Results are
/// sorted by trial index regardless of thread count.
ExperimentReport run_experiment(const ExperimentConfig &config);

/// Canonical JSON report. With include_timing = false the wall-clock fields are omitted.
std::string report_to_json(const ExperimentReport &report, bool include_timing = true);

/// CSV projection, one row per trial (per sweep point in calibrate mode):
/// trial,seed,success,error,t,t_hat,k_hat,accept,trace_distance,fidelity,copies_used,expected_copies,wall_ms
std::string report_to_csv(const ExperimentReport &report, bool include_timing = true);

void write_report(const ExperimentReport &report, const std::filesystem::path &path, ReportFormat format,
                  bool include_timing = true);

/// 0 iff the aggregate met its threshold.
int exit_code(const ExperimentReport &report);

}  // namespace stablearn

#endif
