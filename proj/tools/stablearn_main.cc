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

#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "stablearn/harness.h"

int main(int argc, char **argv) {
    using namespace stablearn;

    CLI::App app{"Stabilizer-dimension testing and tomography of t-doped states"};
    ExperimentConfig config;
    std::string mode;
    std::string circuit;
    std::string out;
    std::string format = "json";
    std::string state = "circuit";
    std::string doping = "T";
    std::string tomography_config;
    std::string write_config;
    double threshold = -1;
    bool no_timing = false;

    app.add_option("mode", mode, "test | learn | validate | calibrate")
        ->required()
        ->check(CLI::IsMember({"test", "learn", "validate", "calibrate"}));
    app.add_option("--n", config.n, "number of qubits")->check(CLI::PositiveNumber);
    app.add_option("--t", config.t, "doping gates per random circuit");
    app.add_option("--eps", config.eps, "accuracy parameter");
    app.add_option("--delta", config.delta, "failure probability");
    app.add_option("--trials", config.trials, "independent trials")->check(CLI::PositiveNumber);
    app.add_option("--seed", config.seed, "master seed");
    app.add_option("--circuit", circuit, "circuit file used for every trial")->check(CLI::ExistingFile);
    app.add_option("--gates", config.gates, "Clifford gates per random circuit (default 4n^2 + 16)");
    app.add_option("--out", out, "report path (stdout when omitted)");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--k", config.k, "tester threshold (default n)");
    app.add_option("--state", state, "input family")->check(CLI::IsMember({"circuit", "haar"}));
    app.add_option("--doping", doping, "doping gate")->check(CLI::IsMember({"T", "U1"}));
    app.add_option("--threads", config.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--threshold", threshold, "required success rate (default 1 - delta; 1 for validate)");
    app.add_option("--tomography-config", tomography_config, "JSON file with the calibrated tomography constant")
        ->check(CLI::ExistingFile);
    app.add_option("--write-config", write_config, "calibrate: write the chosen constant to this JSON file");
    app.add_flag("--no-timing", no_timing, "omit wall-clock fields from the report");
    app.footer("Simulation caps: STABLEARN_CAPS=sim=14,pair=12,oracle=7,tomo=6");

    CLI11_PARSE(app, argc, argv);

    try {
        config.mode = parse_mode(mode);
        config.caps = SimulationCaps::from_env();
        config.state = state == "haar" ? StateKind::kHaar : StateKind::kCircuit;
        config.doping = doping == "U1" ? DopingKind::kHaarU1 : DopingKind::kT;
        if (!circuit.empty()) {
            config.circuit_file = circuit;
        }
        if (threshold >= 0) {
            config.threshold = threshold;
        }
        if (!tomography_config.empty()) {
            config.tomography_constant = load_tomography_constant(tomography_config);
        }

        ExperimentReport report = run_experiment(config);
        ReportFormat fmt = format == "csv" ? ReportFormat::kCsv : ReportFormat::kJson;
        if (out.empty()) {
            std::cout << (fmt == ReportFormat::kJson ? report_to_json(report, !no_timing)
                                                     : report_to_csv(report, !no_timing));
        } else {
            write_report(report, out, fmt, !no_timing);
        }
        if (!write_config.empty() && report.calibration) {
            save_calibration(write_config, *report.calibration);
        }
        const AggregateReport &a = report.aggregate;
        if (report.calibration) {
            std::cerr << "calibrate: " << (a.passed ? "constant " + std::to_string(report.calibration->constant)
                                                    : std::string("no grid value met the target"))
                      << " -> " << (a.passed ? "PASS" : "FAIL") << "\n";
        } else {
            std::cerr << mode_name(config.mode) << ": " << a.successes << "/" << a.trials << " succeeded (threshold "
                      << a.threshold << ") -> " << (a.passed ? "PASS" : "FAIL") << "\n";
        }
        return exit_code(report);
    } catch (const std::exception &e) {
        std::cerr << "stablearn: " << e.what() << "\n";
        return 2;
    }
}
