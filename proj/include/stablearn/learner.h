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

#ifndef STABLEARN_LEARNER_H
#define STABLEARN_LEARNER_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stablearn/clifford.h"
#include "stablearn/f2lin.h"
#include "stablearn/pauli.h"
#include "stablearn/rng.h"
#include "stablearn/simstate.h"

namespace stablearn {

/// Largest register handed to pure_state_tomography.
inline constexpr size_t kTomographyCap = 6;

/// Constant c in N_{t,eps,delta} = ceil(c 16^t ln(4^t / delta) / eps^2). Produced by
/// `stablearn calibrate` (200 Haar-random trials per t in {1, 2, 3} at eps = 0.1,
/// delta = 1/30) and frozen here.
inline constexpr double kDefaultTomographyConstant = 0.05;

enum class BudgetMode { kTester, kLearner };

/// Copy and sample counts for one run. All counts are ceilings of the closed forms.
struct Budget {
    uint64_t bell_samples = 0;       // each consumes 4 copies
    uint64_t majority_copies = 0;    // majority-vote measurements of C|psi>; 0 until t_hat is known
    uint64_t tomography_copies = 0;  // N_{t_hat, eps/2, delta/3}, drawn from the reserved copies
    double eps = 0;
    double delta = 0;

    /// Copies taken from the input source: 4 per Bell sample plus the majority copies.
    uint64_t total_copies() const {
        return 4 * bell_samples + majority_copies;
    }
};

/// Tester: ceil((2 ln(1/delta) + 8n) / eps) samples, eps in (0, 3/8), delta in (0, 1].
/// Learner: ceil((8 ln(3/delta) + 32n) / eps^2) samples, eps, delta in (0, 1].
/// Natural logarithms throughout. Throws std::invalid_argument on out-of-range eps/delta.
Budget sample_counts(size_t num_qubits, double eps, double delta, BudgetMode mode);

/// N_{t,eps,delta} for the Pauli-expectation tomography routine; 0 when t = 0.
uint64_t pure_tomography_copies(size_t t, double eps, double delta, double constant = kDefaultTomographyConstant);

/// The full learner budget once t_hat is known:
/// majority_copies = 2 N_{t_hat, eps/2, delta/3} + ceil(24 ln(3/delta)).
Budget learner_budget(size_t num_qubits, size_t t_hat, double eps, double delta,
                      double constant = kDefaultTomographyConstant);

struct TesterOutcome {
    bool accept = false;
    size_t k_hat = 0;  // dim H = 2n - dim(span of samples)
    uint64_t samples = 0;
    uint64_t copies_used = 0;
};

/// Stabilizer-dimension property test. Draws the tester budget of Bell difference samples,
/// spans them into H^perp and accepts iff k_hat = 2n - dim H^perp >= k.
TesterOutcome run_property_test(StateSource &src, size_t k, double eps, double delta, Rng &rng);
bool property_test(StateSource &src, size_t k, double eps, double delta, Rng &rng);

struct LearnerOptions {
    double tomography_constant = kDefaultTomographyConstant;
    size_t tomography_cap = kTomographyCap;
    /// Check the collision identity on C|psi> against the exact p table before measuring
    /// (needs n <= oracle_cap).
    bool instrument = false;
    size_t oracle_cap = kOracleCap;
};

/// Classical description C^dagger |phi_hat>|x_hat> of a learned state.
struct LearnedState {
    size_t num_qubits = 0;
    size_t t_hat = 0;
    CliffordCircuit circuit{1};
    /// n - t_hat characters; character k is the measured value of qubit t_hat + k.
    std::string x_hat;
    StateVector phi_hat{0};
    uint64_t copies_used = 0;
    uint64_t seed = 0;
    Budget budget;
    /// Majority-vote copies whose last register read x_hat.
    uint64_t reserved_copies = 0;
    /// The learned isotropic subspace H (empty for deserialized states).
    std::optional<Subspace> stabilizers;
    /// |collision frequency identity residual| when run instrumented.
    std::optional<double> collision_residual;
};

/// Tomography of a state promised to have stabilizer dimension >= n - t.
///
/// 1. Bell-difference-sample the learner budget and span the samples.
/// 2. H = symplectic complement of the span, t_hat = n - dim H.
/// 3. Require H isotropic and build C with C(H) = 0^{n+t_hat} x F_2^{n-t_hat}.
/// 4. Measure the last n - t_hat qubits of 2N + ceil(24 ln(3/delta)) copies of C|psi>, take
///    the majority string x_hat and keep the first t_hat qubits of the copies that read it.
/// 5. Pure-state tomography at (eps/2, delta/3) on the kept copies.
///
/// Throws PromiseViolation when H is not isotropic or fewer than N copies were kept.
LearnedState learn_state(StateSource &src, double eps, double delta, Rng &rng, const LearnerOptions &options = {});

/// Pauli-expectation tomography of a t-qubit pure state.
///
/// Splits N_{t,eps,delta} copies evenly over the 4^t - 1 non-identity Weyl operators,
/// measures each after rotating it to a Z string, assembles
/// rho_hat = 2^{-t} sum_x <W_x>_est W_x and returns its principal eigenvector.
StateVector pure_state_tomography(StateSource &src, double eps, double delta, Rng &rng,
                                  double constant = kDefaultTomographyConstant, size_t max_qubits = kTomographyCap);

/// Most frequent string; ties go to the lexicographically smallest.
std::string majority_basis_state(std::span<const std::string> outcomes);

/// C^dagger (|phi_hat> (x) |x_hat>).
StateVector reconstruct(const LearnedState &learned, size_t max_qubits = kSingleCopyCap);

/// JSON document: n, t_hat, x_hat, circuit (text format), phi_hat ([re, im] pairs),
/// copies_used, seed.
std::string to_json(const LearnedState &learned);
LearnedState learned_state_from_json(std::string_view text);

struct CalibrationPoint {
    double constant = 0;
    size_t t = 0;
    size_t trials = 0;
    size_t successes = 0;
};

struct CalibrationResult {
    bool found = false;
    double constant = 0;
    double eps = 0;
    double delta = 0;
    size_t trials = 0;
    std::vector<CalibrationPoint> sweep;
};

/// Scans `grid` in ascending order and returns the smallest constant for which
/// pure_state_tomography on Haar-random t-qubit states lands within `eps` in at least a
/// (1 - delta) fraction of `trials`, for every t in `ts`.
CalibrationResult calibrate_tomography_constant(std::span<const double> grid, std::span<const size_t> ts,
                                                size_t trials, double eps, double delta, uint64_t seed);

void save_calibration(const std::filesystem::path &path, const CalibrationResult &result);
/// Reads the "tomography_constant" field written by save_calibration.
double load_tomography_constant(const std::filesystem::path &path);

}  // namespace stablearn

#endif
