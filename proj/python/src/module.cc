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

#include <optional>
#include <string>
#include <vector>

#include "pybind11/complex.h"
#include "pybind11/numpy.h"
#include "pybind11/operators.h"
#include "pybind11/pybind11.h"
#include "pybind11/stl.h"

#include "stablearn/clifford.h"
#include "stablearn/errors.h"
#include "stablearn/f2lin.h"
#include "stablearn/harness.h"
#include "stablearn/learner.h"
#include "stablearn/pauli.h"
#include "stablearn/rng.h"
#include "stablearn/simstate.h"

namespace py = pybind11;
using namespace stablearn;

namespace {

Mat2 to_mat2(const py::array_t<Complex, py::array::c_style | py::array::forcecast> &m) {
    if (m.ndim() != 2 || m.shape(0) != 2 || m.shape(1) != 2) {
        throw std::invalid_argument("expected a 2x2 matrix");
    }
    auto r = m.unchecked<2>();
    return {r(0, 0), r(0, 1), r(1, 0), r(1, 1)};
}

py::array_t<Complex> to_array(std::span<const Complex> values) {
    py::array_t<Complex> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const std::vector<double> &values) {
    py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

CliffordGate parse_gate(const std::string &name, uint32_t q0, std::optional<uint32_t> q1) {
    if (name == "H") {
        return CliffordGate::h(q0);
    }
    if (name == "S") {
        return CliffordGate::s(q0);
    }
    if (name == "CNOT") {
        if (!q1) {
            throw std::invalid_argument("CNOT needs a target qubit");
        }
        return CliffordGate::cnot(q0, *q1);
    }
    throw std::invalid_argument("unknown Clifford gate '" + name + "'");
}

BudgetMode parse_budget_mode(const std::string &mode) {
    if (mode == "tester") {
        return BudgetMode::kTester;
    }
    if (mode == "learner") {
        return BudgetMode::kLearner;
    }
    throw std::invalid_argument("budget mode must be 'tester' or 'learner'");
}

DopingKind parse_doping(const std::string &kind) {
    if (kind == "T") {
        return DopingKind::kT;
    }
    if (kind == "U1") {
        return DopingKind::kHaarU1;
    }
    throw std::invalid_argument("doping must be 'T' or 'U1'");
}

}  // namespace

PYBIND11_MODULE(_stablearn, m) {
    m.doc() = "Learning stabilizer-dimension structured quantum states";

    py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<CapacityError>(m, "CapacityError", PyExc_MemoryError);
    py::register_exception<PromiseViolation>(m, "PromiseViolation", PyExc_RuntimeError);
    py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

    py::class_<Rng>(m, "Rng")
        .def(py::init<uint64_t>(), py::arg("seed"))
        .def("next", [](Rng &r) { return r(); });
    m.def("mix_seed", &mix_seed, py::arg("seed"), py::arg("index"));

    py::class_<F2Vector>(m, "F2Vector")
        .def(py::init<size_t>(), py::arg("num_qubits"))
        .def_static("from_str", &F2Vector::from_str)
        .def_static("from_hex", &F2Vector::from_hex, py::arg("text"), py::arg("num_qubits"))
        .def_static("from_index", &F2Vector::from_index, py::arg("num_qubits"), py::arg("index"))
        .def_property_readonly("num_qubits", &F2Vector::num_qubits)
        .def("x", &F2Vector::x)
        .def("z", &F2Vector::z)
        .def("is_zero", &F2Vector::is_zero)
        .def("to_index", &F2Vector::to_index)
        .def("hex", &F2Vector::hex)
        .def("__str__", &F2Vector::str)
        .def("__repr__", [](const F2Vector &v) { return "F2Vector('" + v.str() + "')"; })
        .def("__xor__", [](const F2Vector &a, const F2Vector &b) { return a ^ b; })
        .def(py::self == py::self);
    m.def("symplectic_product", &symplectic_product);

    py::class_<Subspace>(m, "Subspace")
        .def(py::init<size_t>(), py::arg("num_qubits"))
        .def_static("full", &Subspace::full)
        .def_static("trailing_z_block", &Subspace::trailing_z_block, py::arg("num_qubits"), py::arg("d"))
        .def_property_readonly("num_qubits", &Subspace::num_qubits)
        .def_property_readonly("dim", &Subspace::dim)
        .def_property_readonly("basis", &Subspace::basis)
        .def("insert", &Subspace::insert)
        .def("__contains__", [](const Subspace &h, const F2Vector &x) { return contains(h, x); })
        .def(py::self == py::self);
    m.def("row_reduce",
          [](const std::vector<F2Vector> &vectors, size_t n) { return row_reduce(vectors, n); });
    m.def("symplectic_complement", &symplectic_complement);
    m.def("is_isotropic", &is_isotropic);
    m.def("is_subspace_of", &is_subspace_of, py::arg("inner"), py::arg("outer"));
    m.def("random_isotropic_subspace", &random_isotropic_subspace, py::arg("num_qubits"), py::arg("d"),
          py::arg("rng"));

    py::class_<CliffordCircuit>(m, "CliffordCircuit")
        .def(py::init<size_t>(), py::arg("num_qubits"))
        .def_static("from_text", &CliffordCircuit::from_text, py::arg("text"), py::arg("num_qubits"))
        .def(
            "append",
            [](CliffordCircuit &c, const std::string &name, uint32_t q0, std::optional<uint32_t> q1) {
                c.append(parse_gate(name, q0, q1));
            },
            py::arg("gate"), py::arg("q0"), py::arg("q1") = py::none())
        .def_property_readonly("num_qubits", &CliffordCircuit::num_qubits)
        .def("__len__", &CliffordCircuit::size)
        .def("is_symplectic", &CliffordCircuit::is_symplectic)
        .def("__str__", &CliffordCircuit::str);
    m.def("act", py::overload_cast<const CliffordCircuit &, const F2Vector &>(&act));
    m.def("act", py::overload_cast<const CliffordCircuit &, const Subspace &>(&act));
    m.def("inverse", &inverse);
    m.def("isotropic_mapping_circuit", &isotropic_mapping_circuit, py::arg("h"),
          py::arg("check_invariants") = false);
    m.def("random_clifford_circuit", &random_clifford_circuit, py::arg("num_qubits"), py::arg("num_gates"),
          py::arg("rng"));

    py::class_<StateVector>(m, "StateVector")
        .def(py::init<size_t>(), py::arg("num_qubits"))
        .def_static(
            "from_amplitudes",
            [](py::array_t<Complex, py::array::c_style | py::array::forcecast> a, bool normalize) {
                return StateVector::from_amplitudes(std::vector<Complex>(a.data(), a.data() + a.size()), normalize);
            },
            py::arg("amplitudes"), py::arg("normalize") = false)
        .def_static("basis_state", &StateVector::basis_state)
        .def_property_readonly("num_qubits", &StateVector::num_qubits)
        .def_property_readonly("amplitudes", [](const StateVector &s) { return to_array(s.amplitudes()); })
        .def("norm", &StateVector::norm)
        .def("apply_h", &StateVector::apply_h)
        .def("apply_s", &StateVector::apply_s)
        .def("apply_cnot", &StateVector::apply_cnot, py::arg("control"), py::arg("target"))
        .def("apply_u1", [](StateVector &s, size_t q, py::array_t<Complex> u) { s.apply_u1(q, to_mat2(u)); })
        .def("apply", py::overload_cast<const CliffordCircuit &>(&StateVector::apply));
    m.def("haar_random_state", &haar_random_state, py::arg("num_qubits"), py::arg("rng"));
    m.def("tensor", &tensor, py::arg("low"), py::arg("high"));
    m.def("fidelity", &fidelity);
    m.def("trace_distance", &trace_distance);

    py::class_<DopedCircuit>(m, "DopedCircuit")
        .def(py::init<size_t>(), py::arg("num_qubits"))
        .def_static("from_text", &DopedCircuit::from_text, py::arg("text"), py::arg("num_qubits"))
        .def_property_readonly("num_qubits", &DopedCircuit::num_qubits)
        .def_property_readonly("t", &DopedCircuit::t)
        .def("__len__", [](const DopedCircuit &c) { return c.gates().size(); })
        .def("__str__", &DopedCircuit::str);
    m.def("prepare", [](const DopedCircuit &c) { return prepare(c); });
    m.def(
        "random_doped_circuit",
        [](size_t n, size_t gates, size_t t, Rng &rng, const std::string &kind) {
            return random_doped_circuit(n, gates, t, rng, parse_doping(kind));
        },
        py::arg("num_qubits"), py::arg("clifford_gates"), py::arg("t"), py::arg("rng"), py::arg("doping") = "T");

    py::class_<CharDistribution>(m, "CharDistribution")
        .def_property_readonly("num_qubits", &CharDistribution::num_qubits)
        .def_property_readonly("table", [](const CharDistribution &d) { return to_array(d.table()); })
        .def("__getitem__", [](const CharDistribution &d, const F2Vector &x) { return d[x]; })
        .def("total", &CharDistribution::total)
        .def("save", [](const CharDistribution &d, const std::string &path) { d.save(path); })
        .def_static("load", [](const std::string &path) { return CharDistribution::load(path); });
    m.def("char_distribution", [](const StateVector &psi) { return char_distribution(psi); });
    m.def("q_distribution", &q_distribution);
    m.def("subspace_mass", [](const CharDistribution &d, const Subspace &t) { return subspace_mass(d, t); });
    m.def("unsigned_stabilizer_group", [](const StateVector &psi) { return unsigned_stabilizer_group(psi); });
    m.def("weyl_expectation", &weyl_expectation);

    py::class_<StateSource>(m, "StateSource")
        .def(py::init([](const StateVector &psi, std::optional<uint64_t> budget) {
                 return std::make_unique<StateSource>(psi, budget.value_or(StateSource::kUnlimited));
             }),
             py::arg("state"), py::arg("budget") = py::none())
        .def_property_readonly("num_qubits", &StateSource::num_qubits)
        .def_property_readonly("copies_used", &StateSource::copies_used)
        .def_property_readonly("remaining", &StateSource::remaining);
    m.def("bell_difference_sample", &bell_difference_sample, py::arg("source"), py::arg("rng"));

    py::class_<Budget>(m, "Budget")
        .def_readonly("bell_samples", &Budget::bell_samples)
        .def_readonly("majority_copies", &Budget::majority_copies)
        .def_readonly("tomography_copies", &Budget::tomography_copies)
        .def_property_readonly("total_copies", &Budget::total_copies);
    m.def(
        "sample_counts",
        [](size_t n, double eps, double delta, const std::string &mode) {
            return sample_counts(n, eps, delta, parse_budget_mode(mode));
        },
        py::arg("num_qubits"), py::arg("eps"), py::arg("delta"), py::arg("mode") = "learner");
    m.def("learner_budget", &learner_budget, py::arg("num_qubits"), py::arg("t_hat"), py::arg("eps"),
          py::arg("delta"), py::arg("constant") = kDefaultTomographyConstant);

    py::class_<TesterOutcome>(m, "TesterOutcome")
        .def_readonly("accept", &TesterOutcome::accept)
        .def_readonly("k_hat", &TesterOutcome::k_hat)
        .def_readonly("samples", &TesterOutcome::samples)
        .def_readonly("copies_used", &TesterOutcome::copies_used);
    m.def("property_test", &run_property_test, py::arg("source"), py::arg("k"), py::arg("eps"), py::arg("delta"),
          py::arg("rng"));

    py::class_<LearnedState>(m, "LearnedState")
        .def_readonly("num_qubits", &LearnedState::num_qubits)
        .def_readonly("t_hat", &LearnedState::t_hat)
        .def_readonly("circuit", &LearnedState::circuit)
        .def_readonly("x_hat", &LearnedState::x_hat)
        .def_readonly("phi_hat", &LearnedState::phi_hat)
        .def_readonly("copies_used", &LearnedState::copies_used)
        .def_readonly("budget", &LearnedState::budget)
        .def_readonly("stabilizers", &LearnedState::stabilizers)
        .def("to_json", [](const LearnedState &l) { return to_json(l); });
    m.def(
        "learn_state",
        [](StateSource &src, double eps, double delta, Rng &rng, double constant, bool instrument) {
            LearnerOptions opts;
            opts.tomography_constant = constant;
            opts.instrument = instrument;
            return learn_state(src, eps, delta, rng, opts);
        },
        py::arg("source"), py::arg("eps"), py::arg("delta"), py::arg("rng"),
        py::arg("tomography_constant") = kDefaultTomographyConstant, py::arg("instrument") = false);
    m.def("learned_state_from_json", &learned_state_from_json);
    m.def("reconstruct", [](const LearnedState &l) { return reconstruct(l); });

    m.def(
        "run_experiment_json",
        [](const std::string &mode, size_t n, size_t t, double eps, double delta, size_t trials, uint64_t seed,
           size_t k, const std::string &state, size_t threads, bool include_timing) {
            ExperimentConfig c;
            c.mode = parse_mode(mode);
            c.n = n;
            c.t = t;
            c.eps = eps;
            c.delta = delta;
            c.trials = trials;
            c.seed = seed;
            c.k = k;
            if (state == "haar") {
                c.state = StateKind::kHaar;
            } else if (state != "circuit") {
                throw std::invalid_argument("state must be 'circuit' or 'haar'");
            }
            c.threads = threads;
            c.caps = SimulationCaps::from_env();
            ExperimentReport r;
            {
                py::gil_scoped_release release;
                r = run_experiment(c);
            }
            return report_to_json(r, include_timing);
        },
        py::arg("mode"), py::arg("n"), py::arg("t"), py::arg("eps"), py::arg("delta"), py::arg("trials"),
        py::arg("seed"), py::arg("k") = 0, py::arg("state") = "circuit", py::arg("threads") = 1,
        py::arg("include_timing") = false);
}
