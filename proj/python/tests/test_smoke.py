# Copyright 2026 The stablearn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json
import math

import numpy as np
import pytest

import stablearn as sl


def test_f2vector_and_subspace():
    x = sl.F2Vector.from_str("10|00")
    z = sl.F2Vector.from_str("00|10")
    assert sl.symplectic_product(x, z)
    assert not sl.symplectic_product(x, x)
    assert str(x ^ z) == "10|10"
    assert sl.F2Vector.from_hex(x.hex(), 2) == x

    h = sl.row_reduce([z], 2)
    assert h.dim == 1
    assert z in h
    perp = sl.symplectic_complement(h)
    assert perp.dim == 3
    assert sl.symplectic_complement(perp) == h
    assert sl.is_isotropic(h)
    assert not sl.is_isotropic(sl.row_reduce([x, z], 2))


def test_isotropic_mapping_circuit():
    rng = sl.Rng(3)
    for n in range(1, 6):
        for d in range(n + 1):
            h = sl.random_isotropic_subspace(n, d, rng)
            c = sl.isotropic_mapping_circuit(h, True)
            assert sl.act(c, h) == sl.Subspace.trailing_z_block(n, d)
            assert c.is_symplectic()
    with pytest.raises(sl.PromiseViolation):
        sl.isotropic_mapping_circuit(sl.row_reduce([sl.F2Vector.from_str("10|00"), sl.F2Vector.from_str("00|10")], 2))


def test_state_vector_and_distributions():
    psi = sl.StateVector(2)
    psi.apply_h(0)
    psi.apply_cnot(0, 1)
    amps = psi.amplitudes
    assert np.allclose(amps, np.array([1, 0, 0, 1]) / math.sqrt(2))
    p = sl.char_distribution(psi)
    assert p.table.shape == (16,)
    assert math.isclose(p.total(), 1.0, abs_tol=1e-12)
    assert sl.unsigned_stabilizer_group(psi).dim == 2
    q = sl.q_distribution(p)
    assert math.isclose(q.table.sum(), 1.0, abs_tol=1e-12)

    t = np.diag([1, np.exp(1j * np.pi / 4)])
    psi.apply_u1(0, t)
    assert math.isclose(psi.norm(), 1.0, abs_tol=1e-12)
    assert sl.unsigned_stabilizer_group(psi).dim == 1


def test_doped_circuit_text():
    c = sl.DopedCircuit.from_text("H 0\nT 0\nCNOT 0 1\n", 2)
    assert c.t == 1
    assert len(c) == 3
    psi = sl.prepare(c)
    assert psi.num_qubits == 2


def test_budgets():
    assert sl.sample_counts(8, 0.3, 0.01, "tester").bell_samples == 245
    assert sl.sample_counts(8, 0.2, 0.1, "learner").bell_samples == 7081
    b = sl.learner_budget(8, 0, 0.2, 0.1)
    assert b.tomography_copies == 0
    assert b.total_copies == 4 * 7081 + math.ceil(24 * math.log(30))


def test_property_test_and_budget():
    rng = sl.Rng(5)
    src = sl.StateSource(sl.StateVector(4))
    out = sl.property_test(src, 4, 0.3, 0.05, rng)
    assert out.accept
    assert out.k_hat == 4
    assert src.copies_used == out.copies_used
    small = sl.StateSource(sl.StateVector(4), budget=3)
    with pytest.raises(sl.BudgetExhausted):
        sl.bell_difference_sample(small, rng)


def test_learn_state_round_trip():
    rng = sl.Rng(11)
    psi = sl.prepare(sl.random_doped_circuit(5, 60, 1, rng))
    src = sl.StateSource(psi)
    learned = sl.learn_state(src, 0.2, 0.1, rng)
    assert learned.t_hat <= 2
    assert learned.copies_used == learned.budget.total_copies == src.copies_used
    est = sl.reconstruct(learned)
    assert sl.trace_distance(est, psi) <= 0.2
    back = sl.learned_state_from_json(learned.to_json())
    assert math.isclose(sl.fidelity(sl.reconstruct(back), est), 1.0, abs_tol=1e-12)
    assert json.loads(learned.to_json())["n"] == 5


def test_run_experiment_is_reproducible():
    a = sl.run_experiment("learn", 4, 1, 0.2, 0.1, 3, 42)
    b = sl.run_experiment("learn", 4, 1, 0.2, 0.1, 3, 42, threads=2)
    assert a == b
    assert len(a["trials"]) == 3
    assert "wall_ms" not in a["trials"][0]
    with pytest.raises(ValueError):
        sl.run_experiment("train", 4, 1, 0.2, 0.1, 3, 42)
