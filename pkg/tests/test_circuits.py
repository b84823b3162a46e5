"""Ansatz builders, encoder, canonical form, eval_f."""

import math

import numpy as np
import pytest
from oracles import dense_circuit, dense_eval_f

from shadowopt.circuits import (
    AnsatzSpec,
    ParamCircuit,
    Slot,
    build_basic_entangler,
    build_encoder,
    build_strongly_entangling,
    canonical_uv_form,
    encode,
    eval_f,
)
from shadowopt.counting import ExecutionCounter
from shadowopt.sim import ObservableExpr, pauli_obs

# Computed once from the independent dense oracle:
# StronglyEntangling(2,1) at theta=(0.1,-0.2,0.3,0.45,-0.55,0.65), Z on qubit 0.
STRONGLY_EXPECTATION = 0.8525245220595056


def test_basic_entangler_shape():
    circ = build_basic_entangler(4, 1)
    assert circ.d == 4
    assert circ.n_qubits == 4
    assert all(slot.axis == "x" for slot in circ.slots)
    ring = circ.slots[-1].fixed
    assert len(ring) == 4
    assert [g.targets for g in ring] == [(0, 1), (1, 2), (2, 3), (3, 0)]
    assert all(not slot.fixed for slot in circ.slots[:-1])


def test_basic_entangler_param_counts():
    assert build_basic_entangler(2, 3).d == 6
    for n in range(2, 7):
        for layers in range(1, 4):
            assert build_basic_entangler(n, layers).d == n * layers


def test_basic_entangler_zero_angles():
    circ = build_basic_entangler(4, 1)
    assert eval_f(circ, np.zeros(4), pauli_obs(4)) == pytest.approx(1.0, abs=1e-12)


def test_strongly_entangling_shape():
    circ = build_strongly_entangling(10, 4)
    assert circ.d == 120
    assert build_strongly_entangling(2, 1).d == 6
    for n in range(2, 7):
        for layers in range(1, 4):
            assert build_strongly_entangling(n, layers).d == 3 * n * layers
    axes = [slot.axis for slot in build_strongly_entangling(2, 1).slots]
    assert axes == ["z", "y", "z", "z", "y", "z"]


def test_strongly_entangling_ring_ranges():
    # range r = (layer mod (n-1)) + 1 cycles through 1..n-1
    circ = build_strongly_entangling(4, 4)
    rings = [slot.fixed for slot in circ.slots if slot.fixed]
    assert len(rings) == 4
    for layer, ring in enumerate(rings):
        r = (layer % 3) + 1
        assert [g.targets for g in ring] == [(q, (q + r) % 4) for q in range(4)]


def test_strongly_entangling_zero_angles():
    circ = build_strongly_entangling(3, 1)
    assert eval_f(circ, np.zeros(circ.d), pauli_obs(3)) == pytest.approx(1.0, abs=1e-12)


def test_strongly_frozen_oracle_value():
    circ = build_strongly_entangling(2, 1)
    theta = np.array([0.1, -0.2, 0.3, 0.45, -0.55, 0.65])
    value = eval_f(circ, theta, pauli_obs(2))
    assert value == pytest.approx(STRONGLY_EXPECTATION, abs=1e-12)
    assert value == pytest.approx(dense_eval_f(circ, theta, pauli_obs(2)), abs=1e-12)


def test_builder_validation():
    with pytest.raises(ValueError):
        build_basic_entangler(1, 1)
    with pytest.raises(ValueError):
        build_basic_entangler(2, 0)
    with pytest.raises(ValueError):
        build_strongly_entangling(1, 2)


def test_encoder_structure_and_action():
    prefix = build_encoder((0.0, 0.0, 0.0))
    assert len(prefix) == 6  # H + RZ per qubit
    assert [g.kind for g in prefix] == ["h", "rz"] * 3

    # <X> after H, RZ(pi) on one qubit is cos(pi) = -1
    circ = ParamCircuit(1, build_encoder((math.pi,)), (Slot("z", 0, ()),))
    value = eval_f(circ, np.zeros(1), ObservableExpr(((1.0, "X"),)))
    assert value == pytest.approx(-1.0, abs=1e-12)


def test_encode_width_check():
    circ = build_basic_entangler(3, 1)
    encoded = encode(circ, (0.1, 0.2, 0.3))
    assert len(encoded.prefix) == 6
    assert encoded.d == circ.d
    with pytest.raises(ValueError):
        encode(circ, (0.1, 0.2))


def test_canonical_form_idempotent_and_equivalent(rng):
    circ = encode(build_strongly_entangling(3, 2), (0.3, -0.8, 1.2))
    canon = canonical_uv_form(circ)
    assert canonical_uv_form(canon) == canon
    assert canon.d == circ.d
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    u_before = dense_circuit(circ.bind(theta), 3)
    u_after = dense_circuit(canon.bind(theta), 3)
    assert np.max(np.abs(u_before - u_after)) <= 1e-12


def test_each_parameter_drives_one_gate(rng):
    circ = build_basic_entangler(3, 2)
    theta = np.zeros(circ.d)
    base = [g.angle for g in circ.bind(theta)]
    for j in range(circ.d):
        shifted = theta.copy()
        shifted[j] = 0.77
        bound = [g.angle for g in circ.bind(shifted)]
        diffs = [k for k, (a, b) in enumerate(zip(base, bound)) if a != b]
        assert len(diffs) == 1


def test_eval_f_closed_form_and_periodicity():
    circ = ParamCircuit(1, (), (Slot("x", 0, ()),))
    obs = pauli_obs(1)
    assert eval_f(circ, [math.pi / 3], obs) == pytest.approx(0.5, abs=1e-12)
    assert eval_f(circ, [math.pi / 3 + 2 * math.pi], obs) == pytest.approx(
        0.5, abs=1e-9
    )


def test_eval_f_periodic_in_every_coordinate(rng):
    circ = build_strongly_entangling(2, 1)
    obs = pauli_obs(2)
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    base = eval_f(circ, theta, obs)
    for j in range(circ.d):
        shifted = theta.copy()
        shifted[j] += 2 * math.pi
        assert eval_f(circ, shifted, obs) == pytest.approx(base, abs=1e-9)


def test_eval_f_range(rng):
    circ = build_basic_entangler(3, 2)
    obs = pauli_obs(3)
    for _ in range(20):
        value = eval_f(circ, rng.uniform(-math.pi, math.pi, circ.d), obs)
        assert -1.0 <= value <= 1.0


def test_eval_f_counts_one_execution():
    circ = build_basic_entangler(2, 1)
    counter = ExecutionCounter()
    eval_f(circ, np.zeros(2), pauli_obs(2), counter=counter)
    assert counter.count == 1
    eval_f(circ, np.zeros(2), pauli_obs(2), shots=50, seed=3, counter=counter)
    assert counter.count == 2


def test_eval_f_shot_determinism():
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    theta = [0.4, -0.9]
    a = eval_f(circ, theta, obs, shots=200, seed=11)
    b = eval_f(circ, theta, obs, shots=200, seed=11)
    assert a == b


def test_eval_f_length_check():
    circ = build_basic_entangler(2, 1)
    with pytest.raises(ValueError):
        eval_f(circ, [0.1], pauli_obs(2))


def test_ansatz_spec_roundtrip():
    spec = AnsatzSpec("strongly", 10, 4)
    assert spec.param_count == 120
    text = spec.to_json(prefix_angles=[0.1, 0.2])
    back, angles = AnsatzSpec.from_json(text)
    assert back == spec
    assert np.allclose(angles, [0.1, 0.2])
    with pytest.raises(ValueError):
        AnsatzSpec("ring", 2, 1)
