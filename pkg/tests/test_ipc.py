"""Inner-product circuits: ancilla bookkeeping, shift gating, shadow identities."""

import math

import numpy as np
import pytest
from oracles import dense_eval_f

from shadowopt.circuits import (
    ParamCircuit,
    Slot,
    build_basic_entangler,
    build_encoder,
    encode,
)
from shadowopt.counting import ExecutionCounter
from shadowopt.deriv import directional_oracle, psr_gradient
from shadowopt.ipc import (
    build_fused_ipc,
    build_ipc,
    estimate_half_shadow,
    estimate_shadow,
    estimate_shadow_fused,
    gate_listing,
)
from shadowopt.sim import ObservableExpr, pauli_obs

# Frozen from the dense-matrix oracle: BasicEntangler(4, 1) at
# theta=(0.1, 0.2, 0.3, 0.4) with v=(0.5, -1, 2, 0.25) and O = Z_0.
FROZEN_THETA = np.array([0.1, 0.2, 0.3, 0.4])
FROZEN_V = np.array([0.5, -1.0, 2.0, 0.25])
FROZEN_D_PLUS = -0.004669971211382268
FROZEN_D_MINUS = 0.22026579524667417
FROZEN_SHADOW = -0.44987153291611287


def _rx(n):
    return ParamCircuit(n, (), tuple(Slot("x", q, ()) for q in range(n)))


# ---------------------------------------------------------------------------
# construction


@pytest.mark.parametrize(
    "d,n_anc", [(1, 0), (2, 1), (3, 2), (4, 2), (5, 3), (8, 3), (9, 4)]
)
def test_ancilla_count_is_ceil_log2(d, n_anc):
    base = ParamCircuit(1, (), tuple(Slot("x", 0, ()) for _ in range(d)))
    ipc, _ = build_ipc(base, np.ones(d), +1, pauli_obs(1))
    assert ipc.layout.n_anc == n_anc
    assert ipc.layout.total == 1 + n_anc


def test_direction_weights_zero_padded():
    base = ParamCircuit(1, (), tuple(Slot("x", 0, ()) for _ in range(5)))
    v = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
    _, joint = build_ipc(base, v, +1, pauli_obs(1))
    assert joint.anc_weights == (1.0, 2.0, 3.0, 4.0, 5.0, 0.0, 0.0, 0.0)
    assert not joint.flag_z


def test_d1_folds_direction_into_coefficients():
    base = _rx(1)
    ipc, joint = build_ipc(base, np.array([2.5]), +1, pauli_obs(1))
    assert ipc.layout.n_anc == 0
    assert joint.anc_weights is None
    assert joint.terms == ((2.5, "Z"),)


def test_shift_gates_conditioned_on_slot_index():
    base = _rx(4)
    ipc, _ = build_ipc(base, np.ones(4), -1, pauli_obs(4))
    assert len(ipc.shift_gates) == 4
    for i, g in enumerate(ipc.shift_gates):
        assert g.angle == -math.pi / 2
        assert g.condition == (ipc.layout.anc_qubits, i)


def test_fused_conditions_interleave_flag():
    base = _rx(2)
    ipc, joint = build_fused_ipc(base, np.array([1.0, -1.0]), pauli_obs(2))
    assert ipc.fused
    assert joint.flag_z
    cond_qubits = ipc.layout.anc_qubits + (ipc.layout.flag_qubit,)
    values = [(g.condition, g.angle) for g in ipc.shift_gates]
    assert values == [
        ((cond_qubits, 0), math.pi / 2),
        ((cond_qubits, 1), -math.pi / 2),
        ((cond_qubits, 2), math.pi / 2),
        ((cond_qubits, 3), -math.pi / 2),
    ]


def test_build_validation():
    base = _rx(2)
    obs = pauli_obs(2)
    with pytest.raises(ValueError):
        build_ipc(base, np.ones(3), +1, obs)  # direction length
    with pytest.raises(ValueError):
        build_ipc(base, np.ones(2), 0, obs)  # sign
    with pytest.raises(ValueError):
        build_ipc(base, np.ones(2), +1, pauli_obs(3))  # width mismatch
    anc_obs = ObservableExpr(((1.0, "ZI"),), anc_weights=(1.0, 0.0))
    with pytest.raises(ValueError):
        build_ipc(base, np.ones(2), +1, anc_obs)  # already has ancilla part


# ---------------------------------------------------------------------------
# values: analytic, frozen, oracle


def test_half_shadow_analytic_two_slots():
    # f = cos(theta_0): D+ = (1/2)(cos(pi/6 + pi/2) + cos(pi/6))
    base = _rx(2)
    theta = [math.pi / 6, 0.9]
    ipc, joint = build_ipc(base, np.array([1.0, 1.0]), +1, pauli_obs(2))
    value = estimate_half_shadow(ipc, joint, theta)
    expected = 0.5 * (math.cos(math.pi / 6 + math.pi / 2) + math.cos(math.pi / 6))
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.18301270189221935, abs=1e-12)


def test_shadow_analytic_two_slots():
    base = _rx(2)
    est = estimate_shadow(base, [math.pi / 6, 0.9], np.ones(2), pauli_obs(2))
    assert est.value == pytest.approx(-0.5, abs=1e-12)  # -sin(pi/6)


def test_half_shadow_d1_degenerate():
    base = _rx(1)
    ipc, joint = build_ipc(base, np.array([2.5]), +1, pauli_obs(1))
    value = estimate_half_shadow(ipc, joint, [0.3])
    assert value == pytest.approx(2.5 * math.cos(0.3 + math.pi / 2), abs=1e-12)


def test_frozen_half_shadows_and_shadow():
    circ = build_basic_entangler(4, 1)
    obs = pauli_obs(4)
    est = estimate_shadow(circ, FROZEN_THETA, FROZEN_V, obs)
    assert est.half_values[0] == pytest.approx(FROZEN_D_PLUS, abs=1e-12)
    assert est.half_values[1] == pytest.approx(FROZEN_D_MINUS, abs=1e-12)
    assert est.value == pytest.approx(FROZEN_SHADOW, abs=1e-12)
    # Eq. 2 recombination from this estimate's own half readings
    assert est.value == pytest.approx(
        0.5 * circ.d * (est.half_values[0] - est.half_values[1]), abs=1e-15
    )


def test_half_shadow_matches_shifted_sum_oracle(rng):
    circ = build_basic_entangler(3, 1)
    obs = pauli_obs(3)
    for s in (1, -1):
        theta = rng.uniform(-math.pi, math.pi, circ.d)
        v = rng.standard_normal(circ.d)
        ipc, joint = build_ipc(circ, v, s, obs)
        value = estimate_half_shadow(ipc, joint, theta)
        brute = np.mean(
            [
                dense_eval_f(circ, theta + s * (math.pi / 2) * e, obs) * v[i]
                for i, e in enumerate(np.eye(circ.d))
            ]
        )
        assert value == pytest.approx(brute, abs=1e-9)


def test_shadow_is_gradient_inner_product(rng):
    circ = build_basic_entangler(4, 1)
    obs = pauli_obs(4)
    for _ in range(5):
        theta = rng.uniform(-math.pi, math.pi, circ.d)
        v = rng.standard_normal(circ.d)
        est = estimate_shadow(circ, theta, v, obs)
        grad = psr_gradient(circ, theta, obs)
        assert est.value == pytest.approx(float(grad.values @ v), abs=1e-9)
        oracle = directional_oracle(circ, theta, v, obs)
        assert est.value == pytest.approx(oracle.value, abs=1e-9)


def test_fused_matches_two_call(rng):
    circ = build_basic_entangler(3, 2)
    obs = pauli_obs(3)
    for _ in range(5):
        theta = rng.uniform(-math.pi, math.pi, circ.d)
        v = rng.standard_normal(circ.d)
        two = estimate_shadow(circ, theta, v, obs)
        one = estimate_shadow_fused(circ, theta, v, obs)
        assert one.value == pytest.approx(two.value, abs=1e-9)
        assert one.executions_used == 1
        assert two.executions_used == 2
        assert one.half_values is None


def test_shadow_linear_in_direction(rng):
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    v = rng.standard_normal(circ.d)
    a = estimate_shadow(circ, theta, v, obs).value
    b = estimate_shadow(circ, theta, 2.0 * v, obs).value
    assert b == pytest.approx(2.0 * a, abs=1e-9)


def test_ipc_with_encoder_prefix(rng):
    ansatz = build_basic_entangler(3, 1)
    x = np.array([0.4, -1.1, 0.7])
    circ = encode(ansatz, x)
    assert circ.prefix  # encoder gates got remapped into the IPC layout
    obs = pauli_obs(3)
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    v = rng.standard_normal(circ.d)
    est = estimate_shadow(circ, theta, v, obs)
    oracle = directional_oracle(circ, theta, v, obs)
    assert est.value == pytest.approx(oracle.value, abs=1e-9)


# ---------------------------------------------------------------------------
# shots and counting


def test_shot_estimates_unbiased_two_call():
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    theta = np.array([0.5, -0.3])
    v = np.array([1.0, 0.5])
    exact = estimate_shadow(circ, theta, v, obs).value
    values = np.array(
        [
            estimate_shadow(circ, theta, v, obs, shots=400, seed=k).value
            for k in range(300)
        ]
    )
    se = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - exact) <= 4.0 * se


def test_shot_estimates_unbiased_fused():
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    theta = np.array([0.5, -0.3])
    v = np.array([1.0, 0.5])
    exact = estimate_shadow(circ, theta, v, obs).value
    values = np.array(
        [
            estimate_shadow_fused(circ, theta, v, obs, shots=400, seed=k).value
            for k in range(300)
        ]
    )
    se = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - exact) <= 4.0 * se


def test_shot_seed_determinism():
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    a = estimate_shadow(circ, [0.1, 0.2], np.ones(2), obs, shots=64, seed=7)
    b = estimate_shadow(circ, [0.1, 0.2], np.ones(2), obs, shots=64, seed=7)
    assert a.value == b.value and a.half_values == b.half_values


def test_execution_counting():
    circ = build_basic_entangler(2, 1)
    obs = pauli_obs(2)
    counter = ExecutionCounter()
    estimate_shadow(circ, [0.1, 0.2], np.ones(2), obs, counter=counter)
    assert counter.count == 2
    estimate_shadow_fused(circ, [0.1, 0.2], np.ones(2), obs, counter=counter)
    assert counter.count == 3
    ipc, joint = build_ipc(circ, np.ones(2), -1, obs)
    estimate_half_shadow(ipc, joint, [0.1, 0.2], counter=counter)
    assert counter.count == 4


def test_half_shadow_rejects_fused_circuit():
    circ = _rx(2)
    ipc, joint = build_fused_ipc(circ, np.ones(2), pauli_obs(2))
    with pytest.raises(ValueError):
        estimate_half_shadow(ipc, joint, [0.1, 0.2])


# ---------------------------------------------------------------------------
# listing


def test_gate_listing_single_sign_d1():
    ipc, _ = build_ipc(_rx(1), np.array([2.5]), +1, pauli_obs(1))
    assert gate_listing(ipc) == (
        "qubits: 1 (anc=0, flag=0, main=1)\n"
        "d: 1\n"
        "mode: single-sign s=+1\n"
        "prep: uniform ancilla superposition over 1 states\n"
        "rx(theta[0]) q[0]\n"
        "rx(+1.5708) q[0]\n"
    )


def test_gate_listing_fused_d2():
    ipc, _ = build_fused_ipc(_rx(2), np.array([1.0, -1.0]), pauli_obs(2))
    assert gate_listing(ipc) == (
        "qubits: 4 (anc=1, flag=1, main=2)\n"
        "d: 2\n"
        "mode: fused\n"
        "prep: uniform ancilla superposition over 2 states\n"
        "h q[1]\n"
        "rx(theta[0]) q[2]\n"
        "rx(+1.5708) q[2] if q[0, 1]==0\n"
        "rx(-1.5708) q[2] if q[0, 1]==1\n"
        "rx(theta[1]) q[3]\n"
        "rx(+1.5708) q[3] if q[0, 1]==2\n"
        "rx(-1.5708) q[3] if q[0, 1]==3\n"
    )
