"""Inner Product Circuits: directional derivatives in two executions or one.

The two-call construction prepares a uniform superposition over d ancilla
basis states and interleaves one value-controlled pi/2 shift per parameter
slot; measuring O_v tensor H then reads off a weighted sum of all d shifted
objectives at once. The fused variant adds a flag qubit in |+> that selects
the shift sign, so the positive and negative halves are taken in the same
execution and Z on the flag recovers their difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import ParamCircuit
from .counting import ExecutionCounter, resolve
from . import sim
from .sim import GateOp, ObservableExpr, RegisterLayout

SHIFT = math.pi / 2.0


def _offset_gate(g: GateOp, offset: int) -> GateOp:
    """Remap a main-register gate onto a layout with ancillas/flag in front."""
    condition = g.condition
    if condition is not None:
        qubits, value = condition
        condition = (tuple(q + offset for q in qubits), value)
    return GateOp(g.kind, tuple(t + offset for t in g.targets), g.angle, condition)


@dataclass(frozen=True)
class IpcCircuit:
    """A bound-ready IPC: base ansatz plus its interleaved controlled shifts.

    ``shift_gates`` holds the controlled rotations in slot order — one per
    slot for a fixed shift sign, or a (+pi/2, -pi/2) pair per slot when
    ``fused`` (the pair is distinguished by the flag-qubit condition bit).
    """

    base: ParamCircuit
    layout: RegisterLayout
    shift_sign: int | None
    shift_gates: tuple[GateOp, ...]
    fused: bool = False

    @property
    def d(self) -> int:
        return self.base.d

    def bind(self, theta) -> list[GateOp]:
        """Full gate sequence at theta (ancilla prep excluded: it is done by
        direct state assignment, not gates)."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.d,):
            raise ValueError(f"theta has shape {theta.shape}, expected ({self.d},)")
        offset = self.layout.main_qubit(0)
        gates: list[GateOp] = []
        if self.fused:
            gates.append(sim.hadamard(self.layout.flag_qubit))
        gates.extend(_offset_gate(g, offset) for g in self.base.prefix)
        per_slot = 2 if self.fused else 1
        for i, slot in enumerate(self.base.slots):
            gates.append(
                sim.rotation(slot.axis, slot.target + offset, float(theta[i]))
            )
            gates.extend(self.shift_gates[per_slot * i : per_slot * (i + 1)])
            gates.extend(_offset_gate(g, offset) for g in slot.fixed)
        return gates


@dataclass(frozen=True)
class ShadowEstimate:
    """One directional-derivative reading D_v, with its raw halves if taken
    separately."""

    v: np.ndarray
    value: float
    half_values: tuple[float, float] | None
    shots: int | None
    executions_used: int
    seed: object = None


def _check_direction(base: ParamCircuit, v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if base.d < 1:
        raise ValueError("base circuit has no parameters")
    if v.shape != (base.d,):
        raise ValueError(f"direction has shape {v.shape}, expected ({base.d},)")
    return v


def _check_base_obs(base: ParamCircuit, obs: ObservableExpr) -> None:
    if obs.anc_weights is not None or obs.flag_z:
        raise ValueError("base observable must act on the main register only")
    if obs.n_main != base.n_qubits:
        raise ValueError(
            f"observable is on {obs.n_main} qubits, circuit has {base.n_qubits}"
        )


def _joint_observable(
    obs: ObservableExpr, v: np.ndarray, layout: RegisterLayout, flag_z: bool
) -> ObservableExpr:
    """O_v tensor H (tensor Z_flag when fused), encoded as ancilla weights.

    With zero ancillas (d = 1) the single weight v_1 is folded into the term
    coefficients instead.
    """
    if layout.n_anc == 0:
        terms = tuple((coeff * float(v[0]), word) for coeff, word in obs.terms)
        return ObservableExpr(terms, None, flag_z)
    weights = [0.0] * (1 << layout.n_anc)
    weights[: v.size] = [float(x) for x in v]
    return ObservableExpr(obs.terms, tuple(weights), flag_z)


def build_ipc(
    base: ParamCircuit, v, s: int, obs: ObservableExpr
) -> tuple[IpcCircuit, ObservableExpr]:
    """Single-sign IPC (Fig. 2 shape) and its joint observable.

    Ancilla count is ceil(log2 d); slot j's shift is controlled on the
    ancillas reading exactly j-1 (zero-based), and anc_weights carries v
    zero-padded, so padded branches contribute nothing.
    """
    v = _check_direction(base, v)
    if s not in (1, -1):
        raise ValueError(f"shift sign must be +1 or -1, got {s!r}")
    _check_base_obs(base, obs)
    n_anc = (base.d - 1).bit_length()
    layout = RegisterLayout(base.n_qubits, n_anc=n_anc)
    offset = layout.main_qubit(0)
    shift_gates = []
    for i, slot in enumerate(base.slots):
        condition = (layout.anc_qubits, i) if n_anc else None
        shift_gates.append(
            sim.rotation(slot.axis, slot.target + offset, s * SHIFT, condition)
        )
    circuit = IpcCircuit(base, layout, s, tuple(shift_gates))
    return circuit, _joint_observable(obs, v, layout, flag_z=False)


def build_fused_ipc(
    base: ParamCircuit, v, obs: ObservableExpr
) -> tuple[IpcCircuit, ObservableExpr]:
    """Both shift signs in one circuit, selected by a flag qubit in |+>.

    Per slot: a +pi/2 rotation conditioned on (flag=0, anc=j-1) and a -pi/2
    rotation conditioned on (flag=1, anc=j-1); the observable gains a Z factor
    on the flag, whose expectation is half the difference of the two halves.
    """
    v = _check_direction(base, v)
    _check_base_obs(base, obs)
    n_anc = (base.d - 1).bit_length()
    layout = RegisterLayout(base.n_qubits, n_anc=n_anc, has_flag=True)
    offset = layout.main_qubit(0)
    cond_qubits = layout.anc_qubits + (layout.flag_qubit,)
    shift_gates = []
    for i, slot in enumerate(base.slots):
        for flag_bit, sign in ((0, 1.0), (1, -1.0)):
            shift_gates.append(
                sim.rotation(
                    slot.axis,
                    slot.target + offset,
                    sign * SHIFT,
                    ((cond_qubits), (i << 1) | flag_bit),
                )
            )
    circuit = IpcCircuit(base, layout, None, tuple(shift_gates), fused=True)
    return circuit, _joint_observable(obs, v, layout, flag_z=True)


def _execute(
    ipc: IpcCircuit,
    obs: ObservableExpr,
    theta,
    shots: int | None,
    seed,
    counter: ExecutionCounter | None,
) -> float:
    state = sim.init_register(ipc.layout)
    state = sim.set_ancilla_uniform(state, ipc.d)
    state = sim.run_circuit(state, ipc.bind(theta))
    resolve(counter).add(1)
    if shots is None:
        return sim.exact_expectation(state, obs)
    return sim.sampled_expectation(state, obs, shots, seed)


def estimate_half_shadow(
    ipc: IpcCircuit,
    obs: ObservableExpr,
    theta,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> float:
    """One execution of a single-sign IPC: D^s_v = (1/d) sum_i f(theta + s*pi/2*e_i) v_i."""
    if ipc.fused:
        raise ValueError("half-shadow readings need a single-sign IPC")
    return _execute(ipc, obs, theta, shots, seed, counter)


def estimate_shadow(
    base: ParamCircuit,
    theta,
    v,
    obs: ObservableExpr,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> ShadowEstimate:
    """D_v = (d/2)(D+ - D-) from the two single-sign IPCs; two executions."""
    v = _check_direction(base, v)
    plus, joint_p = build_ipc(base, v, +1, obs)
    minus, joint_m = build_ipc(base, v, -1, obs)
    if shots is None:
        s1 = s2 = None
    else:
        rng = np.random.default_rng(seed)
        s1, s2 = rng.integers(0, 2**63, size=2)
    d_plus = estimate_half_shadow(plus, joint_p, theta, shots, s1, counter)
    d_minus = estimate_half_shadow(minus, joint_m, theta, shots, s2, counter)
    value = 0.5 * base.d * (d_plus - d_minus)
    return ShadowEstimate(v, value, (d_plus, d_minus), shots, 2, seed)


def estimate_shadow_fused(
    base: ParamCircuit,
    theta,
    v,
    obs: ObservableExpr,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> ShadowEstimate:
    """D_v = d * <Z_flag (x) O_v (x) H> from the fused IPC; one execution."""
    v = _check_direction(base, v)
    circuit, joint = build_fused_ipc(base, v, obs)
    reading = _execute(circuit, joint, theta, shots, seed, counter)
    return ShadowEstimate(v, base.d * reading, None, shots, 1, seed)


def _format_gate(g: GateOp, angle_text: str | None = None) -> str:
    if angle_text is None and g.kind in ("rx", "ry", "rz"):
        angle_text = f"{g.angle:+.6g}"
    arg = f"({angle_text})" if angle_text else ""
    cond = ""
    if g.condition is not None:
        qubits, value = g.condition
        cond = f" if q{list(qubits)}=={value}"
    return f"{g.kind}{arg} q{list(g.targets)}{cond}"


def gate_listing(ipc: IpcCircuit) -> str:
    """Human-readable dump of the IPC structure (slot rotations symbolic),
    stable across runs for golden-file comparison."""
    layout = ipc.layout
    offset = layout.main_qubit(0)
    lines = [
        f"qubits: {layout.total} "
        f"(anc={layout.n_anc}, flag={int(layout.has_flag)}, main={layout.n_main})",
        f"d: {ipc.d}",
        f"mode: {'fused' if ipc.fused else f'single-sign s={ipc.shift_sign:+d}'}",
        f"prep: uniform ancilla superposition over {ipc.d} states",
    ]
    if ipc.fused:
        lines.append(_format_gate(sim.hadamard(layout.flag_qubit)))
    lines.extend(_format_gate(_offset_gate(g, offset)) for g in ipc.base.prefix)
    per_slot = 2 if ipc.fused else 1
    for i, slot in enumerate(ipc.base.slots):
        placeholder = sim.rotation(slot.axis, slot.target + offset, 0.0)
        lines.append(_format_gate(placeholder, f"theta[{i}]"))
        lines.extend(
            _format_gate(g)
            for g in ipc.shift_gates[per_slot * i : per_slot * (i + 1)]
        )
        lines.extend(_format_gate(_offset_gate(g, offset)) for g in slot.fixed)
    return "\n".join(lines) + "\n"
