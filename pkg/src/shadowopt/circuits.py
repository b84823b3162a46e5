"""Parametrized circuits in canonical alternating form, ansatz builders, encoders.

A circuit is a fixed prefix followed by d slots; slot j holds one single-Pauli
rotation (the trainable gate for parameter j) and a trailing block of fixed
gates. Every parameter owns exactly one slot, which is what makes the pi/2
parameter-shift rule exact per coordinate.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import sim
from .counting import ExecutionCounter, resolve


@dataclass(frozen=True)
class Slot:
    """One trainable rotation (axis, main-register target) plus its fixed tail."""

    axis: str
    target: int
    fixed: tuple[sim.GateOp, ...] = ()

    def __post_init__(self):
        if self.axis not in ("x", "y", "z"):
            raise ValueError(f"slot axis must be x, y or z, got {self.axis!r}")
        if self.target < 0:
            raise ValueError("negative slot target")


@dataclass(frozen=True)
class ParamCircuit:
    n_qubits: int
    prefix: tuple[sim.GateOp, ...]
    slots: tuple[Slot, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.prefix:
            self._check_gate(g)
        for s in self.slots:
            if s.target >= self.n_qubits:
                raise ValueError(f"slot target {s.target} outside {self.n_qubits} qubits")
            for g in s.fixed:
                self._check_gate(g)

    def _check_gate(self, g: sim.GateOp) -> None:
        if any(q >= self.n_qubits or q < 0 for q in g.targets):
            raise ValueError(f"gate {g.kind} targets {g.targets} outside {self.n_qubits} qubits")

    @property
    def d(self) -> int:
        return len(self.slots)

    def bind(self, theta) -> list[sim.GateOp]:
        """Concrete gate sequence for a parameter vector of length d."""
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.d,):
            raise ValueError(f"expected {self.d} parameters, got shape {theta.shape}")
        gates = list(self.prefix)
        for j, slot in enumerate(self.slots):
            gates.append(sim.rotation(slot.axis, slot.target, theta[j]))
            gates.extend(slot.fixed)
        return gates

    def with_prefix(self, gates) -> "ParamCircuit":
        """New circuit with extra fixed gates prepended (data encoding)."""
        return ParamCircuit(self.n_qubits, tuple(gates) + self.prefix, self.slots)


def build_basic_entangler(n_qubits: int, n_layers: int) -> ParamCircuit:
    """Layers of one RX per qubit followed by a nearest-neighbour CNOT ring.

    d = n_qubits * n_layers; the ring is attached to the last slot of each
    layer as its fixed block.
    """
    if n_qubits < 2:
        raise ValueError("entangler ring needs at least 2 qubits")
    if n_layers < 1:
        raise ValueError("need at least one layer")
    slots = []
    for _ in range(n_layers):
        ring = tuple(sim.cnot(i, (i + 1) % n_qubits) for i in range(n_qubits))
        for q in range(n_qubits):
            fixed = ring if q == n_qubits - 1 else ()
            slots.append(Slot("x", q, fixed))
    return ParamCircuit(n_qubits, (), tuple(slots))


def build_strongly_entangling(n_qubits: int, n_layers: int) -> ParamCircuit:
    """Layers of general rotations (RZ-RY-RZ per qubit) plus a ranged CNOT ring.

    d = 3 * n_qubits * n_layers. The entangler range cycles with the layer
    index: r = (layer mod (n_qubits - 1)) + 1.
    """
    if n_qubits < 2:
        raise ValueError("entangler ring needs at least 2 qubits")
    if n_layers < 1:
        raise ValueError("need at least one layer")
    slots = []
    for layer in range(n_layers):
        r = (layer % (n_qubits - 1)) + 1
        ring = tuple(sim.cnot(i, (i + r) % n_qubits) for i in range(n_qubits))
        for q in range(n_qubits):
            last = q == n_qubits - 1
            slots.append(Slot("z", q))
            slots.append(Slot("y", q))
            slots.append(Slot("z", q, ring if last else ()))
    return ParamCircuit(n_qubits, (), tuple(slots))


def build_encoder(features) -> tuple[sim.GateOp, ...]:
    """Angle encoding: Hadamard then RZ(x_i) on each qubit, one qubit per feature."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 1 or features.size < 1:
        raise ValueError("features must be a non-empty 1-D vector")
    gates = []
    for i, x in enumerate(features):
        gates.append(sim.hadamard(i))
        gates.append(sim.rotation("z", i, float(x)))
    return tuple(gates)


def encode(circ: ParamCircuit, features) -> ParamCircuit:
    """Attach an encoding prefix, checking the feature count against the width."""
    features = np.asarray(features, dtype=np.float64)
    if features.shape != (circ.n_qubits,):
        raise ValueError(
            f"{features.size} features do not match circuit width {circ.n_qubits}"
        )
    return circ.with_prefix(build_encoder(features))


def canonical_uv_form(circ: ParamCircuit) -> ParamCircuit:
    """Normalize to the strict prefix + (rotation, fixed-block) alternation.

    Builder outputs are already canonical, so this validates, re-tuples and
    lowercases; it is idempotent and preserves the bound unitary exactly.
    """
    slots = tuple(Slot(s.axis.lower(), s.target, tuple(s.fixed)) for s in circ.slots)
    return ParamCircuit(circ.n_qubits, tuple(circ.prefix), slots)


@dataclass(frozen=True)
class AnsatzSpec:
    """Serializable description of a builder invocation."""

    family: str  # "basic" | "strongly"
    n_qubits: int
    n_layers: int

    def __post_init__(self):
        if self.family not in ("basic", "strongly"):
            raise ValueError(f"unknown ansatz family {self.family!r}")

    @property
    def param_count(self) -> int:
        per = self.n_qubits if self.family == "basic" else 3 * self.n_qubits
        return per * self.n_layers

    def build(self) -> ParamCircuit:
        if self.family == "basic":
            return build_basic_entangler(self.n_qubits, self.n_layers)
        return build_strongly_entangling(self.n_qubits, self.n_layers)

    def to_json(self, prefix_angles=None) -> str:
        doc = {"family": self.family, "n_qubits": self.n_qubits, "n_layers": self.n_layers}
        if prefix_angles is not None:
            doc["prefix_angles"] = [float(x) for x in prefix_angles]
        return json.dumps(doc, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> tuple["AnsatzSpec", np.ndarray | None]:
        doc = json.loads(text)
        spec = AnsatzSpec(doc["family"], int(doc["n_qubits"]), int(doc["n_layers"]))
        angles = doc.get("prefix_angles")
        return spec, None if angles is None else np.asarray(angles, dtype=np.float64)


def eval_f(
    circ: ParamCircuit,
    theta,
    obs: sim.ObservableExpr,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> float:
    """Objective value <H> at theta; exactly one circuit execution.

    shots=None evaluates the exact expectation; otherwise the value is a
    shot-sampled estimate, bit-stable for a fixed seed.
    """
    gates = circ.bind(theta)
    state = sim.init_register(sim.RegisterLayout(circ.n_qubits))
    state = sim.run_circuit(state, gates)
    resolve(counter).add(1)
    if shots is None:
        return sim.exact_expectation(state, obs)
    return sim.sampled_expectation(state, obs, shots, seed)
