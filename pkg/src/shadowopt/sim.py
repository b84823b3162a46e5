"""Dense statevector simulation: register layout, gates, expectation values.

Register convention (fixed so golden files stay stable): global qubit 0 is the
most significant bit of the basis index. The ancilla block occupies the most
significant qubits, then the optional flag qubit, then the main register.
Rotation gates use the half-angle convention R(theta) = exp(-i*theta*sigma/2),
the convention under which the pi/2 parameter-shift identity is exact.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ._kernels import apply_2x2, basis_indices

DEFAULT_QUBIT_CAP = 24
QUBIT_CAP_ENV = "SHADOWOPT_MAX_QUBITS"

NORM_TOL = 1e-10
HERMITICITY_TOL = 1e-10

_SQRT1_2 = 1.0 / math.sqrt(2.0)

_H = np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_S_DAG = np.array([[1, 0], [0, -1j]], dtype=np.complex128)

PAULI_1Q = {"X": _X, "Y": _Y, "Z": _Z}


class QubitCapError(ValueError):
    """Register would exceed the configured qubit cap (memory guard)."""


def qubit_cap() -> int:
    """Current qubit cap; overridable via the SHADOWOPT_MAX_QUBITS env var."""
    raw = os.environ.get(QUBIT_CAP_ENV)
    return DEFAULT_QUBIT_CAP if raw is None else int(raw)


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit register split into main, ancilla and optional flag sections."""

    n_main: int
    n_anc: int = 0
    has_flag: bool = False

    def __post_init__(self):
        if self.n_main < 1:
            raise ValueError("layout needs at least one main qubit")
        if self.n_anc < 0:
            raise ValueError("negative ancilla count")

    @property
    def total(self) -> int:
        return self.n_main + self.n_anc + (1 if self.has_flag else 0)

    @property
    def dim(self) -> int:
        return 1 << self.total

    @property
    def anc_qubits(self) -> tuple[int, ...]:
        return tuple(range(self.n_anc))

    @property
    def flag_qubit(self) -> int | None:
        return self.n_anc if self.has_flag else None

    def main_qubit(self, i: int) -> int:
        """Global index of main-register qubit i."""
        if not 0 <= i < self.n_main:
            raise ValueError(f"main qubit {i} out of range for n_main={self.n_main}")
        return self.n_anc + (1 if self.has_flag else 0) + i

    def stride(self, qubit: int) -> int:
        """Basis-index bit value of a global qubit (qubit 0 = MSB)."""
        if not 0 <= qubit < self.total:
            raise ValueError(f"qubit {qubit} out of range for {self.total}-qubit layout")
        return 1 << (self.total - 1 - qubit)


@dataclass(frozen=True)
class GateOp:
    """One gate: h / rx / ry / rz / z on one qubit, or cnot on (control, target).

    ``condition`` restricts the action to the subspace where the listed qubits
    (big-endian in tuple order) equal ``value``; condition qubits must be
    disjoint from the targets.
    """

    kind: str
    targets: tuple[int, ...]
    angle: float = 0.0
    condition: tuple[tuple[int, ...], int] | None = None

    def __post_init__(self):
        if self.kind not in ("h", "rx", "ry", "rz", "z", "cnot"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind == "cnot" else 1
        if len(self.targets) != want or len(set(self.targets)) != want:
            raise ValueError(f"{self.kind} gate needs {want} distinct target(s)")
        if self.condition is not None:
            qubits, value = self.condition
            if len(set(qubits)) != len(qubits):
                raise ValueError("duplicate condition qubits")
            if set(qubits) & set(self.targets):
                raise ValueError("condition qubits overlap gate targets")
            if not 0 <= value < (1 << len(qubits)):
                raise ValueError("condition value out of range for its qubits")


def hadamard(q: int) -> GateOp:
    return GateOp("h", (q,))


def rotation(axis: str, q: int, angle: float, condition=None) -> GateOp:
    axis = axis.lower()
    if axis not in ("x", "y", "z"):
        raise ValueError(f"rotation axis must be x, y or z, got {axis!r}")
    return GateOp("r" + axis, (q,), float(angle), condition)


def cnot(control: int, target: int) -> GateOp:
    return GateOp("cnot", (control, target))


def pauli_z(q: int) -> GateOp:
    return GateOp("z", (q,))


def rotation_matrix(axis: str, angle: float) -> np.ndarray:
    """2x2 matrix of exp(-i*angle*sigma_axis/2)."""
    c = math.cos(angle / 2.0)
    s = math.sin(angle / 2.0)
    if axis == "x":
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=np.complex128)
    if axis == "y":
        return np.array([[c, -s], [s, c]], dtype=np.complex128)
    if axis == "z":
        return np.array([[c - 1j * s, 0], [0, c + 1j * s]], dtype=np.complex128)
    raise ValueError(f"unknown axis {axis!r}")


def gate_matrix(g: GateOp) -> np.ndarray:
    """Dense unitary of the gate alone (condition excluded): 2x2, or 4x4 for cnot."""
    if g.kind == "h":
        return _H.copy()
    if g.kind == "z":
        return _Z.copy()
    if g.kind in ("rx", "ry", "rz"):
        return rotation_matrix(g.kind[1], g.angle)
    # cnot on (control, target), control = more significant of the two
    m = np.eye(4, dtype=np.complex128)
    m[2, 2] = m[3, 3] = 0
    m[2, 3] = m[3, 2] = 1
    return m


@dataclass
class StateVector:
    """Complex amplitudes over a laid-out register; unit norm throughout.

    Treated as immutable by callers: every operation returns a fresh state
    (or one it exclusively owns), so independent evaluations can run on
    separate threads without sharing mutable buffers.
    """

    amps: np.ndarray
    layout: RegisterLayout

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.amps.copy(), self.layout)


def init_register(layout: RegisterLayout) -> StateVector:
    """All-zeros computational basis state on the given layout."""
    cap = qubit_cap()
    if layout.total > cap:
        raise QubitCapError(
            f"{layout.total} qubits exceeds the cap of {cap}; "
            f"set {QUBIT_CAP_ENV} to raise it"
        )
    amps = np.zeros(layout.dim, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(amps, layout)


def set_ancilla_uniform(state: StateVector, d: int) -> StateVector:
    """Put the ancilla register into a uniform superposition over |0>..|d-1>.

    Done by direct amplitude assignment on a fresh register (gate-level
    synthesis of the non-power-of-two prep is out of scope); the main register
    and flag stay in |0..0>.
    """
    layout = state.layout
    if d < 1:
        raise ValueError("d must be >= 1")
    if d > (1 << layout.n_anc):
        raise ValueError(f"d={d} exceeds capacity of {layout.n_anc} ancilla qubits")
    if abs(state.amps[0] - 1.0) > NORM_TOL:
        raise ValueError("ancilla prep requires a fresh all-zeros register")
    amps = np.zeros_like(state.amps)
    below = layout.total - layout.n_anc  # bits below the ancilla block
    amp = 1.0 / math.sqrt(d)
    for i in range(d):
        amps[i << below] = amp
    return StateVector(amps, layout)


def _condition_bits(layout: RegisterLayout, condition) -> tuple[int, int]:
    """Translate a (qubits, value) condition into an index-space mask/value pair."""
    if condition is None:
        return 0, 0
    qubits, value = condition
    cmask = 0
    cval = 0
    nq = len(qubits)
    for k, q in enumerate(qubits):
        bit = (value >> (nq - 1 - k)) & 1
        s = layout.stride(q)
        cmask |= s
        if bit:
            cval |= s
    return cmask, cval


def _apply_inplace(amps: np.ndarray, layout: RegisterLayout, g: GateOp) -> None:
    cmask, cval = _condition_bits(layout, g.condition)
    if g.kind == "cnot":
        control, target = g.targets
        s = layout.stride(control)
        cmask |= s
        cval |= s
        u = _X
        q = target
    else:
        u = gate_matrix(g)
        q = g.targets[0]
    apply_2x2(amps, u, layout.stride(q), cmask, cval)


def apply_gate(state: StateVector, g: GateOp) -> StateVector:
    """Multiply the state by the gate's unitary (restricted to the condition subspace)."""
    out = state.copy()
    _apply_inplace(out.amps, out.layout, g)
    return out


def run_circuit(state: StateVector, gates) -> StateVector:
    """Fold apply_gate over a gate sequence, copying the input state once."""
    out = state.copy()
    for g in gates:
        _apply_inplace(out.amps, out.layout, g)
    return out


@dataclass(frozen=True)
class ObservableExpr:
    """Hermitian observable: real-weighted Pauli words on the main register,
    an optional real diagonal on the ancilla block, and an optional Pauli-Z
    factor on the flag qubit.

    Pauli words are strings over IXYZ with one letter per main qubit,
    qubit 0 first. ``anc_weights`` has one real entry per ancilla basis state.
    """

    terms: tuple[tuple[float, str], ...]
    anc_weights: tuple[float, ...] | None = None
    flag_z: bool = False

    def __post_init__(self):
        if not self.terms:
            raise ValueError("observable needs at least one term")
        width = len(self.terms[0][1])
        for _, word in self.terms:
            if len(word) != width:
                raise ValueError("all Pauli words must have equal length")
            if any(ch not in "IXYZ" for ch in word):
                raise ValueError(f"bad Pauli word {word!r}")

    @property
    def n_main(self) -> int:
        return len(self.terms[0][1])

    def norm_bound(self) -> float:
        """Upper bound on the spectral norm: sum|coeff| * max|anc weight|."""
        bound = sum(abs(c) for c, _ in self.terms)
        if self.anc_weights is not None:
            bound *= max((abs(w) for w in self.anc_weights), default=0.0)
        return bound


def pauli_obs(n_main: int, qubit: int = 0, letter: str = "Z", coeff: float = 1.0) -> ObservableExpr:
    """Single-Pauli observable on one main qubit (Z on qubit 0 by default)."""
    if letter not in "XYZ":
        raise ValueError(f"letter must be X, Y or Z, got {letter!r}")
    word = "".join(letter if i == qubit else "I" for i in range(n_main))
    return ObservableExpr(((coeff, word),))


def identity_obs(n_main: int, coeff: float = 1.0) -> ObservableExpr:
    return ObservableExpr(((coeff, "I" * n_main),))


def _check_compat(layout: RegisterLayout, obs: ObservableExpr) -> None:
    if obs.n_main != layout.n_main:
        raise ValueError(
            f"Pauli word length {obs.n_main} does not match {layout.n_main} main qubits"
        )
    if obs.anc_weights is not None:
        if layout.n_anc == 0:
            raise ValueError("observable has ancilla weights but layout has no ancillas")
        if len(obs.anc_weights) != (1 << layout.n_anc):
            raise ValueError(
                f"anc_weights length {len(obs.anc_weights)} != 2^{layout.n_anc}"
            )
    if obs.flag_z and not layout.has_flag:
        raise ValueError("observable has a flag factor but layout has no flag qubit")


def _diagonal_factor(layout: RegisterLayout, obs: ObservableExpr) -> np.ndarray | None:
    """Real diagonal over basis states from anc_weights and the flag Z, if any."""
    if obs.anc_weights is None and not obs.flag_z:
        return None
    idx = basis_indices(layout.dim)
    diag = np.ones(layout.dim)
    if obs.anc_weights is not None:
        shift = layout.total - layout.n_anc
        diag = np.asarray(obs.anc_weights, dtype=np.float64)[idx >> shift]
    if obs.flag_z:
        fbit = (idx >> (layout.total - 1 - layout.flag_qubit)) & 1
        diag = diag * (1.0 - 2.0 * fbit)
    return diag


def exact_expectation(state: StateVector, obs: ObservableExpr) -> float:
    """<state|obs|state>, asserting the imaginary residue is negligible."""
    layout = state.layout
    _check_compat(layout, obs)
    diag = _diagonal_factor(layout, obs)
    value = 0.0 + 0.0j
    for coeff, word in obs.terms:
        phi = state.amps.copy()
        for i, letter in enumerate(word):
            if letter != "I":
                apply_2x2(phi, PAULI_1Q[letter], layout.stride(layout.main_qubit(i)))
        if diag is not None:
            phi *= diag
        value += coeff * np.vdot(state.amps, phi)
    if abs(value.imag) > HERMITICITY_TOL:
        raise ValueError(f"non-Hermitian expectation residue {value.imag:g}")
    return float(value.real)


def sampled_expectation(state: StateVector, obs: ObservableExpr, shots: int, rng_seed) -> float:
    """Estimate <obs> from finitely many measurement draws.

    Each Pauli word is rotated into the computational basis (X via H, Y via
    S-dagger then H), ``shots`` basis states are drawn from the resulting
    distribution, and per-draw eigenvalues (Pauli sign product, ancilla weight,
    flag sign) are averaged. Nothing collapses: every shot is an independent
    draw from the fixed final distribution, exact for terminal measurement.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    layout = state.layout
    _check_compat(layout, obs)
    rng = np.random.default_rng(rng_seed)
    idx = basis_indices(layout.dim)

    anc_arr = None
    if obs.anc_weights is not None:
        anc_arr = np.asarray(obs.anc_weights, dtype=np.float64)
    total = 0.0
    for coeff, word in obs.terms:
        rotated = state.amps.copy()
        measured_strides = []
        for i, letter in enumerate(word):
            if letter == "I":
                continue
            stride = layout.stride(layout.main_qubit(i))
            measured_strides.append(stride)
            if letter == "X":
                apply_2x2(rotated, _H, stride)
            elif letter == "Y":
                apply_2x2(rotated, _S_DAG, stride)
                apply_2x2(rotated, _H, stride)
        probs = np.abs(rotated) ** 2
        probs /= probs.sum()
        cdf = np.cumsum(probs)
        draws = idx[np.searchsorted(cdf, rng.random(shots), side="right").clip(max=layout.dim - 1)]
        eig = np.ones(shots)
        for stride in measured_strides:
            eig *= 1.0 - 2.0 * ((draws & stride) > 0)
        if anc_arr is not None:
            eig *= anc_arr[draws >> (layout.total - layout.n_anc)]
        if obs.flag_z:
            fstride = layout.stride(layout.flag_qubit)
            eig *= 1.0 - 2.0 * ((draws & fstride) > 0)
        total += coeff * eig.mean()
    return float(total)
