"""Independent brute-force oracles used only by the test suite.

Everything here is built column-by-column with plain Python bit arithmetic
and scipy matrix exponentials, deliberately sharing no code with the
package's kernel or expectation paths.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import expm

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)


def single_qubit_matrix(kind: str, angle: float = 0.0) -> np.ndarray:
    if kind == "h":
        return _H2
    if kind == "z":
        return _PAULI["Z"]
    if kind in ("rx", "ry", "rz"):
        return expm(-0.5j * angle * _PAULI[kind[1].upper()])
    raise ValueError(kind)


def _bit(i: int, q: int, n: int) -> int:
    return (i >> (n - 1 - q)) & 1


def _condition_holds(i: int, condition, n: int) -> bool:
    if condition is None:
        return True
    qubits, value = condition
    nq = len(qubits)
    for k, q in enumerate(qubits):
        if _bit(i, q, n) != ((value >> (nq - 1 - k)) & 1):
            return False
    return True


def dense_gate(g, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix of one GateOp, built column-wise."""
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    if g.kind == "cnot":
        control, target = g.targets
        tstride = 1 << (n - 1 - target)
        for i in range(dim):
            if _condition_holds(i, g.condition, n) and _bit(i, control, n):
                mat[i ^ tstride, i] = 1.0
            else:
                mat[i, i] = 1.0
        return mat
    u = single_qubit_matrix(g.kind, g.angle)
    t = g.targets[0]
    tstride = 1 << (n - 1 - t)
    for i in range(dim):
        if not _condition_holds(i, g.condition, n):
            mat[i, i] = 1.0
            continue
        col = _bit(i, t, n)
        i0 = i & ~tstride
        mat[i0, i] += u[0, col]
        mat[i0 | tstride, i] += u[1, col]
    return mat


def dense_circuit(gates, n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=complex)
    for g in gates:
        u = dense_gate(g, n) @ u
    return u


def dense_observable(obs, layout) -> np.ndarray:
    """Kron build in register order: ancilla block, flag, then main qubits."""
    mat = np.zeros((layout.dim, layout.dim), dtype=complex)
    for coeff, word in obs.terms:
        factor = np.eye(1, dtype=complex)
        if layout.n_anc > 0:
            if obs.anc_weights is not None:
                factor = np.kron(factor, np.diag(np.asarray(obs.anc_weights, dtype=complex)))
            else:
                factor = np.kron(factor, np.eye(1 << layout.n_anc, dtype=complex))
        if layout.has_flag:
            factor = np.kron(factor, _PAULI["Z"] if obs.flag_z else _PAULI["I"])
        for letter in word:
            factor = np.kron(factor, _PAULI[letter])
        mat += coeff * factor
    return mat


def dense_expectation(state, obs) -> float:
    h = dense_observable(obs, state.layout)
    val = np.vdot(state.amps, h @ state.amps)
    assert abs(val.imag) < 1e-9
    return float(val.real)


def dense_eval_f(circ, theta, obs) -> float:
    """Objective value via the full unitary product, never via the simulator."""
    from shadowopt.sim import RegisterLayout

    u = dense_circuit(circ.bind(theta), circ.n_qubits)
    psi = u[:, 0]
    layout = RegisterLayout(circ.n_qubits)
    h = dense_observable(obs, layout)
    val = np.vdot(psi, h @ psi)
    assert abs(val.imag) < 1e-9
    return float(val.real)


def central_difference(fn, theta, i: int, h: float = 1e-5) -> float:
    tp = np.array(theta, dtype=float)
    tm = np.array(theta, dtype=float)
    tp[i] += h
    tm[i] -= h
    return (fn(tp) - fn(tm)) / (2 * h)


def fd_gradient(fn, theta, h: float = 1e-5) -> np.ndarray:
    return np.array([central_difference(fn, theta, i, h) for i in range(len(theta))])


def fd_hessian(fn, theta, h: float = 1e-3) -> np.ndarray:
    d = len(theta)
    hess = np.zeros((d, d))
    for i in range(d):
        for j in range(i, d):
            tpp = np.array(theta, dtype=float)
            tpm = np.array(theta, dtype=float)
            tmp = np.array(theta, dtype=float)
            tmm = np.array(theta, dtype=float)
            tpp[i] += h
            tpp[j] += h
            tpm[i] += h
            tpm[j] -= h
            tmp[i] -= h
            tmp[j] += h
            tmm[i] -= h
            tmm[j] -= h
            hess[i, j] = hess[j, i] = (fn(tpp) - fn(tpm) - fn(tmp) + fn(tmm)) / (4 * h * h)
    return hess
