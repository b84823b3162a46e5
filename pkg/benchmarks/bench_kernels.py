#!/usr/bin/env python3
"""Kernel backend benchmark: numba-jitted loops vs the pure-numpy fallback.

Two workloads:
  1) raw gate kernel: a fixed sequence of conditioned/unconditioned 2x2
     applications on a dense statevector, at several qubit counts;
  2) end-to-end shadow estimate on the large classifier ansatz
     (StronglyEntangling(10, 4), d = 120, 17 qubits with ancillas + flag).

Both implementations are always importable; the dispatcher flag is flipped
in-process for the end-to-end comparison, so one run covers both backends.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import shadowopt._kernels as kernels
from shadowopt.circuits import build_strongly_entangling
from shadowopt.ipc import estimate_shadow
from shadowopt.sim import pauli_obs


def _gate_sequence(rng, n_qubits, n_gates=100):
    """(u, stride, cmask, cval) tuples exercising both kernel paths."""
    seq = []
    for _ in range(n_gates):
        m = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        u, _ = np.linalg.qr(m)
        target = int(rng.integers(0, n_qubits))
        stride = 1 << target
        if rng.integers(0, 2) and n_qubits > 1:
            control = int(rng.choice([q for q in range(n_qubits) if q != target]))
            cmask = 1 << control
            cval = cmask if rng.integers(0, 2) else 0
        else:
            cmask = cval = 0
        seq.append(
            (
                complex(u[0, 0]),
                complex(u[0, 1]),
                complex(u[1, 0]),
                complex(u[1, 1]),
                stride,
                cmask,
                cval,
            )
        )
    return seq


def _time_gates(fn, amps, seq, repeats):
    best = np.inf
    for _ in range(repeats):
        work = amps.copy()
        started = time.perf_counter()
        for args in seq:
            fn(work, *args)
        best = min(best, time.perf_counter() - started)
    return best / len(seq)


def bench_raw(repeats):
    rng = np.random.default_rng(0)
    print(f"{'raw kernel':<28}{'numba ms/gate':>14}{'numpy ms/gate':>14}{'speedup':>9}")
    for n_qubits in (10, 14, 18):
        dim = 1 << n_qubits
        amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
        amps = (amps / np.linalg.norm(amps)).astype(np.complex128)
        seq = _gate_sequence(rng, n_qubits)
        kernels.apply_2x2_numba(amps.copy(), *seq[0])  # compile outside timing
        t_numba = _time_gates(kernels.apply_2x2_numba, amps, seq, repeats)
        t_numpy = _time_gates(kernels.apply_2x2_numpy, amps, seq, repeats)
        print(
            f"{n_qubits:>2} qubits ({dim:>7} amps)    "
            f"{t_numba * 1e3:>14.4f}{t_numpy * 1e3:>14.4f}"
            f"{t_numpy / t_numba:>8.2f}x"
        )


def bench_shadow(repeats):
    circ = build_strongly_entangling(10, 4)
    obs = pauli_obs(10)
    rng = np.random.default_rng(1)
    theta = rng.uniform(-np.pi, np.pi, circ.d)
    v = rng.standard_normal(circ.d)

    def run_once():
        return estimate_shadow(circ, theta, v, obs).value

    results = {}
    saved = kernels.USE_NUMBA
    try:
        for flag, label in ((True, "numba"), (False, "numpy")):
            if flag and not kernels._HAVE_NUMBA:
                continue
            kernels.USE_NUMBA = flag
            run_once()  # warm caches / jit
            best = min(
                _timed(run_once) for _ in range(repeats)
            )
            results[label] = best
    finally:
        kernels.USE_NUMBA = saved

    print()
    print(f"{'shadow estimate (d=120)':<28}{'seconds/call':>14}")
    for label, secs in results.items():
        print(f"{label:<28}{secs:>14.3f}")
    if len(results) == 2:
        print(f"{'speedup':<28}{results['numpy'] / results['numba']:>13.2f}x")


def _timed(fn):
    started = time.perf_counter()
    fn()
    return time.perf_counter() - started


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=3, help="timing repeats")
    args = parser.parse_args()
    print(f"dispatcher backend: {'numba' if kernels.USE_NUMBA else 'numpy'}")
    print()
    bench_raw(args.repeats)
    bench_shadow(args.repeats)


if __name__ == "__main__":
    main()
