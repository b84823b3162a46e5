"""Hot statevector kernels: numba-jitted loops with a pure-numpy fallback.

The backend is chosen once at import time from the ``SHADOWOPT_BACKEND``
environment variable: ``numba`` (the default whenever numba imports cleanly),
``numpy`` to force the fallback, or ``auto``. Both implementations are always
importable so they can be benchmarked against each other; only the dispatcher
`apply_2x2` obeys the flag.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("SHADOWOPT_BACKEND", "auto").lower()
if _CHOICE not in ("auto", "numba", "numpy"):
    raise ValueError(f"SHADOWOPT_BACKEND must be auto, numba or numpy, got {_CHOICE!r}")

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

if _CHOICE == "numba" and not _HAVE_NUMBA:
    raise ImportError("SHADOWOPT_BACKEND=numba but numba is not importable")

USE_NUMBA = _HAVE_NUMBA and _CHOICE != "numpy"

# Cache of np.arange(dim) per state dimension; reused by the numpy fallback
# and by the diagonal lookups in expectation evaluation.
_INDEX_CACHE: dict[int, np.ndarray] = {}


def basis_indices(dim: int) -> np.ndarray:
    """Return a cached int64 arange(dim). Callers must not mutate it."""
    idx = _INDEX_CACHE.get(dim)
    if idx is None:
        idx = np.arange(dim, dtype=np.int64)
        _INDEX_CACHE[dim] = idx
    return idx


def apply_2x2_numpy(amps, u00, u01, u10, u11, stride, cmask, cval):
    """Apply a 2x2 unitary in place to the qubit with bit value ``stride``.

    Only basis states whose bits under ``cmask`` equal ``cval`` are touched;
    the target bit must not be part of ``cmask``.
    """
    n = amps.shape[0]
    if cmask == 0:
        view = amps.reshape(n // (2 * stride), 2, stride)
        a0 = view[:, 0, :].copy()
        view[:, 0, :] = u00 * a0 + u01 * view[:, 1, :]
        view[:, 1, :] = u10 * a0 + u11 * view[:, 1, :]
        return
    idx = basis_indices(n)
    base = idx[(idx & (stride | cmask)) == cval]
    pair = base | stride
    a0 = amps[base]
    a1 = amps[pair]
    amps[base] = u00 * a0 + u01 * a1
    amps[pair] = u10 * a0 + u11 * a1


if _HAVE_NUMBA:

    @njit(cache=True)
    def apply_2x2_numba(amps, u00, u01, u10, u11, stride, cmask, cval):
        sel = stride | cmask
        for i in range(amps.shape[0]):
            if (i & sel) == cval:
                j = i | stride
                a0 = amps[i]
                a1 = amps[j]
                amps[i] = u00 * a0 + u01 * a1
                amps[j] = u10 * a0 + u11 * a1

else:  # pragma: no cover - numba is a declared dependency
    apply_2x2_numba = None


def apply_2x2(amps, u, stride, cmask=0, cval=0):
    """Dispatch a single-qubit (optionally condition-restricted) gate."""
    u00 = complex(u[0, 0])
    u01 = complex(u[0, 1])
    u10 = complex(u[1, 0])
    u11 = complex(u[1, 1])
    if USE_NUMBA:
        apply_2x2_numba(amps, u00, u01, u10, u11, stride, cmask, cval)
    else:
        apply_2x2_numpy(amps, u00, u01, u10, u11, stride, cmask, cval)
