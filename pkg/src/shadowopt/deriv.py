"""Classical derivative estimators over circuit evaluations.

Contains the exact pi/2-shift rule (per coordinate and full gradient), the
2d-execution reference path for directional derivatives, and the two
perturbative zeroth-order baselines: Gaussian forward differences and
Rademacher central differences. The two evaluations inside any difference use
independent shot draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import ParamCircuit, eval_f
from .counting import ExecutionCounter
from .sim import ObservableExpr

SHIFT = math.pi / 2.0


@dataclass(frozen=True)
class GradientVector:
    values: np.ndarray
    executions_used: int


@dataclass(frozen=True)
class DirectionalSample:
    """A directional-derivative estimate along v; mu is 0 on exact-shift paths."""

    v: np.ndarray
    value: float
    mu: float
    executions_used: int


def _shot_seeds(shots: int | None, seed, n: int):
    if shots is None:
        return [None] * n
    rng = np.random.default_rng(seed)
    return list(rng.integers(0, 2**63, size=n))


def psr_partial(
    circ: ParamCircuit,
    theta,
    obs: ObservableExpr,
    i: int,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> float:
    """Partial derivative for coordinate i (0-based) from two shifted evaluations."""
    theta = np.asarray(theta, dtype=np.float64)
    if not 0 <= i < circ.d:
        raise ValueError(f"coordinate {i} out of range for d={circ.d}")
    s1, s2 = _shot_seeds(shots, seed, 2)
    tp = theta.copy()
    tm = theta.copy()
    tp[i] += SHIFT
    tm[i] -= SHIFT
    fp = eval_f(circ, tp, obs, shots, s1, counter)
    fm = eval_f(circ, tm, obs, shots, s2, counter)
    return 0.5 * (fp - fm)


def psr_gradient(
    circ: ParamCircuit,
    theta,
    obs: ObservableExpr,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> GradientVector:
    """All d partials; exactly 2d circuit executions."""
    theta = np.asarray(theta, dtype=np.float64)
    seeds = _shot_seeds(shots, seed, circ.d)
    values = np.array(
        [psr_partial(circ, theta, obs, i, shots, seeds[i], counter) for i in range(circ.d)]
    )
    return GradientVector(values, 2 * circ.d)


def directional_oracle(
    circ: ParamCircuit,
    theta,
    v,
    obs: ObservableExpr,
    counter: ExecutionCounter | None = None,
) -> DirectionalSample:
    """Reference directional derivative <grad f, v> via explicit 2d-term summation.

    Evaluates each shifted objective exactly and combines the positive and
    negative halves as (d/2)(D+ - D-).
    """
    theta = np.asarray(theta, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (circ.d,):
        raise ValueError(f"direction length {v.shape} does not match d={circ.d}")
    d = circ.d
    d_plus = 0.0
    d_minus = 0.0
    for i in range(d):
        tp = theta.copy()
        tm = theta.copy()
        tp[i] += SHIFT
        tm[i] -= SHIFT
        d_plus += eval_f(circ, tp, obs, None, None, counter) * v[i]
        d_minus += eval_f(circ, tm, obs, None, None, counter) * v[i]
    d_plus /= d
    d_minus /= d
    return DirectionalSample(v, 0.5 * d * (d_plus - d_minus), 0.0, 2 * d)


def forward_difference(
    circ: ParamCircuit,
    theta,
    v,
    obs: ObservableExpr,
    mu: float,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> float:
    """(f(theta + mu v) - f(theta)) / mu with independent shot draws."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    s1, s2 = _shot_seeds(shots, seed, 2)
    f_shift = eval_f(circ, theta + mu * v, obs, shots, s1, counter)
    f_base = eval_f(circ, theta, obs, shots, s2, counter)
    return (f_shift - f_base) / mu


def rsgf_estimate(
    circ: ParamCircuit,
    theta,
    obs: ObservableExpr,
    mu: float,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> DirectionalSample:
    """Gaussian-direction forward difference; two executions."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(circ.d)
    sub = rng.integers(0, 2**63) if shots is not None else None
    g = forward_difference(circ, theta, v, obs, mu, shots, sub, counter)
    return DirectionalSample(v, g, mu, 2)


def central_difference_rademacher(
    circ: ParamCircuit,
    theta,
    delta,
    obs: ObservableExpr,
    c_t: float,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> np.ndarray:
    """Per-coordinate estimate (f(theta + c delta) - f(theta - c delta)) / (2 c delta_i)."""
    if c_t <= 0:
        raise ValueError("c_t must be positive")
    theta = np.asarray(theta, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    s1, s2 = _shot_seeds(shots, seed, 2)
    fp = eval_f(circ, theta + c_t * delta, obs, shots, s1, counter)
    fm = eval_f(circ, theta - c_t * delta, obs, shots, s2, counter)
    return (fp - fm) / (2.0 * c_t * delta)


def spsa_estimate(
    circ: ParamCircuit,
    theta,
    obs: ObservableExpr,
    c_t: float,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> GradientVector:
    """Simultaneous-perturbation gradient estimate; two executions for any d."""
    if c_t <= 0:
        raise ValueError("c_t must be positive")
    rng = np.random.default_rng(seed)
    delta = rng.integers(0, 2, size=circ.d) * 2.0 - 1.0
    sub = rng.integers(0, 2**63) if shots is not None else None
    values = central_difference_rademacher(circ, theta, delta, obs, c_t, shots, sub, counter)
    return GradientVector(values, 2)
