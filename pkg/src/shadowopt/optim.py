"""Optimizers over circuit objectives and the step-size/iteration calculators.

Stochastic shadow descent draws one Gaussian direction per iteration, reads a
single directional derivative through an inner-product circuit (two executions,
or one when fused), and takes a rank-1 step. Baselines: exact-shift gradient
descent (2d executions per step), Gaussian forward differences, and
simultaneous perturbation. All steps accept either a single Problem or a batch
of Problems sharing the parameter vector; the objective is then the batch mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import ParamCircuit, eval_f
from .counting import DISCARD, ExecutionCounter
from .deriv import central_difference_rademacher, forward_difference, psr_gradient
from .ipc import estimate_shadow, estimate_shadow_fused
from .sim import ObservableExpr

OPTIMIZERS = ("ssd", "ssd-fused", "sgd", "rsgf", "spsa")
SSD_MODES = ("two-call", "fused")


@dataclass(frozen=True)
class Problem:
    """An affine view of a circuit expectation: loss(theta) = offset + scale * <H>.

    The margin loss of a labeled example is offset=1/2, scale=-y/2; a bare
    expectation is offset=0, scale=1. Derivative estimates of <H> transfer to
    the loss by multiplying with ``scale``.
    """

    circuit: ParamCircuit
    obs: ObservableExpr
    offset: float = 0.0
    scale: float = 1.0

    @property
    def d(self) -> int:
        return self.circuit.d

    def loss(
        self,
        theta,
        shots: int | None = None,
        seed=None,
        counter: ExecutionCounter | None = None,
    ) -> float:
        return self.offset + self.scale * eval_f(
            self.circuit, theta, self.obs, shots, seed, counter
        )


def _as_batch(problem) -> tuple[Problem, ...]:
    batch = (problem,) if isinstance(problem, Problem) else tuple(problem)
    if not batch:
        raise ValueError("empty problem batch")
    d = batch[0].d
    if any(p.d != d for p in batch):
        raise ValueError("all problems in a batch must share the parameter count")
    return batch


def mean_loss(
    problem,
    theta,
    shots: int | None = None,
    seed=None,
    counter: ExecutionCounter | None = None,
) -> float:
    batch = _as_batch(problem)
    seeds = _sub_seeds(np.random.default_rng(seed), shots, len(batch))
    return sum(
        p.loss(theta, shots, s, counter) for p, s in zip(batch, seeds)
    ) / len(batch)


def _sub_seeds(rng: np.random.Generator, shots: int | None, n: int):
    if shots is None:
        return [None] * n
    return list(rng.integers(0, 2**63, size=n))


# ---------------------------------------------------------------------------
# Step schedules


@dataclass(frozen=True)
class ConstantStep:
    """Fixed learning rate, with an optional fixed perturbation scale."""

    alpha: float
    c: float | None = None

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.c is not None and self.c <= 0:
            raise ValueError("perturbation scale must be positive")

    def lr(self, t: int) -> float:
        return self.alpha

    def perturbation(self, t: int) -> float:
        if self.c is None:
            raise ValueError("schedule has no perturbation scale configured")
        return self.c


@dataclass(frozen=True)
class SpsaGains:
    """Decaying gains a_t = a/(t+1+A)^alpha_exp, c_t = c/(t+1)^gamma_exp."""

    a: float
    A: float
    c: float
    alpha_exp: float = 0.602
    gamma_exp: float = 0.101

    def __post_init__(self):
        if self.a <= 0 or self.c <= 0:
            raise ValueError("gains a and c must be positive")
        if self.A < 0:
            raise ValueError("stability constant A must be nonnegative")
        for name in ("alpha_exp", "gamma_exp"):
            e = getattr(self, name)
            if not 0 < e <= 1:
                raise ValueError(f"{name} must lie in (0, 1]")

    def lr(self, t: int) -> float:
        return self.a / (t + 1 + self.A) ** self.alpha_exp

    def perturbation(self, t: int) -> float:
        return self.c / (t + 1) ** self.gamma_exp


def spsa_gains_for(lr: float, iters: int, c: float = 0.1) -> SpsaGains:
    """Standard-practice gains calibrated so the first step size is ``lr``."""
    if iters < 1:
        raise ValueError("iteration budget must be >= 1")
    A = 0.1 * iters
    return SpsaGains(a=lr * (1.0 + A) ** 0.602, A=A, c=c)


# ---------------------------------------------------------------------------
# Theorem 1 calculators


@dataclass(frozen=True)
class TheoremBudget:
    """Constants feeding the fixed-step convergence bound: smoothness L,
    directional-estimate variance bound eta2, target eps, and an upper bound
    on f(theta0) - f*."""

    L: float
    eta2: float
    eps: float
    f0_gap: float

    def __post_init__(self):
        if self.L <= 0:
            raise ValueError("L must be positive")
        if self.eta2 < 0:
            raise ValueError("eta2 must be nonnegative")
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.f0_gap <= 0:
            raise ValueError("f0_gap must be positive")


def recommended_alpha(budget: TheoremBudget, d: int) -> float:
    """alpha <= min{1/(L(d+2)), eps^2/(2 L d eta2)}; the variance term drops
    out when eta2 = 0."""
    if d < 1:
        raise ValueError("d must be >= 1")
    curvature = 1.0 / (budget.L * (d + 2))
    if budget.eta2 == 0.0:
        return curvature
    return min(curvature, budget.eps**2 / (2.0 * budget.L * d * budget.eta2))


def required_iterations(budget: TheoremBudget, d: int) -> int:
    """T >= (4 (f(theta0)-f*) / eps^2) * max{L(d+2), 2 L d eta2 / eps^2}."""
    if d < 1:
        raise ValueError("d must be >= 1")
    inner = max(
        budget.L * (d + 2), 2.0 * budget.L * d * budget.eta2 / budget.eps**2
    )
    return math.ceil(4.0 * budget.f0_gap / budget.eps**2 * inner)


def smoothness_bound(d: int, h_norm: float) -> float:
    """L <= d * ||H||: each parameter enters through a unit-frequency rotation,
    so every second derivative is bounded by ||H|| entrywise."""
    if h_norm < 0:
        raise ValueError("observable norm must be nonnegative")
    if d < 1:
        raise ValueError("d must be >= 1")
    return d * h_norm


# ---------------------------------------------------------------------------
# Optimizer state and steps


@dataclass
class OptimizerState:
    """Mutable per-run state; steps update it in place and return it."""

    theta: np.ndarray
    schedule: object
    rng: np.random.Generator
    t: int = 0
    executions: int = 0

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=np.float64).copy()


def init_state(theta0, seed, schedule) -> OptimizerState:
    return OptimizerState(theta0, schedule, np.random.default_rng(seed))


def ssd_step(
    state: OptimizerState,
    problem,
    mode: str = "two-call",
    shots: int | None = None,
    counter: ExecutionCounter | None = None,
) -> OptimizerState:
    """One shadow-descent iteration: draw v ~ N(0, I), read D_v through the
    inner-product circuit, step theta -= alpha_t * D_v * v."""
    if mode not in SSD_MODES:
        raise ValueError(f"mode must be one of {SSD_MODES}, got {mode!r}")
    batch = _as_batch(problem)
    alpha = state.schedule.lr(state.t)
    v = state.rng.standard_normal(batch[0].d)
    seeds = _sub_seeds(state.rng, shots, len(batch))
    estimator = estimate_shadow if mode == "two-call" else estimate_shadow_fused
    d_hat = 0.0
    for prob, sub in zip(batch, seeds):
        est = estimator(prob.circuit, state.theta, v, prob.obs, shots, sub, counter)
        d_hat += prob.scale * est.value
        state.executions += est.executions_used
    d_hat /= len(batch)
    state.theta -= alpha * d_hat * v
    state.t += 1
    return state


def sgd_step(
    state: OptimizerState,
    problem,
    shots: int | None = None,
    counter: ExecutionCounter | None = None,
) -> OptimizerState:
    """Full exact-shift gradient step; 2d executions per batch element."""
    batch = _as_batch(problem)
    alpha = state.schedule.lr(state.t)
    seeds = _sub_seeds(state.rng, shots, len(batch))
    grad = np.zeros(batch[0].d)
    for prob, sub in zip(batch, seeds):
        g = psr_gradient(prob.circuit, state.theta, prob.obs, shots, sub, counter)
        grad += prob.scale * g.values
        state.executions += g.executions_used
    grad /= len(batch)
    state.theta -= alpha * grad
    state.t += 1
    return state


def rsgf_step(
    state: OptimizerState,
    problem,
    mu: float,
    shots: int | None = None,
    counter: ExecutionCounter | None = None,
) -> OptimizerState:
    """Gaussian forward-difference step: g = (f(theta + mu v) - f(theta))/mu
    along one shared direction; theta -= alpha_t * g * v."""
    if mu <= 0:
        raise ValueError("mu must be positive")
    batch = _as_batch(problem)
    alpha = state.schedule.lr(state.t)
    v = state.rng.standard_normal(batch[0].d)
    seeds = _sub_seeds(state.rng, shots, len(batch))
    g_hat = 0.0
    for prob, sub in zip(batch, seeds):
        g = forward_difference(
            prob.circuit, state.theta, v, prob.obs, mu, shots, sub, counter
        )
        g_hat += prob.scale * g
        state.executions += 2
    g_hat /= len(batch)
    state.theta -= alpha * g_hat * v
    state.t += 1
    return state


def spsa_step(
    state: OptimizerState,
    problem,
    shots: int | None = None,
    counter: ExecutionCounter | None = None,
) -> OptimizerState:
    """Simultaneous-perturbation step with one shared Rademacher draw."""
    batch = _as_batch(problem)
    a_t = state.schedule.lr(state.t)
    c_t = state.schedule.perturbation(state.t)
    delta = state.rng.integers(0, 2, size=batch[0].d) * 2.0 - 1.0
    seeds = _sub_seeds(state.rng, shots, len(batch))
    grad = np.zeros(batch[0].d)
    for prob, sub in zip(batch, seeds):
        g = central_difference_rademacher(
            prob.circuit, state.theta, delta, prob.obs, c_t, shots, sub, counter
        )
        grad += prob.scale * g
        state.executions += 2
    grad /= len(batch)
    state.theta -= a_t * grad
    state.t += 1
    return state


# ---------------------------------------------------------------------------
# Run loop


@dataclass(frozen=True)
class OptimizerConfig:
    """Everything needed to reproduce a run from scratch."""

    optimizer: str
    theta0: tuple[float, ...]
    schedule: object
    iters: int
    seed: int = 0
    shots: int | None = None
    mu: float | None = None
    grad_tol: float | None = None
    record_grad: bool = False

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.iters < 1:
            raise ValueError("iteration count must be >= 1")
        if self.optimizer == "rsgf":
            if self.mu is None or self.mu <= 0:
                raise ValueError("rsgf requires a positive mu")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1 or None for exact mode")
        object.__setattr__(
            self, "theta0", tuple(float(x) for x in self.theta0)
        )


@dataclass(frozen=True)
class RunRecord:
    """Telemetry at iterate t; loss and grad_norm_sq are exact-mode
    instrumentation and never enter the execution ledger."""

    t: int
    loss: float
    executions: int
    theta_norm: float
    grad_norm_sq: float | None = None


def _instrument(batch, theta, record_grad: bool):
    loss = mean_loss(batch, theta, counter=DISCARD)
    gns = None
    if record_grad:
        grad = np.zeros(batch[0].d)
        for prob in batch:
            g = psr_gradient(prob.circuit, theta, prob.obs, counter=DISCARD)
            grad += prob.scale * g.values
        grad /= len(batch)
        gns = float(grad @ grad)
    return loss, gns


def run_optimizer(config: OptimizerConfig, problem) -> list[RunRecord]:
    """Drive one optimizer for config.iters steps, logging a record at t = 0
    and after every step. Early stop when the instrumented squared gradient
    norm falls below grad_tol (requires record_grad)."""
    batch = _as_batch(problem)
    if len(config.theta0) != batch[0].d:
        raise ValueError(
            f"theta0 has {len(config.theta0)} entries, problem has d={batch[0].d}"
        )
    state = init_state(config.theta0, config.seed, config.schedule)
    counter = ExecutionCounter()
    record_grad = config.record_grad or config.grad_tol is not None

    def snapshot() -> RunRecord:
        loss, gns = _instrument(batch, state.theta, record_grad)
        return RunRecord(
            state.t, loss, state.executions, float(np.linalg.norm(state.theta)), gns
        )

    records = [snapshot()]
    for _ in range(config.iters):
        if (
            config.grad_tol is not None
            and records[-1].grad_norm_sq is not None
            and records[-1].grad_norm_sq <= config.grad_tol
        ):
            break
        if config.optimizer in ("ssd", "ssd-fused"):
            mode = "two-call" if config.optimizer == "ssd" else "fused"
            ssd_step(state, batch, mode, config.shots, counter)
        elif config.optimizer == "sgd":
            sgd_step(state, batch, config.shots, counter)
        elif config.optimizer == "rsgf":
            rsgf_step(state, batch, config.mu, config.shots, counter)
        else:
            spsa_step(state, batch, config.shots, counter)
        records.append(snapshot())
    return records
