"""Self-check suites behind `shadowopt verify`.

Five suites re-run the load-bearing identities on freshly sampled cases with
fixed seeds: the exact-shift rule against central finite differences, the
inner-product-circuit readings against brute-force shifted sums, the fused
single-execution identity, the unbiasedness of the directional estimator, and
the execution ledger ratios. Exit code 0 iff every suite passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuits import build_basic_entangler, build_strongly_entangling, eval_f
from .deriv import psr_gradient, psr_partial
from .ipc import estimate_shadow, estimate_shadow_fused
from .optim import ConstantStep, OptimizerConfig, Problem, run_optimizer
from .sim import pauli_obs

SHIFT = math.pi / 2.0


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str


def _random_case(rng, max_qubits=4, max_layers=2):
    n = int(rng.integers(2, max_qubits + 1))
    layers = int(rng.integers(1, max_layers + 1))
    if rng.integers(2) == 0:
        circ = build_basic_entangler(n, layers)
    else:
        circ = build_strongly_entangling(n, max(1, layers - 1))
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    return circ, pauli_obs(n), theta


def suite_psr(cases: int = 20, tol: float = 1e-6) -> SuiteResult:
    rng = np.random.default_rng(101)
    h = 1e-5
    worst = 0.0
    for _ in range(cases):
        circ, obs, theta = _random_case(rng)
        i = int(rng.integers(circ.d))
        shifted = psr_partial(circ, theta, obs, i)
        tp, tm = theta.copy(), theta.copy()
        tp[i] += h
        tm[i] -= h
        fd = (eval_f(circ, tp, obs) - eval_f(circ, tm, obs)) / (2 * h)
        worst = max(worst, abs(shifted - fd))
    return SuiteResult("psr", worst <= tol, f"max |shift - fd| = {worst:.3g}")


def suite_ipc_oracle(cases: int = 20, tol: float = 1e-9) -> SuiteResult:
    rng = np.random.default_rng(202)
    worst = 0.0
    for _ in range(cases):
        circ, obs, theta = _random_case(rng)
        v = rng.standard_normal(circ.d)
        est = estimate_shadow(circ, theta, v, obs)
        grad = psr_gradient(circ, theta, obs)
        worst = max(worst, abs(est.value - float(grad.values @ v)))
        s = int(rng.choice((1, -1)))
        brute = 0.0
        for i in range(circ.d):
            tp = theta.copy()
            tp[i] += s * SHIFT
            brute += eval_f(circ, tp, obs) * v[i]
        brute /= circ.d
        half = est.half_values[0] if s == 1 else est.half_values[1]
        worst = max(worst, abs(half - brute))
    return SuiteResult("ipc-oracle", worst <= tol, f"max deviation = {worst:.3g}")


def suite_fused(cases: int = 20, tol: float = 1e-9) -> SuiteResult:
    rng = np.random.default_rng(303)
    worst = 0.0
    counts_ok = True
    for _ in range(cases):
        circ, obs, theta = _random_case(rng)
        v = rng.standard_normal(circ.d)
        two = estimate_shadow(circ, theta, v, obs)
        one = estimate_shadow_fused(circ, theta, v, obs)
        worst = max(worst, abs(two.value - one.value))
        counts_ok = counts_ok and two.executions_used == 2 and one.executions_used == 1
    passed = worst <= tol and counts_ok
    return SuiteResult(
        "fused", passed, f"max |fused - two-call| = {worst:.3g}, counts ok = {counts_ok}"
    )


def suite_prop1(draws: int = 4000) -> SuiteResult:
    rng = np.random.default_rng(404)
    circ = build_basic_entangler(4, 1)
    obs = pauli_obs(4)
    theta = rng.uniform(-math.pi, math.pi, circ.d)
    grad = psr_gradient(circ, theta, obs).values
    samples = np.empty((draws, circ.d))
    for k in range(draws):
        v = rng.standard_normal(circ.d)
        samples[k] = estimate_shadow(circ, theta, v, obs).value * v
    mean = samples.mean(axis=0)
    se = samples.std(axis=0, ddof=1) / math.sqrt(draws)
    z = np.abs(mean - grad) / se
    return SuiteResult(
        "prop1", bool(np.all(z <= 4.0)), f"max |z| = {float(z.max()):.2f} (4 SE allowed)"
    )


def suite_counting() -> SuiteResult:
    circ = build_basic_entangler(4, 2)  # d = 8
    prob = Problem(circ, pauli_obs(4))
    theta0 = tuple(np.random.default_rng(7).uniform(-1, 1, circ.d))
    iters = 5
    counts = {}
    for name in ("sgd", "ssd", "ssd-fused"):
        cfg = OptimizerConfig(name, theta0, ConstantStep(0.05), iters, seed=1)
        counts[name] = run_optimizer(cfg, prob)[-1].executions
    expected = {
        "sgd": 2 * circ.d * iters,
        "ssd": 2 * iters,
        "ssd-fused": iters,
    }
    passed = counts == expected
    return SuiteResult("counting", passed, f"ledger = {counts}, expected = {expected}")


SUITES = (suite_psr, suite_ipc_oracle, suite_fused, suite_prop1, suite_counting)


def run_all() -> list[SuiteResult]:
    return [suite() for suite in SUITES]


def cli_verify(write=print) -> int:
    results = run_all()
    width = max(len(r.name) for r in results)
    for r in results:
        status = "pass" if r.passed else "FAIL"
        write(f"{r.name:<{width}}  {status}  {r.detail}")
    failed = [r for r in results if not r.passed]
    write(
        f"{len(results) - len(failed)}/{len(results)} suites passed"
        + (f"; failing: {', '.join(r.name for r in failed)}" if failed else "")
    )
    return 1 if failed else 0
