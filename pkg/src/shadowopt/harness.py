"""Classifier training experiments: dataset -> encoded circuits -> metrics CSV.

Each example becomes a Problem whose loss is the margin loss
1/2 (1 - y f(x, theta)) with f the Z expectation on the first qubit of the
angle-encoded ansatz. Per iteration one batch (default size 1) drives one
optimizer step; the logged loss is the exact full-training-set epoch loss
(instrumentation, never counted as executions), so curves are comparable
across shot settings.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .circuits import AnsatzSpec, encode
from .counting import DISCARD, ExecutionCounter
from .data import Dataset, load_csv, load_iris, make_synthetic
from .optim import (
    OPTIMIZERS,
    ConstantStep,
    OptimizerState,
    Problem,
    rsgf_step,
    sgd_step,
    spsa_gains_for,
    spsa_step,
    ssd_step,
)
from .sim import pauli_obs

DATASETS = ("iris", "synthetic")
ANSATZE = ("basic", "strongly")
CSV_HEADER = "iteration,loss,executions,wall_ms,seed"


def margin_loss(f_value: float, y: int) -> float:
    """1/2 (1 - y f) in [0, 1] for f in [-1, 1]."""
    if y not in (1, -1):
        raise ValueError(f"label must be +1 or -1, got {y!r}")
    return 0.5 * (1.0 - y * f_value)


@dataclass(frozen=True)
class ExperimentConfig:
    optimizer: str
    dataset: str = "synthetic"
    ansatz: str = "basic"
    layers: int = 1
    qubits: int = 4
    lr: float = 0.1
    mu: float | None = None
    shots: int | None = None
    iters: int = 100
    seed: int = 0
    batch: int = 1
    data_seed: int = 0
    out: str | None = None
    timing: bool = False

    def __post_init__(self):
        if self.optimizer not in OPTIMIZERS:
            raise ValueError(f"optimizer must be one of {OPTIMIZERS}")
        if self.dataset not in DATASETS and not self.dataset.startswith("csv:"):
            raise ValueError(
                f"dataset must be one of {DATASETS} or csv:<path>, got {self.dataset!r}"
            )
        if self.ansatz not in ANSATZE:
            raise ValueError(f"ansatz must be one of {ANSATZE}")
        if self.layers < 1 or self.qubits < 2:
            raise ValueError("need layers >= 1 and qubits >= 2")
        if self.lr <= 0:
            raise ValueError("learning rate must be positive")
        if self.optimizer in ("rsgf", "spsa"):
            if self.mu is None or self.mu <= 0:
                raise ValueError(f"{self.optimizer} requires a positive mu")
        elif self.mu is not None:
            raise ValueError(f"mu is not used by {self.optimizer}")
        if self.shots is not None and self.shots < 1:
            raise ValueError("shots must be >= 1 or None for exact mode")
        if self.iters < 1:
            raise ValueError("iteration count must be >= 1")
        if self.batch < 1:
            raise ValueError("batch size must be >= 1")


@dataclass(frozen=True)
class MetricRow:
    iteration: int
    loss: float
    executions: int
    wall_ms: float
    seed: int


def resolve_dataset(config: ExperimentConfig) -> Dataset:
    if config.dataset == "iris":
        return load_iris()
    if config.dataset == "synthetic":
        return make_synthetic(
            n_features=config.qubits, n=100, seed=config.data_seed
        )
    return load_csv(config.dataset[len("csv:") :])


def example_problems(ansatz, obs, ds: Dataset) -> list[Problem]:
    """One margin-loss Problem per training example; loss = 1/2 - (y/2) <Z_0>."""
    return [
        Problem(encode(ansatz, x), obs, offset=0.5, scale=-0.5 * float(y))
        for x, y in zip(ds.X, ds.y)
    ]


def train_classifier(config: ExperimentConfig) -> list[MetricRow]:
    ds = resolve_dataset(config)
    if ds.n_features != config.qubits:
        raise ValueError(
            f"dataset has {ds.n_features} features but circuit has "
            f"{config.qubits} qubits"
        )
    if config.batch > ds.n_examples:
        raise ValueError("batch size exceeds the dataset")
    ansatz = AnsatzSpec(config.ansatz, config.qubits, config.layers).build()
    obs = pauli_obs(config.qubits)
    problems = example_problems(ansatz, obs, ds)

    init_seed, batch_seed, step_seed = np.random.SeedSequence(config.seed).spawn(3)
    theta0 = np.random.default_rng(init_seed).uniform(-math.pi, math.pi, ansatz.d)
    if config.optimizer == "spsa":
        schedule = spsa_gains_for(config.lr, config.iters, c=config.mu)
    else:
        schedule = ConstantStep(config.lr)
    state = OptimizerState(theta0, schedule, np.random.default_rng(step_seed))
    batch_rng = np.random.default_rng(batch_seed)
    counter = ExecutionCounter()
    started = time.perf_counter()

    def elapsed_ms() -> float:
        return (time.perf_counter() - started) * 1000.0 if config.timing else 0.0

    def epoch_loss() -> float:
        return sum(p.loss(state.theta, counter=DISCARD) for p in problems) / len(
            problems
        )

    rows = [MetricRow(0, epoch_loss(), 0, elapsed_ms(), config.seed)]
    for t in range(1, config.iters + 1):
        picks = batch_rng.choice(ds.n_examples, size=config.batch, replace=False)
        batch = [problems[i] for i in picks]
        if config.optimizer in ("ssd", "ssd-fused"):
            mode = "two-call" if config.optimizer == "ssd" else "fused"
            ssd_step(state, batch, mode, config.shots, counter)
        elif config.optimizer == "sgd":
            sgd_step(state, batch, config.shots, counter)
        elif config.optimizer == "rsgf":
            rsgf_step(state, batch, config.mu, config.shots, counter)
        else:
            spsa_step(state, batch, config.shots, counter)
        rows.append(
            MetricRow(t, epoch_loss(), counter.count, elapsed_ms(), config.seed)
        )
    if config.out is not None:
        write_metrics_csv(rows, config.out)
    return rows


def _format_value(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{value:.10g}"


def write_metrics_csv(rows, path) -> None:
    """Schema `iteration,loss,executions,wall_ms,seed`; LF endings, 10
    significant digits, byte-stable for identical rows."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            ",".join(
                _format_value(v)
                for v in (r.iteration, r.loss, r.executions, r.wall_ms, r.seed)
            )
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_metrics_csv(path) -> list[MetricRow]:
    with open(path, newline="") as fh:
        lines = [line.strip() for line in fh if line.strip()]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path}: expected header {CSV_HEADER!r}")
    rows = []
    for line in lines[1:]:
        it, loss, execs, wall, seed = line.split(",")
        rows.append(
            MetricRow(int(it), float(loss), int(execs), float(wall), int(seed))
        )
    return rows
