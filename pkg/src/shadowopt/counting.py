"""Circuit-execution accounting.

One prepare-run-measure cycle counts as one execution regardless of shot
count. Estimators and optimizers accept an explicit counter; the module-level
default exists for interactive use. Counters are plain accumulators: parallel
sections should use private counters and merge afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class ExecutionCounter:
    count: int = 0

    def add(self, n: int = 1) -> None:
        self.count += n

    def merge(self, other: "ExecutionCounter") -> None:
        self.count += other.count

    def reset(self) -> None:
        self.count = 0


GLOBAL_COUNTER = ExecutionCounter()

# Sink for instrumentation-only evaluations (exact loss/gradient telemetry)
# that must stay out of every reported ledger.
DISCARD = ExecutionCounter()


def resolve(counter: ExecutionCounter | None) -> ExecutionCounter:
    return GLOBAL_COUNTER if counter is None else counter
