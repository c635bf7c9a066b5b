"""Per-run convergence records shared by every method."""

from dataclasses import dataclass, field
import math
from typing import NamedTuple

import numpy as np


class TraceRecord(NamedTuple):
    n: int
    t: float
    f: float
    grad_evals: int
    conserved: float
    diverged: bool


@dataclass
class Trace:
    """Ordered records of one run plus a metadata echo of its configuration."""

    records: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def append(self, n, t, f, grad_evals, conserved=math.nan, diverged=False):
        if self.records:
            last = self.records[-1]
            if n <= last.n:
                raise ValueError(f"step index must increase: {n} after {last.n}")
            if grad_evals < last.grad_evals:
                raise ValueError("gradient counts must be nondecreasing")
            if last.diverged:
                raise ValueError("cannot append to a diverged trace")
        self.records.append(TraceRecord(int(n), float(t), float(f), int(grad_evals),
                                        float(conserved), bool(diverged)))

    def __len__(self):
        return len(self.records)

    @property
    def diverged(self) -> bool:
        return bool(self.records) and self.records[-1].diverged

    @property
    def method(self) -> str:
        return self.metadata.get("method", "unknown")

    def column(self, name) -> np.ndarray:
        return np.array([getattr(rec, name) for rec in self.records])

    @property
    def n(self):
        return self.column("n")

    @property
    def t(self):
        return self.column("t")

    @property
    def f(self):
        return self.column("f")

    @property
    def grad_evals(self):
        return self.column("grad_evals")

    @property
    def conserved(self):
        return self.column("conserved")


def is_divergent(f, state_finite=True, threshold=1e10) -> bool:
    return (not state_finite) or (not math.isfinite(f)) or f > threshold
