"""Rate fits and cost-normalized method comparison."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
import math
from typing import List, Optional, Sequence

import numpy as np

from ..trace import Trace
from .config import ExperimentConfig
from .experiment import run_experiment

AXES = ("loglog", "semilog")
NORMALIZATIONS = ("iterations", "gradient_evals")


class FitError(ValueError):
    pass


class ComparisonError(ValueError):
    pass


def _ols(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xm, ym = x.mean(), y.mean()
    dx, dy = x - xm, y - ym
    sxx = float(np.dot(dx, dx))
    if sxx == 0.0:
        raise FitError("abscissa is constant over the window")
    slope = float(np.dot(dx, dy)) / sxx
    resid = dy - slope * dx
    syy = float(np.dot(dy, dy))
    r2 = 1.0 if syy == 0.0 else 1.0 - float(np.dot(resid, resid)) / syy
    return slope, r2


def window_slice(n_records, window):
    lo, hi = window
    if not 0.0 <= lo < hi <= 1.0:
        raise FitError(f"window must satisfy 0 <= lo < hi <= 1, got {window}")
    return slice(int(round(lo * n_records)), int(round(hi * n_records)))


def estimate_rate(trace: Trace, window=(0.1, 0.6), axis="loglog"):
    """Least-squares slope and R^2 of ``log f`` against ``log t`` or against ``n``.

    ``window`` selects a fraction interval of the records.
    """
    if axis not in AXES:
        raise FitError(f"axis must be one of {AXES}, got {axis!r}")
    recs = trace.records[window_slice(len(trace), window)]
    if len(recs) < 3:
        raise FitError(f"need at least 3 records in the window, got {len(recs)}")
    for rec in recs:
        if not (math.isfinite(rec.f) and rec.f > 0):
            raise FitError(f"record n={rec.n} has f={rec.f!r}; a log fit needs positive finite values")
    logf = np.log([rec.f for rec in recs])
    if axis == "loglog":
        x = np.log([rec.t for rec in recs])
    else:
        x = np.array([rec.n for rec in recs], dtype=float)
    return _ols(x, logf)


def first_attainment(trace: Trace, level):
    """``(n, grad_evals)`` of the first record with ``f <= level``, or ``None``."""
    for rec in trace.records:
        if rec.diverged:
            return None
        if rec.f <= level:
            return rec.n, rec.grad_evals
    return None


def relative_levels(f0, levels_per_decade=4, decades=2.0):
    """Log-spaced targets ``f0 * 10**(-k / levels_per_decade)``, ``k = 1..``, down to ``f0 * 10**-decades``."""
    count = int(round(levels_per_decade * decades))
    return [f0 * 10.0 ** (-k / levels_per_decade) for k in range(1, count + 1)]


@dataclass
class Comparison:
    """First-attainment table: ``iterations[i][j]`` for level ``i`` and method ``j``."""

    labels: List[str]
    levels: List[float]
    iterations: List[List[Optional[int]]]
    grad_evals: List[List[Optional[int]]]
    normalize: str = "gradient_evals"
    traces: Optional[List[Trace]] = None

    @property
    def cost(self):
        return self.grad_evals if self.normalize == "gradient_evals" else self.iterations

    def cost_ratio(self, numerator: int, denominator: int):
        """Per-level ``cost[num] / cost[den]``; ``None`` where either is unreached."""
        out = []
        for row in self.cost:
            a, b = row[numerator], row[denominator]
            out.append(None if a is None or b is None or b == 0 else a / b)
        return out

    def rows(self):
        header = ["level"]
        for lab in self.labels:
            header += [f"{lab}:iterations", f"{lab}:grad_evals"]
        body = []
        for i, lv in enumerate(self.levels):
            row = [repr(lv)]
            for j in range(len(self.labels)):
                for v in (self.iterations[i][j], self.grad_evals[i][j]):
                    row.append("unreached" if v is None else str(v))
            body.append(row)
        return header, body

    def format(self):
        header, body = self.rows()
        widths = [max(len(h), *(len(r[k]) for r in body)) if body else len(h)
                  for k, h in enumerate(header)]
        lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
        lines += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in body]
        return "\n".join(lines)


def _labels(configs):
    seen = {}
    labels = []
    for c in configs:
        seen[c.method] = seen.get(c.method, 0) + 1
        labels.append(c.method if seen[c.method] == 1 else f"{c.method}#{seen[c.method]}")
    return labels


def compare_traces(traces: Sequence[Trace], labels, normalize="gradient_evals", levels=None,
                   levels_per_decade=4, decades=2.0) -> Comparison:
    if normalize not in NORMALIZATIONS:
        raise ComparisonError(f"normalize must be one of {NORMALIZATIONS}")
    if levels is None:
        levels = relative_levels(traces[0].records[0].f, levels_per_decade, decades)
    iters, grads = [], []
    for lv in levels:
        hits = [first_attainment(tr, lv) for tr in traces]
        iters.append([None if h is None else h[0] for h in hits])
        grads.append([None if h is None else h[1] for h in hits])
    return Comparison(list(labels), list(levels), iters, grads, normalize, list(traces))


def compare_methods(configs: Sequence[ExperimentConfig], normalize="gradient_evals", levels=None,
                    levels_per_decade=4, decades=2.0, workers=None) -> Comparison:
    """Run every config and tabulate when each first reaches log-spaced error levels.

    Levels default to quarter-decade fractions of the first run's initial ``f``.
    Runs may execute in parallel; the table is always in config order.
    """
    configs = list(configs)
    if not configs:
        raise ComparisonError("need at least one configuration")
    ref = configs[0]
    for c in configs[1:]:
        if (c.objective, c.dim) != (ref.objective, ref.dim) or (
                c.objective == "quadratic" and c.rho != ref.rho):
            raise ComparisonError(
                f"configs must share objective and dimension: {ref.objective}/{ref.dim} vs {c.objective}/{c.dim}")
    for c in configs:
        c.validate()
    if workers and workers > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            traces = list(pool.map(run_experiment, configs))
    else:
        traces = [run_experiment(c) for c in configs]
    return compare_traces(traces, _labels(configs), normalize, levels, levels_per_decade, decades)
