"""Three-sequence generalized Nesterov discretization (ideal scaling, quadratic h)."""

from dataclasses import dataclass
import math

import numpy as np

from .scaling import ScalingParams
from .trace import Trace, is_divergent


@dataclass(frozen=True, eq=False)
class NesterovState:
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    n: int = 0


@dataclass(frozen=True)
class NesterovConfig:
    epsilon: float = 0.1
    params: ScalingParams = ScalingParams()
    N: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.N > 0:
            raise ValueError(f"N must be positive, got {self.N!r}")


def nesterov_init(x0) -> NesterovState:
    x0 = np.array(x0, dtype=float)
    return NesterovState(x=x0, y=x0.copy(), z=x0.copy(), n=0)


def nesterov_step(state: NesterovState, config: NesterovConfig, objective) -> NesterovState:
    """Advance all three sequences once; costs exactly two gradient evaluations.

        x' = (p/(n+1)) z + (1 - p/(n+1)) y
        y' = x' - (p eps**p / 2N) grad f(x')
        z' = z - eps**p C p (n+1)**(p-1) grad f(y')

    The ``x`` weight is an extrapolation while ``p > n + 1`` and is not clamped.
    """
    p, C = config.params.p, config.params.C
    eps_p = config.epsilon ** p
    k = state.n + 1
    w = p / k
    x = w * state.z + (1.0 - w) * state.y
    y = x - (p * eps_p / (2.0 * config.N)) * objective.gradient(x)
    z = state.z - (eps_p * C * p * k ** (p - 1.0)) * objective.gradient(y)
    return NesterovState(x=x, y=y, z=z, n=k)


def nesterov_run(x0, config: NesterovConfig, objective, steps, divergence_threshold=1e10,
                 record_every=1, t0=1.0, metadata=None) -> Trace:
    """Iterate :func:`nesterov_step`, recording ``f(x_n)`` at model time ``t0 + n eps``.

    Divergence (non-finite iterate or ``f`` above the threshold) is recorded
    and ends the run early.
    """
    steps = int(steps)
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if record_every < 1:
        raise ValueError("record_every must be >= 1")
    trace = Trace(metadata=dict(metadata or {}, method="nesterov"))
    state = nesterov_init(x0)
    eps = config.epsilon
    trace.append(0, t0, objective.value(state.x), objective.n_grad)
    for _ in range(steps):
        state = nesterov_step(state, config, objective)
        finite = bool(np.all(np.isfinite(state.x)) and np.all(np.isfinite(state.y))
                      and np.all(np.isfinite(state.z)))
        f = objective.value(state.x) if finite else math.inf
        diverged = is_divergent(f, finite, divergence_threshold)
        if diverged or state.n % record_every == 0 or state.n == steps:
            trace.append(state.n, t0 + state.n * eps, f, objective.n_grad, diverged=diverged)
        if diverged:
            break
    return trace
