"""Ideal scaling functions and the time-dependent coefficients built from them.

Everything is evaluated in log space and only exponentiated at the end, so
large ``t`` with large ``p`` does not overflow intermediate quantities.
"""

from dataclasses import dataclass
import math


class DomainError(ValueError):
    """Raised when a time argument lies outside ``t > 0``."""


@dataclass(frozen=True)
class ScalingParams:
    """Rate exponent ``p`` and rate constant ``C`` of the ideal scaling family."""

    p: float = 2.0
    C: float = 0.0625

    def __post_init__(self):
        if not (math.isfinite(self.p) and self.p > 0):
            raise ValueError(f"p must be a positive real, got {self.p!r}")
        if not (math.isfinite(self.C) and self.C > 0):
            raise ValueError(f"C must be a positive real, got {self.C!r}")


@dataclass(frozen=True)
class ScalingEval:
    alpha: float
    beta: float
    gamma: float
    d_alpha_dt: float
    d_beta_dt: float
    d_gamma_dt: float


def _check_time(t):
    if not t > 0:
        raise DomainError(f"ideal scaling is singular for t <= 0 (got t={t!r})")


def eval_scaling(params: ScalingParams, t: float) -> ScalingEval:
    """Evaluate alpha, beta, gamma and their exact time derivatives at ``t``."""
    _check_time(t)
    log_t = math.log(t)
    p = params.p
    return ScalingEval(
        alpha=math.log(p) - log_t,
        beta=p * log_t + math.log(params.C),
        gamma=p * log_t,
        d_alpha_dt=-1.0 / t,
        d_beta_dt=p / t,
        d_gamma_dt=p / t,
    )


def coeff_drift(params: ScalingParams, t: float) -> float:
    """``exp(alpha - gamma) = p / t**(p+1)``, the position-drift coefficient."""
    _check_time(t)
    p = params.p
    return math.exp(math.log(p) - (p + 1.0) * math.log(t))


def coeff_kick(params: ScalingParams, t: float) -> float:
    """``exp(alpha + beta + gamma) = C p t**(2p-1)``, the momentum-kick coefficient."""
    _check_time(t)
    p = params.p
    return math.exp(math.log(params.C) + math.log(p) + (2.0 * p - 1.0) * math.log(t))


def coeff_kinetic_energy_rate(params: ScalingParams, t: float) -> float:
    """``-(d/dt)`` of the drift coefficient halved: ``p(p+1) / (2 t**(p+2))``.

    Multiplies ``<r, r>`` in the conjugate-energy update of the kinetic part.
    """
    _check_time(t)
    p = params.p
    return 0.5 * math.exp(math.log(p) + math.log(p + 1.0) - (p + 2.0) * math.log(t))


def coeff_potential_energy_rate(params: ScalingParams, t: float) -> float:
    """``(d/dt)`` of the kick coefficient: ``C p (2p-1) t**(2p-2)``.

    Signed, since ``2p - 1`` is negative for ``p < 1/2``.
    """
    _check_time(t)
    p = params.p
    k = 2.0 * p - 1.0
    if k == 0.0:
        return 0.0
    mag = math.exp(math.log(params.C) + math.log(p) + math.log(abs(k)) + (k - 1.0) * math.log(t))
    return math.copysign(mag, k)
