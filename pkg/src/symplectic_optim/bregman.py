"""Bregman geometry, the Bregman Lagrangian/Hamiltonian and the Legendre maps.

Momenta are written ``r`` throughout; ``p`` is always the rate exponent.
"""

from dataclasses import dataclass
import math
from typing import Callable, Optional

import numpy as np

from .scaling import ScalingParams, eval_scaling


@dataclass(frozen=True)
class BregmanGeometry:
    """A strictly convex auxiliary function ``h`` paired with its conjugate.

    ``hess_h`` is optional; it is only needed for the position-dependent
    momentum field of a non-quadratic geometry.
    """

    h: Callable
    grad_h: Callable
    h_star: Callable
    grad_h_star: Callable
    is_quadratic: bool = False
    hess_h: Optional[Callable] = None
    name: str = "custom"


def quadratic_geometry() -> BregmanGeometry:
    """``h(x) = <x, x> / 2``, self-conjugate."""
    return BregmanGeometry(
        h=lambda x: 0.5 * float(np.dot(x, x)),
        grad_h=lambda x: np.array(x, dtype=float),
        h_star=lambda r: 0.5 * float(np.dot(r, r)),
        grad_h_star=lambda r: np.array(r, dtype=float),
        is_quadratic=True,
        hess_h=lambda x: np.eye(np.size(x)),
        name="quadratic",
    )


def entropy_geometry() -> BregmanGeometry:
    """Negative entropy ``h(x) = sum x log x`` on the positive orthant.

    ``grad h = log x + 1``; conjugate ``h*(r) = sum exp(r - 1)``.
    """
    return BregmanGeometry(
        h=lambda x: float(np.sum(x * np.log(x))),
        grad_h=lambda x: np.log(x) + 1.0,
        h_star=lambda r: float(np.sum(np.exp(r - 1.0))),
        grad_h_star=lambda r: np.exp(r - 1.0),
        is_quadratic=False,
        hess_h=lambda x: np.diag(1.0 / np.asarray(x, dtype=float)),
        name="entropy",
    )


def _same_shape(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def bregman_divergence(geom: BregmanGeometry, y, x) -> float:
    """``D_h(y, x) = h(y) - h(x) - <grad h(x), y - x>``."""
    y, x = _same_shape(y, x)
    return geom.h(y) - geom.h(x) - float(np.dot(geom.grad_h(x), y - x))


def conjugate_divergence(geom: BregmanGeometry, u, s) -> float:
    """``D_{h*}(u, s) = h*(u) - h*(s) - <grad h*(s), u - s>``."""
    u, s = _same_shape(u, s)
    return geom.h_star(u) - geom.h_star(s) - float(np.dot(geom.grad_h_star(s), u - s))


def kinetic_energy(geom, x, v, t, params: ScalingParams) -> float:
    """``D_h(x + exp(-alpha) v, x)``, the Bregman kinetic energy."""
    sc = eval_scaling(params, t)
    x, v = _same_shape(x, v)
    return bregman_divergence(geom, x + math.exp(-sc.alpha) * v, x)


def lagrangian(geom, x, v, t, params: ScalingParams, objective) -> float:
    """``exp(alpha + gamma) (K(x, v, t) - exp(beta) f(x))``."""
    sc = eval_scaling(params, t)
    K = kinetic_energy(geom, x, v, t, params)
    return math.exp(sc.alpha + sc.gamma) * (K - math.exp(sc.beta) * objective.value(x))


def momentum_map(geom, x, v, t, params: ScalingParams) -> np.ndarray:
    """``r = exp(gamma) (grad h(x + exp(-alpha) v) - grad h(x))``."""
    sc = eval_scaling(params, t)
    x, v = _same_shape(x, v)
    return math.exp(sc.gamma) * (geom.grad_h(x + math.exp(-sc.alpha) * v) - geom.grad_h(x))


def velocity_map(geom, x, r, t, params: ScalingParams) -> np.ndarray:
    """Inverse of :func:`momentum_map`: ``exp(alpha) (grad h*(exp(-gamma) r + grad h(x)) - x)``."""
    sc = eval_scaling(params, t)
    x, r = _same_shape(x, r)
    u = math.exp(-sc.gamma) * r + geom.grad_h(x)
    return math.exp(sc.alpha) * (geom.grad_h_star(u) - x)


def kinetic_hamiltonian(geom, x, r, t, params: ScalingParams) -> float:
    """The kinetic part ``exp(alpha + gamma) D_{h*}(exp(-gamma) r + grad h(x), grad h(x))``."""
    sc = eval_scaling(params, t)
    x, r = _same_shape(x, r)
    s = geom.grad_h(x)
    return math.exp(sc.alpha + sc.gamma) * conjugate_divergence(geom, math.exp(-sc.gamma) * r + s, s)


def hamiltonian(geom, x, r, t, params: ScalingParams, objective) -> float:
    """Bregman Hamiltonian ``exp(alpha + gamma) (D_{h*}(...) + exp(beta) f(x))``."""
    sc = eval_scaling(params, t)
    return (kinetic_hamiltonian(geom, x, r, t, params)
            + math.exp(sc.alpha + sc.beta + sc.gamma) * objective.value(x))


def kinetic_hamiltonian_dx(geom, x, r, t, params: ScalingParams) -> np.ndarray:
    """Partial derivative of the kinetic part with respect to ``x``.

    Uses ``hess h*(grad h(x)) = inv(hess h(x))`` to collapse the chain rule to
    ``exp(alpha + gamma) (hess h(x) (grad h*(u) - x) - exp(-gamma) r)``.
    This vanishes identically for the quadratic geometry.
    """
    sc = eval_scaling(params, t)
    x, r = _same_shape(x, r)
    if geom.is_quadratic:
        return np.zeros_like(x)
    if geom.hess_h is None:
        raise ValueError(f"geometry {geom.name!r} needs hess_h for the position-dependent kinetic field")
    u = math.exp(-sc.gamma) * r + geom.grad_h(x)
    inner = np.asarray(geom.hess_h(x)) @ (geom.grad_h_star(u) - x)
    return math.exp(sc.alpha + sc.gamma) * inner - math.exp(sc.alpha) * r


def kinetic_hamiltonian_dr(geom, x, r, t, params: ScalingParams) -> np.ndarray:
    """Partial derivative of the kinetic part with respect to ``r``; equals the velocity map."""
    return velocity_map(geom, x, r, t, params)


def kinetic_hamiltonian_dt(geom, x, r, t, params: ScalingParams) -> float:
    """Explicit time derivative of the kinetic part at fixed ``(x, r)``."""
    sc = eval_scaling(params, t)
    x, r = _same_shape(x, r)
    s = geom.grad_h(x)
    u = math.exp(-sc.gamma) * r + s
    HB = math.exp(sc.alpha + sc.gamma) * conjugate_divergence(geom, u, s)
    cross = float(np.dot(geom.grad_h_star(u) - geom.grad_h_star(s), r))
    return (sc.d_alpha_dt + sc.d_gamma_dt) * HB - sc.d_gamma_dt * math.exp(sc.alpha) * cross
