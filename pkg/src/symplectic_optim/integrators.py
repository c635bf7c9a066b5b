"""Leapfrog integration of the extended (autonomous) Bregman Hamiltonian system.

The extended phase space is ``(x, t, r, E)``: explicit time ``t`` is promoted
to a position, ``E`` is its conjugate energy and the effective time ``tau``
parameterizes trajectories. The conserved quantity is ``H(x, r, t) + E``, with

    dx/dtau = +dH/dr,  dr/dtau = -dH/dx,  dt/dtau = 1,  dE/dtau = -dH/dt.

The splitting is ``H + E = E + H_kin(x, r, t) + H_pot(x, t)``. ``E`` never
feeds back into ``(x, t, r)``; it is tracked only as a diagnostic.
"""

from dataclasses import dataclass, replace
import math
from typing import Optional

import numpy as np

from . import bregman
from .bregman import BregmanGeometry, quadratic_geometry
from .scaling import (
    DomainError,
    ScalingParams,
    coeff_drift,
    coeff_kick,
    coeff_kinetic_energy_rate,
    coeff_potential_energy_rate,
)

_QUADRATIC = quadratic_geometry()

ENERGY_PLACEMENTS = ("grouped", "outer")


class ConvergenceError(RuntimeError):
    """A fixed-point solve hit ``max_iter`` without meeting its tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True, eq=False)
class ExtendedState:
    """A point ``(x, t, r, E)`` of the extended cotangent bundle.

    ``grad`` caches ``grad f(x)`` for the current ``x`` (or is ``None``);
    ``prev_grad`` holds the gradient from the start of the previous step and
    is only consulted by the lagged gradient-flow variant.
    """

    x: np.ndarray
    t: float
    r: np.ndarray
    E: float = 0.0
    tau: float = 0.0
    step_index: int = 0
    grad: Optional[np.ndarray] = None
    prev_grad: Optional[np.ndarray] = None

    def __post_init__(self):
        if not self.t > 0:
            raise DomainError(f"explicit time must stay positive, got t={self.t!r}")
        if np.shape(self.x) != np.shape(self.r):
            raise ValueError(f"x and r differ in shape: {np.shape(self.x)} vs {np.shape(self.r)}")

    def coordinates(self) -> np.ndarray:
        """Flat ``[x, t, r, E]`` vector."""
        return np.concatenate([self.x, [self.t], self.r, [self.E]])

    @classmethod
    def from_coordinates(cls, z, tau=0.0, step_index=0):
        z = np.asarray(z, dtype=float)
        d = (z.size - 2) // 2
        return cls(x=z[:d].copy(), t=float(z[d]), r=z[d + 1:2 * d + 1].copy(),
                   E=float(z[-1]), tau=tau, step_index=step_index)

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.x)) and np.all(np.isfinite(self.r))
                    and math.isfinite(self.t) and math.isfinite(self.E))


@dataclass(frozen=True)
class LeapfrogConfig:
    """Step size and options for one leapfrog step.

    ``energy_placement="grouped"`` updates ``E`` inside the exact flow of the
    component that produced the change (kinetic part with the drift,
    potential part with the kick), which keeps every sub-flow symplectic in
    the extended space. ``"outer"`` places both energy updates next to the
    time translations instead; ``(x, t, r)`` are identical either way.
    """

    epsilon: float = 0.1
    params: ScalingParams = ScalingParams()
    gradient_flow_enabled: bool = False
    gradient_flow_N: float = 2.0
    track_energy: bool = True
    lagged_gradient: bool = False
    energy_placement: str = "grouped"
    fixed_point_tol: float = 1e-12
    fixed_point_max_iter: int = 50

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError(f"epsilon must be positive, got {self.epsilon!r}")
        if not self.gradient_flow_N > 0:
            raise ValueError(f"gradient_flow_N must be positive, got {self.gradient_flow_N!r}")
        if self.energy_placement not in ENERGY_PLACEMENTS:
            raise ValueError(f"energy_placement must be one of {ENERGY_PLACEMENTS}")

    @property
    def gradient_flow_coefficient(self) -> float:
        """``p eps**p / (2 N)``."""
        p = self.params.p
        return p * self.epsilon ** p / (2.0 * self.gradient_flow_N)


def init_state(x0, t0, objective, params: ScalingParams, geom: BregmanGeometry = _QUADRATIC):
    """Start at rest (``r = 0``) with ``E = -H`` so ``H + E`` starts at exactly 0."""
    if not t0 > 0:
        raise DomainError(f"t0 must be positive, got {t0!r}")
    x0 = np.array(x0, dtype=float)
    if x0.shape != (objective.dimension,):
        raise ValueError(f"x0 has shape {x0.shape}, objective expects ({objective.dimension},)")
    r0 = np.zeros_like(x0)
    E0 = -bregman.hamiltonian(geom, x0, r0, t0, params, objective) + 0.0
    return ExtendedState(x=x0, t=float(t0), r=r0, E=E0)


def flow_A(state: ExtendedState, dt: float) -> ExtendedState:
    """Exact flow of ``H_A = E``: translate explicit time."""
    t = state.t + dt
    if not t > 0:
        raise DomainError(f"time translation by {dt} leaves t={t} <= 0")
    return replace(state, t=t)


def _gradient(state, objective):
    if state.grad is not None:
        return state.grad
    return objective.gradient(state.x)


def flow_C1(state, dt, objective, params: ScalingParams, grad=None) -> ExtendedState:
    """Momentum kick ``r <- r - dt C p t**(2p-1) grad f(x)``.

    Reuses ``grad`` or the state's cached gradient when available, so no new
    oracle call is made for an unchanged ``x``.
    """
    g = grad if grad is not None else _gradient(state, objective)
    r = state.r - (dt * coeff_kick(params, state.t)) * g
    return replace(state, r=r, grad=g)


def flow_C2(state, dt, objective, params: ScalingParams) -> ExtendedState:
    """Energy update of the potential part: ``E <- E - dt C p (2p-1) t**(2p-2) f(x)``."""
    if dt == 0:
        return state
    dE = -dt * coeff_potential_energy_rate(params, state.t) * objective.value(state.x)
    return replace(state, E=state.E + dE)


def flow_B2(state, dt, params: ScalingParams, geom: BregmanGeometry = _QUADRATIC) -> ExtendedState:
    """Energy update of the kinetic part: ``E <- E - dt dH_kin/dt`` at fixed ``(x, r)``."""
    if dt == 0:
        return state
    if geom.is_quadratic:
        dE = dt * coeff_kinetic_energy_rate(params, state.t) * float(np.dot(state.r, state.r))
    else:
        dE = -dt * bregman.kinetic_hamiltonian_dt(geom, state.x, state.r, state.t, params)
    return replace(state, E=state.E + dE)


def flow_B2_C2(state, dt, objective, params: ScalingParams, geom: BregmanGeometry = _QUADRATIC):
    """Both energy updates evaluated at the current ``(x, t, r)``.

    For the quadratic geometry:
    ``E <- E + dt (p(p+1)/(2 t**(p+2)) <r, r> - C p (2p-1) t**(2p-2) f(x))``.
    """
    return flow_C2(flow_B2(state, dt, params, geom), dt, objective, params)


def flow_B3_quadratic(state, dt, params: ScalingParams) -> ExtendedState:
    """Closed-form drift ``x <- x + dt p / t**(p+1) r`` of the quadratic geometry."""
    if dt == 0:
        return state
    x = state.x + (dt * coeff_drift(params, state.t)) * state.r
    return replace(state, x=x, grad=None)


def solve_component_flow_fixed_point(state, dt, geom: BregmanGeometry, params: ScalingParams,
                                     which: str, tol: float = 1e-12, max_iter: int = 50):
    """Implicit-midpoint approximation of the ``B1`` (momentum) or ``B3`` (position) field.

    ``B3``: ``x1 = x0 + dt v((x0 + x1) / 2, r, t)``.
    ``B1``: ``r1 = r0 - dt dH_kin/dx(x, (r0 + r1) / 2, t)``.

    Iterates from the unchanged variable until the residual of the implicit
    equation, in max norm, drops below ``tol``. Returns ``(state, iterations)``.
    """
    if which not in ("B1", "B3"):
        raise ValueError(f"which must be 'B1' or 'B3', got {which!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if dt == 0:
        return state, 0
    x, r, t = state.x, state.r, state.t

    if which == "B3":
        def update(y):
            return x + dt * bregman.velocity_map(geom, 0.5 * (x + y), r, t, params)
        y = x
    else:
        def update(y):
            return r - dt * bregman.kinetic_hamiltonian_dx(geom, x, 0.5 * (r + y), t, params)
        y = r

    iterations = 0
    while True:
        y_next = update(y)
        residual = float(np.max(np.abs(y_next - y))) if y.size else 0.0
        if not math.isfinite(residual):
            raise ConvergenceError(f"{which} fixed-point iteration produced non-finite values",
                                   residual, iterations)
        if residual < tol:
            break
        if iterations >= max_iter:
            raise ConvergenceError(f"{which} fixed-point iteration did not converge", residual, iterations)
        y = y_next
        iterations += 1

    if which == "B3":
        return replace(state, x=y, grad=None), iterations
    return replace(state, r=y), iterations


def _kinetic_flow(state, dt, config: LeapfrogConfig, geom: BregmanGeometry, gf_shift=None):
    """Central operator: B1 half, B3 full (with the kinetic energy update when grouped), B1 half.

    ``gf_shift`` is an explicit displacement added to ``x`` after the drift.
    """
    params = config.params
    grouped = config.track_energy and config.energy_placement == "grouped"
    if geom.is_quadratic:
        out = flow_B3_quadratic(state, dt, params)
        if grouped:
            # r and t are frozen during the quadratic kinetic flow, so this is exact
            out = replace(out, E=flow_B2(state, dt, params, geom).E)
    else:
        tol, mi = config.fixed_point_tol, config.fixed_point_max_iter
        s, _ = solve_component_flow_fixed_point(state, 0.5 * dt, geom, params, "B1", tol, mi)
        out, _ = solve_component_flow_fixed_point(s, dt, geom, params, "B3", tol, mi)
        if grouped:
            mid = replace(s, x=0.5 * (s.x + out.x))
            out = replace(out, E=flow_B2(mid, dt, params, geom).E)
        out, _ = solve_component_flow_fixed_point(out, 0.5 * dt, geom, params, "B1", tol, mi)
    if gf_shift is not None:
        out = replace(out, x=out.x + gf_shift, grad=None)
    return out


def _potential_half(state, dt, objective, config: LeapfrogConfig, grad=None):
    s = flow_C1(state, dt, objective, config.params, grad=grad)
    if config.track_energy and config.energy_placement == "grouped":
        s = flow_C2(s, dt, objective, config.params)
    return s


def _outer_energy(state, dt, objective, config, geom):
    if config.track_energy and config.energy_placement == "outer":
        return flow_B2_C2(state, dt, objective, config.params, geom)
    return state


def _advance_bookkeeping(state, h):
    step = 1 if h > 0 else (-1 if h < 0 else 0)
    return replace(state, tau=state.tau + h, step_index=state.step_index + step)


def leapfrog_step(state: ExtendedState, config: LeapfrogConfig, objective,
                  geom: BregmanGeometry = _QUADRATIC, step_size: Optional[float] = None):
    """One symmetric leapfrog step of the extended system.

    Composition (applied left to right)::

        A(h/2) . C(h/2) . B1(h/2) . B3(h) . B1(h/2) . C(h/2) . A(h/2)

    so every inner update sees ``t_{n+1/2} = t_n + h/2``. The gradient at the
    new ``x`` is cached on the returned state, so a run costs one fresh
    gradient per step plus one at the start. ``step_size`` overrides the
    signed step (``-epsilon`` reverses a step exactly).
    """
    h = config.epsilon if step_size is None else float(step_size)
    half = 0.5 * h
    s = flow_A(state, half)
    s = _outer_energy(s, half, objective, config, geom)
    s = _potential_half(s, half, objective, config)
    s = _kinetic_flow(s, h, config, geom)
    s = _potential_half(s, half, objective, config)
    s = _outer_energy(s, half, objective, config, geom)
    s = flow_A(s, half)
    return _advance_bookkeeping(s, h)


def leapfrog_step_gradient_flow(state: ExtendedState, config: LeapfrogConfig, objective,
                                geom: BregmanGeometry = _QUADRATIC, step_size: Optional[float] = None):
    """Leapfrog step with the gradient-flow field added to the central drift.

    The central update becomes the explicit
    ``x <- x + h p / t**(p+1) r - (h / eps) (p eps**p / (2N)) grad f(x_n)``.
    Each step evaluates ``grad f(x_n)`` once, shared by the leading kick and
    the gradient-flow term, plus ``grad f(x_{n+1})`` for the trailing kick:
    two fresh gradients per step. With ``lagged_gradient`` the gradient-flow
    term uses the gradient from the start of the previous step instead.
    """
    h = config.epsilon if step_size is None else float(step_size)
    half = 0.5 * h
    g_n = objective.gradient(state.x)
    g_gf = state.prev_grad if (config.lagged_gradient and state.prev_grad is not None) else g_n
    shift = -(h / config.epsilon) * config.gradient_flow_coefficient * g_gf

    s = flow_A(state, half)
    s = _outer_energy(s, half, objective, config, geom)
    s = _potential_half(s, half, objective, config, grad=g_n)
    s = _kinetic_flow(s, h, config, geom, gf_shift=shift)
    s = _potential_half(s, half, objective, config)
    s = _outer_energy(s, half, objective, config, geom)
    s = flow_A(s, half)
    s = replace(s, prev_grad=g_n)
    return _advance_bookkeeping(s, h)


def step(state, config: LeapfrogConfig, objective, geom=_QUADRATIC, step_size=None):
    """Dispatch on ``config.gradient_flow_enabled``."""
    fn = leapfrog_step_gradient_flow if config.gradient_flow_enabled else leapfrog_step
    return fn(state, config, objective, geom, step_size)


def conserved_quantity(state: ExtendedState, objective, geom: BregmanGeometry = _QUADRATIC,
                       params: ScalingParams = ScalingParams()) -> float:
    """``H(x, r, t) + E``; constant along the exact extended dynamics."""
    return bregman.hamiltonian(geom, state.x, state.r, state.t, params, objective) + state.E


def symplectic_form(d: int) -> np.ndarray:
    """Canonical matrix pairing positions ``(x, t)`` with momenta ``(r, E)``."""
    n = d + 1
    omega = np.zeros((2 * n, 2 * n))
    omega[:n, n:] = np.eye(n)
    omega[n:, :n] = -np.eye(n)
    return omega


def symplecticity_check(state: ExtendedState, config: LeapfrogConfig, objective,
                        geom: BregmanGeometry = _QUADRATIC, fd_step: float = 1e-5,
                        step_size: Optional[float] = None) -> float:
    """Max-norm of ``J^T Omega J - Omega`` for the Jacobian ``J`` of one step.

    ``J`` is taken by central differences in ``(x, t, r, E)``; the step used
    follows ``config.gradient_flow_enabled``.
    """
    d = state.x.size
    z0 = state.coordinates()
    n = z0.size

    def one_step(z):
        s = ExtendedState.from_coordinates(z, tau=state.tau, step_index=state.step_index)
        return step(s, config, objective, geom, step_size).coordinates()

    J = np.empty((n, n))
    for i in range(n):
        dz = np.zeros(n)
        dz[i] = fd_step
        J[:, i] = (one_step(z0 + dz) - one_step(z0 - dz)) / (2.0 * fd_step)
    omega = symplectic_form(d)
    return float(np.max(np.abs(J.T @ omega @ J - omega)))
