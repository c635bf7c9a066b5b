"""Run orchestration: build the objective and method from a config and record a trace."""

import math

import numpy as np

from .. import bregman
from ..baselines import NesterovConfig, nesterov_run
from ..bregman import quadratic_geometry
from ..integrators import LeapfrogConfig, init_state, step
from ..objectives import build_correlated_quadratic, quartic
from ..scaling import ScalingParams, coeff_kick
from ..trace import Trace, is_divergent
from .config import ExperimentConfig


def build_objective(config: ExperimentConfig):
    if config.objective == "quadratic":
        return build_correlated_quadratic(config.dim, config.rho)
    return quartic(config.dim)


def initial_point(config: ExperimentConfig) -> np.ndarray:
    """Explicit ``x0`` if given, else a seeded standard-normal draw scaled to unit norm."""
    if config.x0 is not None:
        return np.array(config.x0, dtype=float)
    x = np.random.default_rng(config.seed).standard_normal(config.dim)
    return x / np.linalg.norm(x)


def leapfrog_run(x0, config: LeapfrogConfig, objective, steps, geom=None, t0=1.0,
                 divergence_threshold=1e10, record_every=1, metadata=None) -> Trace:
    """Iterate the (optionally gradient-flow augmented) leapfrog step and record a trace."""
    geom = geom or quadratic_geometry()
    params = config.params
    method = "leapfrog-gf" if config.gradient_flow_enabled else "leapfrog"
    trace = Trace(metadata=dict(metadata or {}, method=method))
    state = init_state(x0, t0, objective, params, geom)

    def conserved(s, f):
        if not config.track_energy:
            return math.nan
        H = bregman.kinetic_hamiltonian(geom, s.x, s.r, s.t, params) + coeff_kick(params, s.t) * f
        return H + s.E

    f = objective.value(state.x)
    trace.append(0, state.t, f, objective.n_grad, conserved(state, f))
    for _ in range(int(steps)):
        state = step(state, config, objective, geom)
        finite = state.is_finite()
        f = objective.value(state.x) if finite else math.inf
        diverged = is_divergent(f, finite, divergence_threshold)
        n = state.step_index
        if diverged or n % record_every == 0 or n == steps:
            c = conserved(state, f) if not diverged else math.nan
            trace.append(n, state.t, f, objective.n_grad, c, diverged)
        if diverged:
            break
    return trace


def run_experiment(config: ExperimentConfig) -> Trace:
    """Validate ``config``, run it to completion or divergence, and return the trace."""
    config.validate()
    objective = build_objective(config)
    x0 = initial_point(config)
    params = ScalingParams(p=config.p, C=config.C)
    meta = config.to_dict()
    if config.method == "nesterov":
        nc = NesterovConfig(epsilon=config.eps, params=params, N=config.N)
        return nesterov_run(x0, nc, objective, config.steps, config.divergence_threshold,
                            config.record_every, config.t0, metadata=meta)
    lc = LeapfrogConfig(
        epsilon=config.eps, params=params,
        gradient_flow_enabled=config.method == "leapfrog-gf",
        gradient_flow_N=config.N, track_energy=config.track_energy,
        lagged_gradient=config.lagged_gradient, energy_placement=config.energy_placement,
    )
    return leapfrog_run(x0, lc, objective, config.steps, t0=config.t0,
                        divergence_threshold=config.divergence_threshold,
                        record_every=config.record_every, metadata=meta)
