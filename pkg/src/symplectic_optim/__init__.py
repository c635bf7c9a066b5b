"""Accelerated optimization by leapfrog integration of the extended Bregman Hamiltonian."""

from .baselines import NesterovConfig, NesterovState, nesterov_init, nesterov_run, nesterov_step
from .bregman import BregmanGeometry, entropy_geometry, quadratic_geometry
from .integrators import (
    ConvergenceError,
    ExtendedState,
    LeapfrogConfig,
    conserved_quantity,
    init_state,
    leapfrog_step,
    leapfrog_step_gradient_flow,
    symplecticity_check,
)
from .objectives import CorrelatedQuadratic, Objective, build_correlated_quadratic, check_gradient, quartic
from .scaling import DomainError, ScalingEval, ScalingParams, coeff_drift, coeff_kick, eval_scaling
from .trace import Trace, TraceRecord

__version__ = "0.1.0"
