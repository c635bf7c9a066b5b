from .analysis import (
    Comparison,
    ComparisonError,
    FitError,
    compare_methods,
    compare_traces,
    estimate_rate,
    first_attainment,
    relative_levels,
)
from .config import ConfigError, ExperimentConfig, config_from_mapping, read_config_file
from .experiment import build_objective, initial_point, leapfrog_run, run_experiment
from .io import TraceIOError, emit_csv, emit_metadata, emit_plot, format_csv, read_csv

__all__ = [
    "Comparison", "ComparisonError", "ConfigError", "ExperimentConfig", "FitError", "TraceIOError",
    "build_objective", "compare_methods", "compare_traces", "config_from_mapping", "emit_csv",
    "emit_metadata", "emit_plot", "estimate_rate", "first_attainment", "format_csv", "initial_point",
    "leapfrog_run", "read_config_file", "read_csv", "relative_levels", "run_experiment",
]
