"""Experiment configuration and its validation."""

from dataclasses import dataclass, fields, asdict
import math
from typing import Optional, Tuple

METHODS = ("leapfrog", "leapfrog-gf", "nesterov")
OBJECTIVES = ("quadratic", "quartic")


class ConfigError(ValueError):
    """Invalid experiment configuration; raised before any compute happens."""


@dataclass(frozen=True)
class ExperimentConfig:
    method: str = "leapfrog"
    objective: str = "quadratic"
    dim: int = 50
    rho: float = 0.9
    p: float = 2.0
    C: float = 0.0625
    N: float = 2.0
    eps: float = 0.1
    steps: int = 10_000
    t0: float = 1.0
    seed: int = 0
    x0: Optional[Tuple[float, ...]] = None
    divergence_threshold: float = 1e10
    record_every: int = 1
    out: Optional[str] = None
    track_energy: bool = True
    lagged_gradient: bool = False
    energy_placement: str = "grouped"

    def validate(self):
        problems = []
        if self.method not in METHODS:
            problems.append(f"method must be one of {METHODS}, got {self.method!r}")
        if self.objective not in OBJECTIVES:
            problems.append(f"objective must be one of {OBJECTIVES}, got {self.objective!r}")
        if self.dim < 1:
            problems.append(f"dim must be >= 1, got {self.dim}")
        if not abs(self.rho) < 1:
            problems.append(f"|rho| must be < 1, got {self.rho}")
        for name in ("p", "C", "N", "eps", "t0", "divergence_threshold"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                problems.append(f"{name} must be a positive finite number, got {v!r}")
        if self.steps < 1:
            problems.append(f"steps must be >= 1, got {self.steps}")
        if self.record_every < 1:
            problems.append(f"record_every must be >= 1, got {self.record_every}")
        if self.x0 is not None:
            if len(self.x0) != self.dim:
                problems.append(f"x0 has {len(self.x0)} entries but dim={self.dim}")
            elif not all(math.isfinite(v) for v in self.x0):
                problems.append("x0 entries must be finite")
        if self.energy_placement not in ("grouped", "outer"):
            problems.append(f"energy_placement must be 'grouped' or 'outer', got {self.energy_placement!r}")
        if problems:
            raise ConfigError("; ".join(problems))
        return self

    def to_dict(self):
        d = asdict(self)
        if d["x0"] is not None:
            d["x0"] = list(d["x0"])
        return d


def _parse_bool(s):
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {s!r}")


def _parse_x0(s):
    if isinstance(s, (list, tuple)):
        return tuple(float(v) for v in s)
    return tuple(float(v) for v in str(s).replace(" ", "").split(",") if v)


_CONVERTERS = {
    "dim": int, "steps": int, "seed": int, "record_every": int,
    "rho": float, "p": float, "C": float, "N": float, "eps": float, "t0": float,
    "divergence_threshold": float,
    "track_energy": _parse_bool, "lagged_gradient": _parse_bool,
    "x0": _parse_x0,
}

FIELD_NAMES = tuple(f.name for f in fields(ExperimentConfig))


def config_from_mapping(values: dict, base: Optional[ExperimentConfig] = None) -> ExperimentConfig:
    """Build a config from string- or typed-valued entries; dashes in keys are accepted."""
    kwargs = {}
    for key, raw in values.items():
        if raw is None:
            continue
        name = key.replace("-", "_")
        if name not in FIELD_NAMES:
            raise ConfigError(f"unknown configuration key {key!r}")
        conv = _CONVERTERS.get(name)
        try:
            kwargs[name] = conv(raw) if conv else raw
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None
    base = base or ExperimentConfig()
    return ExperimentConfig(**{**asdict(base), **kwargs}).validate()


def read_config_file(path) -> dict:
    """Parse a plain ``key = value`` file; ``#`` starts a comment."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
    return values
