"""Objective oracles with evaluation counters.

Counters live on the objective so every driver is charged identically. An
objective is meant to be confined to a single run; the counters are plain
integers and are not guarded against concurrent increments.
"""

import numpy as np


class Objective:
    """Value and gradient oracle for a smooth function on ``R^dimension``.

    Each call to :meth:`value` or :meth:`gradient` increments exactly one of
    ``n_value`` / ``n_grad``.
    """

    def __init__(self, dimension, value_fn, grad_fn, name="objective"):
        dimension = int(dimension)
        if dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        self.name = name
        self._value_fn = value_fn
        self._grad_fn = grad_fn
        self.n_value = 0
        self.n_grad = 0

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ValueError(
                f"{self.name}: expected a point of shape ({self.dimension},), got {x.shape}")
        return x

    def value(self, x) -> float:
        x = self._check(x)
        self.n_value += 1
        return float(self._value_fn(x))

    def gradient(self, x) -> np.ndarray:
        x = self._check(x)
        self.n_grad += 1
        g = np.asarray(self._grad_fn(x), dtype=float)
        if g.shape != (self.dimension,):
            raise ValueError(f"{self.name}: gradient has shape {g.shape}")
        return g

    def reset_counters(self):
        self.n_value = 0
        self.n_grad = 0

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, dimension={self.dimension})"


class CorrelatedQuadratic(Objective):
    """``f(x) = <inv(Sigma) x, x>`` with ``Sigma_ij = rho**|i-j|``.

    The precision matrix of this Kac-Murdock-Szego correlation matrix is
    tridiagonal, so it is stored as two bands and applied in O(d).
    """

    def __init__(self, d, rho):
        d = int(d)
        if d < 1:
            raise ValueError(f"dimension must be >= 1, got {d}")
        rho = float(rho)
        if not abs(rho) < 1.0:
            raise ValueError(f"|rho| must be < 1 for a positive-definite Sigma, got {rho}")
        self.rho = rho
        s = 1.0 / (1.0 - rho * rho)
        diag = np.full(d, (1.0 + rho * rho) * s)
        diag[0] = diag[-1] = s
        if d == 1:
            diag[0] = 1.0
        self._diag = diag
        self._off = -rho * s
        super().__init__(d, self._value, self._grad, name="quadratic")

    def apply_precision(self, x):
        y = self._diag * x
        if self.dimension > 1:
            y[1:] += self._off * x[:-1]
            y[:-1] += self._off * x[1:]
        return y

    def _value(self, x):
        return np.dot(self.apply_precision(x), x)

    def _grad(self, x):
        return 2.0 * self.apply_precision(x)

    def precision_matrix(self):
        """Dense ``inv(Sigma)``; for tests and diagnostics."""
        d = self.dimension
        P = np.diag(self._diag)
        if d > 1:
            idx = np.arange(d - 1)
            P[idx, idx + 1] = P[idx + 1, idx] = self._off
        return P

    def covariance_matrix(self):
        i = np.arange(self.dimension)
        return self.rho ** np.abs(i[:, None] - i[None, :])


def build_correlated_quadratic(d, rho=0.9) -> CorrelatedQuadratic:
    return CorrelatedQuadratic(d, rho)


def quartic(d) -> Objective:
    """``f(x) = <x, x>**2`` with gradient ``4 <x, x> x``."""

    def value(x):
        s = np.dot(x, x)
        return s * s

    def grad(x):
        return 4.0 * np.dot(x, x) * x

    return Objective(d, value, grad, name="quartic")


def zero_objective(d) -> Objective:
    """``f = 0`` everywhere; drives the free (force-free) dynamics."""
    return Objective(d, lambda x: 0.0, np.zeros_like, name="zero")


def check_gradient(obj: Objective, x, h=1e-5) -> float:
    """Max over coordinates of ``|central difference - analytic| / (1 + |analytic|)``.

    Returns ``inf`` if the objective is non-finite at any probe point.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    x = np.asarray(x, dtype=float)
    g = obj.gradient(x)
    fd = np.empty_like(g)
    for i in range(x.size):
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        fp, fm = obj.value(xp), obj.value(xm)
        if not (np.isfinite(fp) and np.isfinite(fm)):
            return float("inf")
        fd[i] = (fp - fm) / (2.0 * h)
    return float(np.max(np.abs(fd - g) / (1.0 + np.abs(g))))
