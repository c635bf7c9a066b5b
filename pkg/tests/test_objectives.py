import numpy as np
import pytest

from symplectic_optim.objectives import (
    Objective,
    build_correlated_quadratic,
    check_gradient,
    quartic,
    zero_objective,
)


@pytest.mark.parametrize("rho", [-0.5, 0.0, 0.9])
def test_one_dimensional_quadratic(rho):
    obj = build_correlated_quadratic(1, rho)
    assert obj.value(np.array([3.0])) == pytest.approx(9.0)
    np.testing.assert_allclose(obj.gradient(np.array([3.0])), [6.0])


def test_two_dimensional_eigenvector():
    obj = build_correlated_quadratic(2, 0.9)
    x = np.ones(2)
    assert obj.value(x) == pytest.approx(2 / 1.9, rel=1e-14)
    np.testing.assert_allclose(obj.gradient(x), [2 / 1.9, 2 / 1.9], rtol=1e-14)


def test_value_matches_dense_solve():
    obj = build_correlated_quadratic(5, 0.9)
    x = np.random.default_rng(1).standard_normal(5)
    y = np.linalg.solve(obj.covariance_matrix(), x)
    assert obj.value(x) == pytest.approx(float(y @ x), rel=1e-10)
    np.testing.assert_allclose(obj.gradient(x), 2 * y, rtol=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3, 10, 50])
@pytest.mark.parametrize("rho", [-0.7, 0.3, 0.9])
def test_precision_inverts_covariance(d, rho):
    obj = build_correlated_quadratic(d, rho)
    np.testing.assert_allclose(obj.covariance_matrix() @ obj.precision_matrix(), np.eye(d), atol=1e-10)


def test_positive_definite_on_random_probes():
    obj = build_correlated_quadratic(20, 0.9)
    rng = np.random.default_rng(2)
    assert obj.value(np.zeros(20)) == 0.0
    for _ in range(200):
        assert obj.value(rng.standard_normal(20)) > 0


@pytest.mark.parametrize("d, rho", [(0, 0.5), (3, 1.0), (3, -1.0), (3, 1.5)])
def test_quadratic_construction_errors(d, rho):
    with pytest.raises(ValueError):
        build_correlated_quadratic(d, rho)


def test_quartic_values():
    obj = quartic(2)
    assert obj.value(np.zeros(2)) == 0.0
    np.testing.assert_array_equal(obj.gradient(np.zeros(2)), 0.0)
    assert obj.value(np.ones(2)) == 4.0
    np.testing.assert_array_equal(obj.gradient(np.ones(2)), [8.0, 8.0])
    obj3 = quartic(3)
    x = np.array([1.0, 2.0, 3.0])
    assert obj3.value(x) == 196.0
    np.testing.assert_array_equal(obj3.gradient(x), [56.0, 112.0, 168.0])
    with pytest.raises(ValueError):
        quartic(0)


def test_counters_increment_once_per_call():
    obj = quartic(3)
    x = np.ones(3)
    for k in range(1, 6):
        obj.value(x)
        assert (obj.n_value, obj.n_grad) == (k, k - 1)
        obj.gradient(x)
        assert (obj.n_value, obj.n_grad) == (k, k)
    obj.reset_counters()
    assert obj.n_value == obj.n_grad == 0


def test_dimension_is_enforced():
    obj = quartic(3)
    with pytest.raises(ValueError):
        obj.value(np.ones(2))
    bad = Objective(3, lambda x: 0.0, lambda x: np.zeros(2))
    with pytest.raises(ValueError):
        bad.gradient(np.ones(3))


def test_gradient_check_quadratic():
    obj = build_correlated_quadratic(10, 0.9)
    x = np.random.default_rng(3).standard_normal(10)
    assert check_gradient(obj, x, 1e-5) < 1e-6


def test_gradient_check_quartic():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(5)
    x /= np.linalg.norm(x)
    assert check_gradient(quartic(5), x, 1e-5) < 1e-6


@pytest.mark.parametrize("obj", [build_correlated_quadratic(4, 0.9), quartic(4), zero_objective(4)])
def test_gradient_check_at_critical_point(obj):
    h = 1e-4
    assert check_gradient(obj, np.zeros(4), h) < 10 * h ** 2


def test_gradient_check_reports_nonfinite():
    obj = Objective(1, lambda x: 1.0 / x[0] if x[0] > 0 else np.inf, lambda x: -1.0 / x ** 2)
    assert check_gradient(obj, np.array([1e-6]), 1e-5) == np.inf


def test_directional_derivatives():
    rng = np.random.default_rng(5)
    for obj in (build_correlated_quadratic(8, 0.9), quartic(8)):
        for _ in range(20):
            x, u = rng.standard_normal(8), rng.standard_normal(8)
            h = 1e-6
            fd = (obj.value(x + h * u) - obj.value(x - h * u)) / (2 * h)
            assert fd == pytest.approx(obj.gradient(x) @ u, rel=1e-6, abs=1e-8)
