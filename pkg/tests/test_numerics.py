"""Contracts of the linear algebra and quadrature primitives."""

import math

import numpy as np
import pytest

from trimat.errors import (
    AccuracyError,
    ConvergenceError,
    DegeneracyError,
    InputError,
)
from trimat.numerics import (
    QuadratureRule,
    integrate,
    newton_complex,
    qr_unitary,
    singular_values,
)


def test_singular_values_known():
    assert np.allclose(singular_values([[3.0, 0.0], [0.0, 4.0]]), [4.0, 3.0])
    s = singular_values([[1.0, 2.0], [2.0, 4.0]])  # rank one
    assert abs(s[0] - 5.0) <= 1e-12 and s[1] <= 1e-12
    assert singular_values(np.ones((2, 3))).shape == (2,)


def test_singular_values_sorted_and_invariant():
    rng = np.random.default_rng(11)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    s = singular_values(a)
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    q, _ = qr_unitary(rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5)))
    assert np.allclose(singular_values(q @ a), s)


def test_singular_values_rejects():
    with pytest.raises(InputError):
        singular_values([1.0, 2.0])
    with pytest.raises(InputError):
        singular_values([[1.0, float("nan")], [0.0, 1.0]])
    with pytest.raises(InputError):
        singular_values(np.zeros((0, 2)))


def test_qr_unitary_factorization():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    q, r = qr_unitary(a)
    assert np.allclose(q.conj().T @ q, np.eye(6), atol=1e-13)
    assert np.allclose(q @ r, a, atol=1e-12)
    assert np.allclose(np.tril(r, -1), 0.0)
    d = np.diagonal(r)
    assert np.all(d.imag == 0.0) and np.all(d.real > 0.0)


def test_qr_unitary_deterministic():
    a = np.array([[1.0, 2.0], [3.0 + 1.0j, 4.0]])
    q1, r1 = qr_unitary(a)
    q2, r2 = qr_unitary(a)
    assert np.array_equal(q1, q2) and np.array_equal(r1, r2)


def test_qr_unitary_rejects():
    with pytest.raises(InputError):
        qr_unitary(np.ones((2, 3)))
    with pytest.raises(DegeneracyError):
        qr_unitary([[1.0, 1.0], [1.0, 1.0]])


def test_newton_complex_root():
    root = newton_complex(lambda z: z * z - 2.0, lambda z: 2.0 * z, 1.0)
    assert abs(root - math.sqrt(2.0)) <= 1e-12


def test_newton_complex_damping_rescues_overshoot():
    # undamped Newton on atan diverges from |z0| > ~1.39; damping must not
    import cmath

    root = newton_complex(cmath.atan, lambda z: 1.0 / (1.0 + z * z), 2.0 + 0.0j)
    assert abs(root) <= 1e-12


def test_newton_complex_budget_error():
    # exp has no zero; the iterate drifts left one unit per step
    with pytest.raises(ConvergenceError) as info:
        newton_complex(
            lambda z: np.exp(z), lambda z: np.exp(z), 0.0 + 0.0j, max_iter=5
        )
    assert info.value.last_iterate == -5.0 + 0.0j


def test_newton_complex_zero_derivative():
    with pytest.raises(ConvergenceError) as info:
        newton_complex(lambda z: z * z - 1.0, lambda z: 0.0, 3.0 + 0.0j)
    assert info.value.last_iterate == 3.0 + 0.0j


def test_newton_complex_damping_exhausted():
    with pytest.raises(ConvergenceError):
        newton_complex(lambda z: 1.0, lambda z: 1.0, 0.0 + 0.0j)


def test_newton_complex_rejects():
    with pytest.raises(InputError):
        newton_complex(lambda z: z, lambda z: 1.0, 1.0, tol=0.0)
    with pytest.raises(InputError):
        newton_complex(lambda z: z, lambda z: 1.0, 1.0, max_iter=0)


def test_quadrature_rule_validation():
    with pytest.raises(InputError):
        QuadratureRule("gauss-kronrod")
    with pytest.raises(InputError):
        QuadratureRule(abs_tol=0.0)
    with pytest.raises(InputError):
        QuadratureRule(rel_tol=-1e-10)
    with pytest.raises(InputError):
        QuadratureRule(max_depth=0)
    assert QuadratureRule() == QuadratureRule("finite-adaptive", 1e-10, 1e-10, 40)


def test_integrate_finite_known_values():
    assert abs(integrate(lambda x: x * x, 0.0, 1.0) - 1.0 / 3.0) <= 1e-12
    assert abs(integrate(math.sin, 0.0, math.pi) - 2.0) <= 1e-12
    # reversed endpoints flip the sign
    assert abs(integrate(lambda x: x * x, 1.0, 0.0) + 1.0 / 3.0) <= 1e-12
    assert integrate(lambda x: 1.0, 2.0, 2.0) == 0.0


def test_integrate_open_endpoint_singularities():
    loose = QuadratureRule("finite-adaptive", 1e-7, 1e-7, 48)
    assert abs(integrate(lambda x: 1.0 / math.sqrt(x), 0.0, 1.0, loose) - 2.0) <= 1e-6
    assert abs(integrate(lambda x: math.log(x) ** 2, 0.0, 1.0, loose) - 2.0) <= 1e-9


def test_integrate_semi_infinite_known_values():
    assert abs(integrate(lambda x: math.exp(-x), 0.0, math.inf) - 1.0) <= 1e-10
    assert abs(integrate(lambda x: x ** 3 * math.exp(-x), 0.0, math.inf) - 6.0) <= 1e-9
    half_sqrt_pi = math.sqrt(math.pi) / 2.0
    assert abs(integrate(lambda x: math.exp(-x * x), 0.0, math.inf) - half_sqrt_pi) <= 1e-10
    # shifted lower endpoint
    assert abs(integrate(lambda x: math.exp(-x), 2.0, math.inf) - math.exp(-2.0)) <= 1e-10
    # exponential integral E1(1)
    e1 = integrate(lambda x: math.exp(-x) / x, 1.0, math.inf)
    assert abs(e1 - 0.21938393439552029) <= 1e-12


def test_integrate_log_singularity_with_exp_tail():
    # int_0^inf log(x)^2 e^-x dx = gamma^2 + pi^2/6
    target = 0.5772156649015329 ** 2 + math.pi ** 2 / 6.0
    val = integrate(lambda x: math.log(x) ** 2 * math.exp(-x), 0.0, math.inf)
    assert abs(val - target) <= 1e-9


def test_integrate_accuracy_error_carries_estimate():
    shallow = QuadratureRule("finite-adaptive", 1e-14, 1e-14, 1)
    with pytest.raises(AccuracyError) as info:
        integrate(lambda x: math.sin(50.0 * x), 0.0, 20.0, shallow)
    assert math.isfinite(info.value.estimate)
    assert info.value.error_bound > 0.0


def test_integrate_rejects_mismatched_rules():
    semi = QuadratureRule("semi-infinite-exp-weighted")
    with pytest.raises(InputError):
        integrate(lambda x: x, 0.0, 1.0, semi)
    with pytest.raises(InputError):
        integrate(lambda x: math.exp(-x), 0.0, math.inf, QuadratureRule())
    with pytest.raises(InputError):
        integrate(lambda x: math.exp(-x), float("nan"), 1.0)
    with pytest.raises(InputError):
        integrate(lambda x: math.exp(-x), math.inf, math.inf, semi)
