"""Limit-law checks: Lambert W branches, f0, moments, transforms, theta laws.

Quadrature cross-checks integrate the densities through substitutions that
remove the edge singularities, so closed forms are compared against an
independent route at tight tolerances.
"""

import cmath
import math

import numpy as np
import pytest

from trimat.errors import BranchError, DomainError, InputError
from trimat.limitlaws import (
    E_EDGE,
    f0_cdf,
    f0_density,
    ftheta_density,
    ftheta_density_grid,
    ftheta_edge,
    lambert_w_cut,
    lambert_w_cut_log,
    lambert_w_principal,
    lambert_w_real,
    mp_atom,
    mp_density,
    mu0_moment,
    r_transform,
    stieltjes_S,
)
from trimat.numerics import QuadratureRule, integrate

FINE = QuadratureRule("finite-adaptive", abs_tol=1e-10, rel_tol=1e-10, max_depth=48)


def _f0_log_integrand(t):
    # f0(e^-t) e^-t expressed through the cut value, stable at the hard edge
    a, b = lambert_w_cut_log(t)
    return b / (math.pi * (a * a + b * b))


def _f0_log_integral(t_lo):
    """int_{t_lo}^inf f0(e^-t) e^-t dt, splitting at t = 1.

    The tail decays only like 1/t^2 (hard-edge mass), so it is mapped to
    (0, 1) with u = 1/t instead of being handed to an exponential-tail rule.
    """
    head = integrate(_f0_log_integrand, t_lo, 1.0, FINE)
    tail = integrate(lambda u: _f0_log_integrand(1.0 / u) / (u * u), 0.0, 1.0, FINE)
    return head + tail


def test_lambert_w_real_known_values():
    assert lambert_w_real(0.0) == 0.0
    assert abs(lambert_w_real(math.e) - 1.0) <= 1e-15
    assert abs(lambert_w_real(-1.0 / math.e) + 1.0) <= 1e-15
    assert abs(lambert_w_real(1.0) - 0.5671432904097838) <= 1e-15


def test_lambert_w_real_residual_grid():
    xs = np.concatenate([
        -1.0 / math.e + np.geomspace(1e-12, 1.0 / math.e, 300),
        np.geomspace(1e-12, 1e6, 300),
    ])
    for x in xs:
        x = float(x)
        w = lambert_w_real(x)
        assert abs(w * math.exp(w) - x) <= 1e-14 * max(1.0, abs(x))


def test_lambert_w_real_rejects():
    with pytest.raises(DomainError):
        lambert_w_real(-0.5)
    with pytest.raises(InputError):
        lambert_w_real(float("nan"))


def test_lambert_w_cut_branch_point():
    v = lambert_w_cut(-1.0 / math.e)
    assert (v.a, v.b) == (-1.0, 0.0)
    assert v.w == complex(-1.0, 0.0)
    assert lambert_w_cut_log(-1.0) == (-1.0, 0.0)


def test_lambert_w_cut_residuals():
    for z in np.geomspace(1.0 / math.e + 1e-12, 1e6, 200):
        w = lambert_w_cut(-float(z)).w
        assert abs(w * cmath.exp(w) + z) <= 1e-12 * max(1.0, z)
        assert 0.0 <= w.imag < math.pi


def test_lambert_w_cut_imaginary_part_grows():
    # b increases towards pi as the argument runs to -inf along the cut
    bs = [lambert_w_cut(-z).b for z in (0.5, 2.0, 1e2, 1e6)]
    assert all(b2 > b1 for b1, b2 in zip(bs, bs[1:]))
    assert 2.8 < bs[-1] < math.pi


def test_lambert_w_cut_rejects():
    with pytest.raises(DomainError):
        lambert_w_cut(-0.3)
    with pytest.raises(DomainError):
        lambert_w_cut_log(-1.0000001)
    with pytest.raises(InputError):
        lambert_w_cut(float("nan"))


def test_lambert_w_principal_residuals_and_conjugation():
    rng = np.random.default_rng(7)
    for _ in range(200):
        z = complex(rng.uniform(-3.0, 3.0), rng.uniform(1e-6, 3.0))
        w = lambert_w_principal(z)
        assert abs(w * cmath.exp(w) - z) <= 1e-13 * max(1.0, abs(z))
        assert abs(lambert_w_principal(z.conjugate()) - w.conjugate()) <= 1e-14


def test_lambert_w_principal_real_axis():
    assert lambert_w_principal(2.0 + 0.0j) == complex(lambert_w_real(2.0))
    with pytest.raises(DomainError):
        lambert_w_principal(-1.0 + 0.0j)


def test_f0_density_support():
    assert E_EDGE == math.e
    for x in (-1.0, 0.0, math.e, 3.0):
        assert f0_density(x) == 0.0
    assert f0_density(1.0) > 0.0
    with pytest.raises(InputError):
        f0_density(float("nan"))


def test_f0_density_soft_edge():
    # f0(e - eps) ~ sqrt(2 eps) / (pi e^{3/2})
    target = math.sqrt(2.0) / (math.pi * math.e ** 1.5)
    ratio = f0_density(math.e - 1e-8) / math.sqrt(1e-8)
    assert abs(ratio / target - 1.0) <= 1e-6


def test_f0_density_hard_edge_profile():
    # x (log x)^2 f0(x) -> 1 from above, but only like 1 + 2 log|log x|/|log x|
    probes = (1e-4, 1e-12, 1e-100, 1e-300)
    vals = [x * math.log(x) ** 2 * f0_density(x) for x in probes]
    assert all(a > b > 1.0 for a, b in zip(vals, vals[1:]))
    assert vals[-1] <= 1.02


def test_f0_total_mass():
    assert abs(_f0_log_integral(-1.0) - 1.0) <= 1e-8


def test_f0_cdf_endpoints_and_quadrature():
    assert f0_cdf(-1.0) == 0.0
    assert f0_cdf(0.0) == 0.0
    assert f0_cdf(math.e) == 1.0
    assert f0_cdf(5.0) == 1.0
    # int_0^1 f0 corresponds to t in (0, inf) after x = e^-t
    assert abs(_f0_log_integral(0.0) - f0_cdf(1.0)) <= 1e-8


def test_f0_cdf_monotone_and_differentiable():
    xs = np.linspace(1e-9, math.e, 1000)
    vals = [f0_cdf(float(x)) for x in xs]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    h = 1e-6
    for x in (0.5, 1.0, 1.5, 2.0, 2.5):
        central = (f0_cdf(x + h) - f0_cdf(x - h)) / (2.0 * h)
        assert abs(central / f0_density(x) - 1.0) <= 1e-5


def test_mu0_moment_values():
    assert mu0_moment(0) == 1.0
    assert mu0_moment(1) == 0.5
    assert mu0_moment(3) == 9.0 / 8.0
    assert mu0_moment(5) == 3125.0 / 720.0
    big = mu0_moment(150)
    assert math.isfinite(big) and big > 0.0
    with pytest.raises(InputError):
        mu0_moment(1.5)
    with pytest.raises(InputError):
        mu0_moment(True)
    with pytest.raises(DomainError):
        mu0_moment(-1)


def test_moments_match_quadrature():
    for k in range(1, 7):
        via_quad = integrate(
            lambda t, k=k: math.exp(-k * t) * _f0_log_integrand(t),
            -1.0, math.inf,
            QuadratureRule("semi-infinite-exp-weighted", 1e-11, 1e-11, 48),
        )
        assert abs(via_quad - mu0_moment(k)) <= 1e-6


def test_stieltjes_moment_series():
    series = sum(mu0_moment(k) * 10.0 ** (-k - 1) for k in range(41))
    assert abs(stieltjes_S(10.0) + series) <= 1e-12


def test_stieltjes_asymptotics_and_signs():
    z = complex(0.0, 1e6)
    assert abs(z * stieltjes_S(z) + 1.0) <= 1e-6
    assert stieltjes_S(10.0).real < 0.0
    assert stieltjes_S(-0.5).real > 0.0
    assert stieltjes_S(10.0).imag == 0.0


def test_stieltjes_herglotz():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        z = complex(rng.uniform(-5.0, 10.0), rng.uniform(1e-3, 10.0))
        assert stieltjes_S(z).imag > 0.0


def test_stieltjes_rejects_support():
    for zr in (0.0, 1.0, math.e):
        with pytest.raises(DomainError):
            stieltjes_S(zr)
    assert stieltjes_S(math.e + 1e-6).real < 0.0


def test_r_transform_values():
    assert r_transform(0.0) == 0.5 + 0.0j
    assert abs(r_transform(0.5) - 0.8853900817779269) <= 1e-15


def test_r_transform_series_matches_closed_form():
    # the implementation switches route at |z| = 1/2; both must agree there
    for z in (0.5 + 0.0j, 0.5j, -0.5 + 0.0j, 0.35 + 0.35j):
        gap = abs(r_transform(z * (1 - 1e-13)) - r_transform(z * (1 + 1e-13)))
        assert gap <= 1e-12


def test_r_transform_inverts_stieltjes():
    for z in (0.1 + 0.0j, 0.2j, 0.3 + 0.1j):
        k = r_transform(z) + 1.0 / z
        assert abs(stieltjes_S(k) + z) <= 1e-10


def test_r_transform_rejects():
    for z in (1.0, 1.0j, -1.5):
        with pytest.raises(DomainError):
            r_transform(z)


def test_mp_atom():
    assert mp_atom(0.5) == 0.0
    assert mp_atom(1.0) == 0.0
    assert mp_atom(2.0) == 0.5
    with pytest.raises(DomainError):
        mp_atom(0.0)


def test_mp_density_values():
    assert mp_density(2.0, 1.0) == 1.0 / (2.0 * math.pi)
    assert mp_density(4.0, 1.0) == 0.0
    assert mp_density(4.5, 1.0) == 0.0
    assert mp_density(0.0, 1.0) == 0.0
    assert mp_density(0.05, 0.5) == 0.0  # below (1 - sqrt(1/2))^2 ~ 0.086
    with pytest.raises(DomainError):
        mp_density(1.0, -2.0)
    with pytest.raises(InputError):
        mp_density(float("nan"), 1.0)


def test_mp_total_mass():
    # x = a + (b-a) sin^2 phi removes both square-root edge factors
    for c in (0.5, 1.0, 2.0):
        sc = math.sqrt(c)
        a, b = (1.0 - sc) ** 2, (1.0 + sc) ** 2

        def integrand(phi, a=a, b=b, c=c):
            x = a + (b - a) * math.sin(phi) ** 2
            return mp_density(x, c) * (b - a) * 2.0 * math.sin(phi) * math.cos(phi)

        mass = integrate(integrand, 0.0, math.pi / 2.0, FINE)
        assert abs(mass + mp_atom(c) - 1.0) <= 1e-8


def test_ftheta_edge_values():
    assert ftheta_edge(2.0) == 3.0 ** 1.5
    assert ftheta_edge(3.0) == 4.0 ** (4.0 / 3.0)
    assert abs(ftheta_edge(1.0 + 1e-9) - 4.0) <= 1e-6
    with pytest.raises(DomainError):
        ftheta_edge(1.0)
    with pytest.raises(DomainError):
        ftheta_edge(0.5)


def test_ftheta_density_support():
    edge = ftheta_edge(2.0)
    for x in (-1.0, 0.0, edge, edge + 0.1):
        assert ftheta_density(x, 2.0) == 0.0
    assert ftheta_density(1.0, 2.0) > 0.0
    with pytest.raises(DomainError):
        ftheta_density(1.0, 1.0)
    with pytest.raises(InputError):
        ftheta_density(float("nan"), 2.0)


def test_ftheta_root_satisfies_defining_equation():
    from trimat.limitlaws import _J, _ftheta_root_robust

    edge = ftheta_edge(2.0)
    for x in np.linspace(edge / 101.0, 0.999 * edge, 100):
        x = float(x)
        root = _ftheta_root_robust(x, 2.0, edge)
        assert root.imag > 0.0
        assert abs(_J(root, 2.0) - x) <= 1e-10 * max(1.0, x)
        # conjugate root solves the same equation from the lower half plane
        assert abs(_J(root.conjugate(), 2.0) - x) <= 1e-10 * max(1.0, x)
        assert abs(ftheta_density(x, 2.0) - 2.0 * root.imag / (math.pi * x)) <= 1e-12


def test_ftheta_grid_matches_pointwise():
    edge = ftheta_edge(2.0)
    xs = [-1.0, 0.0, 0.3, 1.0, 2.5, 4.0, 5.0, edge, edge + 1.0]
    grid = ftheta_density_grid(xs, 2.0)
    for x, g in zip(xs, grid):
        assert abs(g - ftheta_density(x, 2.0)) <= 1e-12
    assert grid[0] == 0.0 and grid[-1] == 0.0
    with pytest.raises(DomainError):
        ftheta_density_grid([1.0], 0.9)


def test_ftheta_total_mass():
    # x = u^3 tames the x^{-1/3} hard-edge divergence of the theta = 2 law
    edge = ftheta_edge(2.0)
    rule = QuadratureRule("finite-adaptive", abs_tol=1e-8, rel_tol=1e-8, max_depth=48)
    mass = integrate(
        lambda u: 3.0 * u * u * ftheta_density(u ** 3, 2.0),
        0.0, edge ** (1.0 / 3.0), rule,
    )
    assert abs(mass - 1.0) <= 1e-8
