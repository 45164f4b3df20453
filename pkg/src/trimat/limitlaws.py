"""Limiting spectral laws of scaled triangular matrix ensembles.

Everything here is driven by the Lambert W function.  Three evaluation
paths are provided: the real principal branch on [-1/e, inf), the complex
principal branch off the cut (-inf, -1/e], and the boundary values W(a+ib)
on the upper side of the cut, parametrized by b in (0, pi) through

    a = -b cot(b),     w e^w = -exp(-b cot b) * b / sin(b).

The map b -> -w e^w is strictly increasing on (0, pi), so the cut values
come from a bisection that is immune to overflow when done in log scale.

The density f0 on [0, e] follows as Im(-1/(x W(-1/x)))/pi, its closed-form
antiderivative gives the CDF, and the Stieltjes/R transform pair closes the
loop with the moment sequence k^k/(k+1)!.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BranchError, ConvergenceError, DomainError, InputError
from .numerics import newton_complex

__all__ = [
    "E_EDGE",
    "NEG_INV_E",
    "LambertCutValue",
    "lambert_w_real",
    "lambert_w_cut",
    "lambert_w_cut_log",
    "lambert_w_principal",
    "f0_density",
    "f0_cdf",
    "mu0_moment",
    "stieltjes_S",
    "r_transform",
    "mp_density",
    "mp_atom",
    "ftheta_edge",
    "ftheta_density",
    "ftheta_density_grid",
]

E_EDGE = math.e
NEG_INV_E = -math.exp(-1.0)

_EPS = 2.220446049250313e-16


def _halley_real(x: float, w: float) -> float:
    target = 1e-15 * max(1.0, abs(x))
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - x
        if abs(f) <= target:
            return w
        wp1 = 1.0 + w
        denom = ew * wp1 - f * (2.0 + w) / (2.0 * wp1)
        dw = f / denom
        w -= dw
        if abs(dw) <= _EPS * (1.0 + abs(w)):
            return w
    if abs(w * math.exp(w) - x) <= 1e-14 * max(1.0, abs(x)):
        return w
    raise ConvergenceError(f"lambert_w_real stalled at x={x!r}", last_iterate=w)


def lambert_w_real(x: float) -> float:
    """Principal branch W(x) for real x >= -1/e.

    Residual |w e^w - x| <= 1e-14 * max(1, |x|).  Halley iteration seeded by
    the branch-point series near -1/e and log(x) - log(log(x)) for large x.
    """
    x = float(x)
    if math.isnan(x):
        raise InputError("lambert_w_real: x is NaN")
    if x < NEG_INV_E:
        raise DomainError(f"lambert_w_real: x={x!r} below -1/e")
    if x == 0.0:
        return 0.0
    ex1 = math.e * x + 1.0
    if ex1 < 0.4:
        p = math.sqrt(max(2.0 * ex1, 0.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
        if p < 1e-3:
            # series truncation alone already beats the residual target here
            return w
    elif x > 3.0:
        lx = math.log(x)
        w = lx - math.log(lx)
    else:
        w = math.log1p(x)
    return _halley_real(x, w)


def _phi(b: float) -> float:
    """log(-w e^w) along the cut parametrization, stable for all b in [0, pi)."""
    if b < 1e-4:
        b2 = b * b
        return -1.0 + 0.5 * b2 + b2 * b2 / 36.0
    return -b / math.tan(b) + math.log(b / math.sin(b))


def _cut_b_from_log(t: float) -> float:
    """Solve phi(b) = t by bisection; phi is strictly increasing on (0, pi)."""
    lo, hi = 0.0, math.pi * (1.0 - 1e-16)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _phi(mid) < t:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def lambert_w_cut_log(t: float) -> tuple[float, float]:
    """Cut boundary value (a, b) of W at z = -e^t, taking t = log(-z) >= -1.

    Working from log(-z) keeps the hard edge reachable: the density at
    x = e^-t only needs t, never the overflowing -1/x itself.
    """
    t = float(t)
    if math.isnan(t):
        raise InputError("lambert_w_cut_log: t is NaN")
    if t < -1.0:
        raise DomainError(f"lambert_w_cut_log: t={t!r} below -1 maps off the cut")
    if t == -1.0:
        return -1.0, 0.0
    b = _cut_b_from_log(t)
    if b < 1e-4:
        b2 = b * b
        a = -1.0 + b2 / 3.0 + b2 * b2 / 45.0
    else:
        a = -b / math.tan(b)
    return a, b


@dataclass(frozen=True)
class LambertCutValue:
    """Upper-boundary value a + ib of W on the cut z <= -1/e, b in [0, pi)."""

    a: float
    b: float
    z: float

    @property
    def w(self) -> complex:
        return complex(self.a, self.b)


def lambert_w_cut(z: float) -> LambertCutValue:
    """W extended continuously from the upper half plane onto z <= -1/e."""
    z = float(z)
    if math.isnan(z):
        raise InputError("lambert_w_cut: z is NaN")
    if z > NEG_INV_E:
        raise DomainError(f"lambert_w_cut: z={z!r} above -1/e is off the cut")
    a, b = lambert_w_cut_log(math.log(-z))
    return LambertCutValue(a, b, z)


def lambert_w_principal(z: complex) -> complex:
    """Principal branch W(z) for complex z off the cut (-inf, -1/e].

    For real z below -1/e use lambert_w_cut, which returns the boundary
    value approached from Im z > 0.
    """
    z = complex(z)
    if z.imag == 0.0:
        if z.real <= NEG_INV_E and z.real != NEG_INV_E:
            raise DomainError("lambert_w_principal: z on the cut, use lambert_w_cut")
        return complex(lambert_w_real(z.real))
    if z.imag < 0.0:
        return lambert_w_principal(z.conjugate()).conjugate()

    ez1 = math.e * z + 1.0
    if abs(ez1) < 0.4:
        p = cmath.sqrt(2.0 * ez1)
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)))
    elif z.real < NEG_INV_E and z.imag < 0.5:
        a, b = lambert_w_cut_log(math.log(abs(z)))
        w = complex(a, b)
    elif abs(z) > 3.0:
        lz = cmath.log(z)
        w = lz - cmath.log(lz)
    else:
        w = cmath.log(1.0 + z)

    target = 1e-15 * max(1.0, abs(z))
    for _ in range(100):
        ew = cmath.exp(w)
        f = w * ew - z
        if abs(f) <= target:
            break
        wp1 = 1.0 + w
        if wp1 == 0:
            raise ConvergenceError("lambert_w_principal hit w = -1", last_iterate=w)
        denom = ew * wp1 - f * (2.0 + w) / (2.0 * wp1)
        dw = f / denom
        w -= dw
        if abs(dw) <= _EPS * (1.0 + abs(w)):
            break
    if abs(w * cmath.exp(w) - z) > 1e-13 * max(1.0, abs(z)):
        raise ConvergenceError(f"lambert_w_principal stalled at z={z!r}", last_iterate=w)
    if not 0.0 <= w.imag < math.pi:
        raise BranchError(f"iteration left the principal branch at z={z!r}")
    return w


def f0_density(x: float) -> float:
    """Limiting spectral density of (1/n) X X* for triangular Wigner X.

    Supported on [0, e]; equals Im(-1/(x W(-1/x)))/pi with W evaluated on
    the upper side of its cut.  Diverges like 1/(x log^2 x) at 0 and
    vanishes like sqrt(e - x) at the soft edge.
    """
    x = float(x)
    if math.isnan(x):
        raise InputError("f0_density: x is NaN")
    if x <= 0.0 or x >= E_EDGE:
        return 0.0
    t = -math.log(x)  # log(-z) for z = -1/x
    if t <= -1.0:
        return 0.0
    a, b = lambert_w_cut_log(t)
    return b / (math.pi * x * (a * a + b * b))


def f0_cdf(x: float) -> float:
    """Distribution function of f0, from the closed-form antiderivative.

    F(x) = -Im[1/W(-1/x) - log W(-1/x)]/pi on (0, e), clamped outside.
    """
    x = float(x)
    if math.isnan(x):
        raise InputError("f0_cdf: x is NaN")
    if x <= 0.0:
        return 0.0
    if x >= E_EDGE:
        return 1.0
    t = -math.log(x)
    if t <= -1.0:
        return 1.0
    a, b = lambert_w_cut_log(t)
    val = (b / (a * a + b * b) + math.atan2(b, a)) / math.pi
    return min(max(val, 0.0), 1.0)


def mu0_moment(k: int) -> float:
    """k-th moment of f0: k^k / (k+1)!, with the 0^0 = 1 convention."""
    if not isinstance(k, (int,)) or isinstance(k, bool):
        raise InputError("mu0_moment: k must be an integer")
    if k < 0:
        raise DomainError("mu0_moment: k must be nonnegative")
    if k == 0:
        return 1.0
    if k <= 120:
        return k**k / math.factorial(k + 1)
    return math.exp(k * math.log(k) - math.lgamma(k + 2))


def stieltjes_S(z: complex) -> complex:
    """Stieltjes transform S(z) = int (x - z)^-1 f0(x) dx = -1 + e^{W(-1/z)}.

    Defined for complex z off the support [0, e]; large-z expansion is
    -sum_k mu0_moment(k) z^-(k+1).
    """
    z = complex(z)
    if z.imag == 0.0:
        zr = z.real
        if 0.0 <= zr <= E_EDGE:
            raise DomainError(f"stieltjes_S: z={zr!r} lies on the support [0, e]")
        return complex(-1.0 + math.exp(lambert_w_real(-1.0 / zr)))
    w = lambert_w_principal(-1.0 / z)
    return -1.0 + cmath.exp(w)


def r_transform(z: complex) -> complex:
    """R-transform of f0: -1/((1-z) log(1-z)) - 1/z, with R(0) = 1/2.

    For |z| <= 1/2 the subtraction is done through the series
    R = A/(1 - zA), A(z) = sum_{j>=1} z^(j-1)/(j(j+1)), which has no
    cancellation; beyond that the closed form is safe.
    """
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError("r_transform: |z| must be < 1")
    if abs(z) <= 0.5:
        a = 0.0 + 0.0j
        zp = 1.0 + 0.0j
        for j in range(1, 200):
            contrib = zp / (j * (j + 1))
            a += contrib
            if abs(contrib) < 1e-18 * abs(a):
                break
            zp *= z
        return a / (1.0 - z * a)
    lg = cmath.log(1.0 - z)
    return -1.0 / ((1.0 - z) * lg) - 1.0 / z


def mp_atom(c: float) -> float:
    """Mass of the atom at 0 in the Marchenko-Pastur law: max(0, 1 - 1/c)."""
    c = float(c)
    if not c > 0.0:
        raise DomainError("mp_atom: c must be positive")
    return max(0.0, 1.0 - 1.0 / c)


def mp_density(x: float, c: float) -> float:
    """Continuous part of the Marchenko-Pastur density with ratio c > 0.

    sqrt((b-x)(x-a)) / (2 pi c x) on [a, b] = [(1-sqrt c)^2, (1+sqrt c)^2];
    the point mass at 0 for c > 1 is reported by mp_atom, not here.
    """
    x = float(x)
    c = float(c)
    if not c > 0.0:
        raise DomainError("mp_density: c must be positive")
    if math.isnan(x):
        raise InputError("mp_density: x is NaN")
    sc = math.sqrt(c)
    a = (1.0 - sc) ** 2
    b = (1.0 + sc) ** 2
    if x <= a or x >= b:
        return 0.0
    return math.sqrt((b - x) * (x - a)) / (2.0 * math.pi * c * x)


def ftheta_edge(theta: float) -> float:
    """Upper support edge (1 + theta)^(1 + 1/theta) of the theta > 1 law."""
    theta = float(theta)
    if not theta > 1.0:
        raise DomainError("ftheta_edge: theta must be > 1")
    return (1.0 + theta) ** (1.0 + 1.0 / theta)


def _J(z: complex, theta: float) -> complex:
    return theta * (z + 1.0) * cmath.exp(cmath.log((z + 1.0) / z) / theta)


def _J_prime(z: complex, theta: float) -> complex:
    return _J(z, theta) * ((1.0 + 1.0 / theta) / (z + 1.0) - 1.0 / (theta * z))


_FTHETA_SEED_IM = 0.2


def _ftheta_root(x: float, theta: float, seed: complex) -> complex:
    tol = 1e-12 * max(1.0, x)
    root = newton_complex(
        lambda z: _J(z, theta) - x, lambda z: _J_prime(z, theta), seed, tol=tol
    )
    if root.imag <= 0.0:
        raise BranchError(f"ftheta root landed in the closed lower half plane at x={x!r}")
    return root


def _ftheta_root_robust(x: float, theta: float, edge: float) -> complex:
    seed = complex(1.0 / theta, _FTHETA_SEED_IM)
    try:
        return _ftheta_root(x, theta, seed)
    except (ConvergenceError, BranchError):
        pass
    # walk in from near the critical point, reusing each root as the next seed
    xc = 0.95 * edge
    root = _ftheta_root(xc, theta, seed)
    while xc > x:
        xc = max(x, 0.7 * xc)
        root = _ftheta_root(xc, theta, root)
    return root


def ftheta_density(x: float, theta: float) -> float:
    """Limiting density of (1/n) X X* for the theta > 1 triangular family.

    Computed as (theta / (pi x)) Im I(x) where I(x) is the upper-half-plane
    root of theta (z+1) ((z+1)/z)^(1/theta) = x.  Zero outside
    (0, (1+theta)^(1+1/theta)).
    """
    x = float(x)
    theta = float(theta)
    if not theta > 1.0:
        raise DomainError("ftheta_density: theta must be > 1")
    if math.isnan(x):
        raise InputError("ftheta_density: x is NaN")
    edge = ftheta_edge(theta)
    if x <= 0.0 or x >= edge:
        return 0.0
    root = _ftheta_root_robust(x, theta, edge)
    return theta * root.imag / (math.pi * x)


def ftheta_density_grid(xs, theta: float) -> list[float]:
    """ftheta_density on many abscissae, sharing Newton seeds between
    neighbours (continuation from the edge inward)."""
    theta = float(theta)
    if not theta > 1.0:
        raise DomainError("ftheta_density_grid: theta must be > 1")
    edge = ftheta_edge(theta)
    order = sorted(range(len(xs)), key=lambda i: -float(xs[i]))
    out = [0.0] * len(xs)
    seed = complex(1.0 / theta, _FTHETA_SEED_IM)
    for i in order:
        x = float(xs[i])
        if x <= 0.0 or x >= edge:
            continue
        try:
            root = _ftheta_root(x, theta, seed)
        except (ConvergenceError, BranchError):
            root = _ftheta_root_robust(x, theta, edge)
        out[i] = theta * root.imag / (math.pi * x)
        seed = root
    return out
