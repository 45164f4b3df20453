"""Dense linear algebra and quadrature primitives used by every other module.

Matrices are plain complex128 ndarrays.  The SVD and QR are delegated to
LAPACK; everything here adds the error contracts the rest of the package
relies on (validated input, deterministic exceptions, certified quadrature).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyError, ConvergenceError, DegeneracyError, InputError

__all__ = [
    "QuadratureRule",
    "integrate",
    "newton_complex",
    "qr_unitary",
    "singular_values",
]

_EPS = np.finfo(float).eps


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise InputError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a.view(np.float64))):
        raise InputError("matrix contains non-finite entries")
    return a


def singular_values(m) -> np.ndarray:
    """Singular values of a dense complex matrix, descending.

    Returns min(rows, cols) nonnegative reals.  Raises InputError on
    non-finite entries and ConvergenceError if the LAPACK iteration fails.
    """
    a = _as_matrix(m)
    try:
        s = np.linalg.svd(a, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD did not converge: {exc}") from exc
    return s


def qr_unitary(m) -> tuple[np.ndarray, np.ndarray]:
    """QR factorization of a square matrix with R's diagonal real positive.

    The phase convention makes the factorization unique, which is what turns
    QR of a Ginibre draw into a Haar-distributed unitary.  Raises
    DegeneracyError when a diagonal entry of R is numerically zero.
    """
    a = _as_matrix(m)
    n, nc = a.shape
    if n != nc:
        raise InputError(f"qr_unitary needs a square matrix, got {a.shape}")
    q, r = np.linalg.qr(a)
    d = np.diagonal(r).copy()
    tol = n * _EPS * max(np.abs(d).max(), 1e-300)
    if np.any(np.abs(d) < tol):
        raise DegeneracyError("rank-deficient matrix: zero diagonal in R")
    ph = d / np.abs(d)
    q = q * ph[np.newaxis, :]
    r = r * np.conj(ph)[:, np.newaxis]
    return q, r


def newton_complex(
    f: Callable[[complex], complex],
    fprime: Callable[[complex], complex],
    z0: complex,
    tol: float = 1e-12,
    max_iter: int = 100,
) -> complex:
    """Damped Newton iteration for a complex root of f.

    The step is halved (up to 30 times) while |f| does not decrease, which
    keeps iterates from jumping across branch cuts.  Raises ConvergenceError
    with the last iterate attached when the budget runs out.
    """
    if not (tol > 0 and max_iter >= 1):
        raise InputError("tol must be positive and max_iter >= 1")
    z = complex(z0)
    fz = f(z)
    for _ in range(max_iter):
        if abs(fz) <= tol:
            return z
        dfz = fprime(z)
        if dfz == 0:
            raise ConvergenceError("zero derivative at iterate", last_iterate=z)
        step = fz / dfz
        for _ in range(30):
            cand = z - step
            fc = f(cand)
            if abs(fc) < abs(fz):
                break
            step /= 2
        else:
            raise ConvergenceError(
                "damping exhausted without decreasing |f|", last_iterate=z
            )
        z, fz = cand, fc
    if abs(fz) <= tol:
        return z
    raise ConvergenceError(
        f"no convergence after {max_iter} iterations (|f|={abs(fz):.3e})",
        last_iterate=z,
    )


@dataclass(frozen=True)
class QuadratureRule:
    """Tolerances and budget for integrate().

    kind selects the domain handling: "finite-adaptive" bisects panels of a
    bounded interval, "semi-infinite-exp-weighted" additionally splits
    [0, inf) at 1, integrates (0, 1) under x = exp(-t) (which absorbs log^k
    endpoint singularities) and (1, inf) by Gauss-Laguerre of increasing
    order.  A panel converges when its error estimate is below
    max(abs_tol share, rel_tol * |value|, roundoff floor).
    """

    kind: str = "finite-adaptive"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_depth: int = 40

    def __post_init__(self):
        if self.kind not in ("finite-adaptive", "semi-infinite-exp-weighted"):
            raise InputError(f"unknown quadrature kind: {self.kind!r}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise InputError("quadrature tolerances must be positive")
        if self.max_depth < 1:
            raise InputError("max_depth must be >= 1")


_GAUSS_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _leggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _GAUSS_CACHE:
        _GAUSS_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GAUSS_CACHE[n]


_LAGUERRE_ORDERS = (24, 32, 48, 64, 96)
_LAG_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def _laggauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    if n not in _LAG_CACHE:
        _LAG_CACHE[n] = np.polynomial.laguerre.laggauss(n)
    return _LAG_CACHE[n]


def _panel(f, a: float, b: float) -> tuple[float, float, float]:
    """Gauss-Legendre 15/30 estimates on [a, b]: (value, error, |f| scale)."""
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    x15, w15 = _leggauss(15)
    x30, w30 = _leggauss(30)
    y15 = np.array([f(mid + h * t) for t in x15], dtype=float)
    y30 = np.array([f(mid + h * t) for t in x30], dtype=float)
    i15 = h * float(w15 @ y15)
    i30 = h * float(w30 @ y30)
    scale = h * float(w30 @ np.abs(y30))
    return i30, abs(i30 - i15), scale


def _adaptive_finite(f, a: float, b: float, rule: QuadratureRule) -> tuple[float, float]:
    """Adaptive bisection; returns (value, error bound) or raises AccuracyError."""
    if not (math.isfinite(a) and math.isfinite(b)):
        raise InputError("finite-adaptive quadrature needs finite endpoints")
    if a == b:
        return 0.0, 0.0
    total_w = abs(b - a)
    value = 0.0
    err = 0.0
    stack = [(a, b, 0)]
    while stack:
        lo, hi, depth = stack.pop()
        v, e, scale = _panel(f, lo, hi)
        floor = 50.0 * _EPS * scale
        allow = max(rule.abs_tol * abs(hi - lo) / total_w, rule.rel_tol * abs(v), floor)
        if e <= allow or depth >= rule.max_depth:
            value += v
            err += e
        else:
            mid = 0.5 * (lo + hi)
            stack.append((lo, mid, depth + 1))
            stack.append((mid, hi, depth + 1))
    if err > max(rule.abs_tol, rule.rel_tol * abs(value), 100.0 * _EPS * abs(value)):
        raise AccuracyError(
            f"quadrature error bound {err:.3e} exceeds tolerance", value, err
        )
    return value, err


def _tail_gauss_laguerre(f, rule: QuadratureRule) -> tuple[float, float] | None:
    """integral of f on (1, inf) by Gauss-Laguerre of increasing order.

    Returns None when the order sequence does not settle (caller falls back
    to dyadic panels).  Weights below ~e^-360 underflow past order 96, hence
    the cap.
    """
    prev = None
    for m in _LAGUERRE_ORDERS:
        x, w = _laggauss(m)
        vals = np.array([f(1.0 + u) for u in x], dtype=float)
        with np.errstate(over="ignore"):
            terms = w * np.exp(x) * vals
        if not np.all(np.isfinite(terms)):
            return None
        cur = float(np.sum(terms))
        if prev is not None:
            e = abs(cur - prev)
            if e <= max(0.5 * rule.abs_tol, rule.rel_tol * abs(cur),
                        50.0 * _EPS * float(np.sum(np.abs(terms)))):
                return cur, e
        prev = cur
    return None


def _dyadic_tail(f, lo: float, rule: QuadratureRule, transform=None) -> tuple[float, float]:
    """Sum adaptive panels [lo,lo+1],[+1,+2],[+2,+4],... until negligible."""
    sub = QuadratureRule("finite-adaptive", rule.abs_tol / 4, rule.rel_tol,
                         rule.max_depth)
    g = f if transform is None else transform
    value = 0.0
    err = 0.0
    left, width = lo, 1.0
    quiet = 0
    while left < 745.0:
        right = min(left + width, 745.0)
        v, e = _adaptive_finite(g, left, right, sub)
        value += v
        err += e
        if abs(v) < max(rule.abs_tol / 8, rule.rel_tol * abs(value) / 8):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        left = right
        width = min(2 * width, 64.0)
    return value, err


def integrate(f: Callable[[float], float], lo: float, hi: float,
              rule: QuadratureRule | None = None) -> float:
    """Definite integral of a real-valued f over (lo, hi), hi may be inf.

    Endpoints are never evaluated (all rules are open), so integrable
    endpoint singularities are tolerated.  Raises AccuracyError (carrying
    the best estimate and its bound) when the tolerances cannot be met.
    """
    if rule is None:
        rule = QuadratureRule(
            "semi-infinite-exp-weighted" if math.isinf(hi) else "finite-adaptive"
        )
    if math.isnan(lo) or math.isnan(hi):
        raise InputError("integration endpoints must not be NaN")
    if not math.isinf(hi):
        if rule.kind != "finite-adaptive":
            raise InputError("finite interval needs a finite-adaptive rule")
        value, _ = _adaptive_finite(f, lo, hi, rule)
        return value
    if rule.kind != "semi-infinite-exp-weighted":
        raise InputError("[lo, inf) needs a semi-infinite-exp-weighted rule")
    if not math.isfinite(lo):
        raise InputError("lower endpoint must be finite")

    shifted = f if lo == 0.0 else (lambda x: f(lo + x))
    sub = QuadratureRule("finite-adaptive", rule.abs_tol / 3, rule.rel_tol,
                         rule.max_depth)

    # (0, 1) under x = exp(-t): the Jacobian exp(-t) tames log^k blowup at 0.
    low_val, low_err = _dyadic_tail(
        shifted, 0.0, sub, transform=lambda t: shifted(math.exp(-t)) * math.exp(-t)
    )

    gl = _tail_gauss_laguerre(shifted, sub)
    if gl is None:
        high_val, high_err = _dyadic_tail(lambda u: shifted(1.0 + u), 0.0, sub)
    else:
        high_val, high_err = gl

    value = low_val + high_val
    err = low_err + high_err
    if err > max(rule.abs_tol, rule.rel_tol * abs(value), 100.0 * _EPS * abs(value)):
        raise AccuracyError(
            f"quadrature error bound {err:.3e} exceeds tolerance", value, err
        )
    return value
