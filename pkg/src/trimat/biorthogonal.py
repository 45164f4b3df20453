"""Finite-n eigenvalue structure for the triangular ensembles.

Joint eigenvalue densities of X X*/1 at finite n, the moment matrix built
from log-weighted Laguerre integrals together with its Stirling-number LU
structure, the induced determinantal kernel, and two smaller exact objects:
interlacing-pattern volumes and a unitary minor integral with a closed form.

The moment matrix carries the weight x^(b-1): the kernel's (xy)^((b-1)/2)
prefactor and the trace/reproducing identities only close under that
convention, and it reduces to the plain log-moment matrix at b = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .ensembles import RngState
from .errors import BudgetError, DegeneracyError, InputError
from .numerics import QuadratureRule, integrate

__all__ = [
    "StirlingTable",
    "stirling_unsigned",
    "g_entry",
    "MomentMatrixG",
    "det_G",
    "KernelCoeffs",
    "kernel_eval",
    "correlation",
    "joint_density",
    "wishart_joint_density",
    "lu_identity_residual",
    "GTPattern",
    "gt_volume",
    "bari_K",
    "bari_haar_mc",
]

STIRLING_CAP = 64
KERNEL_N_CAP = 8

_G_RULE = QuadratureRule("semi-infinite-exp-weighted", abs_tol=1e-12, rel_tol=1e-12, max_depth=48)


class StirlingTable:
    """Unsigned Stirling numbers of the first kind, exact integers.

    Row n holds |s(n, k)| for k = 0..n; |s(n,k)| counts permutations of n
    elements with k cycles.  Rows are grown on demand up to STIRLING_CAP.
    """

    def __init__(self, cap: int = STIRLING_CAP):
        self.cap = cap
        self._rows = [[1]]  # |s(0,0)| = 1

    def row(self, n: int):
        if n > self.cap:
            raise BudgetError(f"Stirling row {n} beyond cap {self.cap}")
        while len(self._rows) <= n:
            m = len(self._rows)
            prev = self._rows[m - 1]
            row = [0] * (m + 1)
            for k in range(1, m + 1):
                row[k] = prev[k - 1] + (m - 1) * (prev[k] if k < m else 0)
            self._rows.append(row)
        return self._rows[n]

    def value(self, n: int, k: int) -> int:
        if n < 0 or k < 0 or k > n:
            raise InputError("need 0 <= k <= n")
        return self.row(n)[k]


_STIRLING = StirlingTable()


def stirling_unsigned(n: int, k: int) -> int:
    """|s(n,k)| via the recurrence |s(n,k)| = |s(n-1,k-1)| + (n-1)|s(n-1,k)|."""
    if not (isinstance(n, int) and isinstance(k, int)):
        raise InputError("n and k must be integers")
    return _STIRLING.value(n, k)


def _falling(k: int, r: int) -> int:
    out = 1
    for t in range(r):
        out *= k - t
    return out


def g_entry(j: int, k: int, b: float = 1.0) -> float:
    """Moment-matrix entry: integral of x^(j+b-1) (log x)^k e^(-x) over (0, inf)."""
    if not (isinstance(j, int) and isinstance(k, int) and j >= 0 and k >= 0):
        raise InputError("j and k must be nonnegative integers")
    if not b > 0:
        raise InputError("b must be > 0")
    p = j + b - 1.0

    def f(x):
        return x**p * np.log(x) ** k * np.exp(-x)

    return integrate(f, 0.0, math.inf, rule=_G_RULE)


@dataclass(frozen=True, eq=False)
class MomentMatrixG:
    """Matrix of g_entry values for 0 <= j,k < n.  Immutable once built."""

    n: int
    b: float
    entries: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n: int, b: float = 1.0) -> "MomentMatrixG":
        if not (isinstance(n, int) and n >= 1):
            raise InputError("n must be a positive integer")
        if n > KERNEL_N_CAP:
            raise BudgetError(f"moment matrix limited to n <= {KERNEL_N_CAP}; conditioning degrades factorially")
        if not b > 0:
            raise InputError("b must be > 0")
        g = np.array([[g_entry(j, k, b) for k in range(n)] for j in range(n)])
        return cls(n=n, b=float(b), entries=g)


def _lu_extended(a: np.ndarray):
    """LU with partial pivoting in 80-bit extended precision.

    Returns (lu, perm, sign) with L unit-lower and U packed together.  The
    extra mantissa bits matter here: the moment matrix is poorly scaled
    (entries spanning ~7 decades by n = 8) and the determinant and inverse
    need several digits beyond what float64 elimination leaves over.
    """
    lu = np.array(a, dtype=np.longdouble)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1.0
    for col in range(n):
        piv = col + int(np.argmax(np.abs(lu[col:, col])))
        if lu[piv, col] == 0.0:
            raise DegeneracyError("numerically singular matrix")
        if piv != col:
            lu[[col, piv]] = lu[[piv, col]]
            perm[[col, piv]] = perm[[piv, col]]
            sign = -sign
        lu[col + 1 :, col] /= lu[col, col]
        lu[col + 1 :, col + 1 :] -= np.outer(lu[col + 1 :, col], lu[col, col + 1 :])
    return lu, perm, sign


def _lu_solve(lu: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array(rhs, dtype=np.longdouble)
    for col in range(n):  # forward, unit lower
        x[col + 1 :] -= np.outer(lu[col + 1 :, col], x[col])
    for col in range(n - 1, -1, -1):  # back substitution
        x[col] /= lu[col, col]
        if col:
            x[:col] -= np.outer(lu[:col, col], x[col])
    return x


def det_G(n: int, b: float = 1.0) -> float:
    """Determinant of the moment matrix, via extended-precision LU."""
    g = MomentMatrixG.build(n, b)
    lu, _, sign = _lu_extended(g.entries)
    det = np.longdouble(sign)
    for j in range(n):
        det *= lu[j, j]
    return float(det)


@dataclass(frozen=True, eq=False)
class KernelCoeffs:
    """Inverse of the moment matrix; the kernel's coefficient table."""

    n: int
    b: float
    c: np.ndarray = field(repr=False)

    @classmethod
    def build(cls, n: int, b: float = 1.0) -> "KernelCoeffs":
        g = MomentMatrixG.build(n, b)
        a = np.array(g.entries, dtype=np.longdouble)
        lu, perm, _ = _lu_extended(a)
        eye = np.eye(n, dtype=np.longdouble)
        c = _lu_solve(lu, eye[perm])
        # one Newton sweep; the residual gate catches any conditioning loss
        c = c + c @ (eye - a @ c)
        resid = float(np.max(np.abs(a @ c - eye)))
        if resid > 1e-8:
            raise DegeneracyError(f"moment-matrix inverse residual {resid:.3e} exceeds 1e-8")
        return cls(n=n, b=float(g.b), c=np.array(c, dtype=float))


def kernel_eval(x: float, y: float, coeffs: KernelCoeffs) -> float:
    """Determinantal kernel K_n(x, y).

    K_n(x,y) = e^(-(x+y)/2) (xy)^((b-1)/2) * sum_{j,k} c[j,k] (log y)^j x^k,
    the polynomial indices running over 0..n-1.  Not symmetric in (x, y):
    one slot carries powers of x, the other powers of log y.
    """
    if not (x > 0 and y > 0):
        raise InputError("kernel arguments must be positive")
    n, b = coeffs.n, coeffs.b
    logy_pow = np.log(y) ** np.arange(n)
    x_pow = x ** np.arange(n)
    core = float(logy_pow @ coeffs.c @ x_pow)
    return math.exp(-(x + y) / 2.0) * (x * y) ** ((b - 1.0) / 2.0) * core


def correlation(points, coeffs: KernelCoeffs) -> float:
    """m-point correlation det[K_n(x_i, x_j)] for m = len(points) <= n."""
    pts = np.asarray(points, dtype=float).ravel()
    if pts.size == 0 or pts.size > coeffs.n:
        raise InputError("need 1 <= len(points) <= n")
    if not np.all(pts > 0):
        raise InputError("points must be positive")
    m = pts.size
    k = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            k[i, j] = kernel_eval(pts[i], pts[j], coeffs)
    return float(np.linalg.det(k))


def _validate_decreasing_positive(x, name="x"):
    v = np.asarray(x, dtype=float).ravel()
    if v.size == 0:
        raise InputError(f"{name} must be nonempty")
    if not np.all(np.isfinite(v)) or not np.all(v > 0):
        raise InputError(f"{name} must be positive and finite")
    if np.any(np.diff(v) >= 0):
        raise InputError(f"{name} must be strictly decreasing")
    return v


def joint_density(x, theta: float, b: float) -> float:
    """Joint eigenvalue density of X X* at a strictly decreasing point.

    theta > 0 uses the pair factors (x_i - x_j)(x_i^theta - x_j^theta) with
    normalization theta^(-n(n-1)/2) / (prod_(j<n) j! * prod_k Gamma(c_k));
    theta = 0 replaces x^theta by log x and the constant by 1/Gamma(b)^n.
    Evaluated in log space so n >= 5 does not underflow the constants.
    """
    v = _validate_decreasing_positive(x)
    if not theta >= 0:
        raise InputError("theta must be >= 0")
    if not b > 0:
        raise InputError("b must be > 0")
    n = v.size
    logx = np.log(v)
    logp = -math.fsum(math.lgamma(j + 1) for j in range(1, n))
    logp += -float(np.sum(v)) + (b - 1.0) * float(np.sum(logx))
    if theta > 0:
        c = theta * np.arange(n) + b
        logp += -0.5 * n * (n - 1) * math.log(theta)
        logp -= math.fsum(math.lgamma(ck) for ck in c)
    else:
        logp -= n * math.lgamma(b)
    # pair factors in log form: x_i^t - x_j^t = x_i^t (1 - e^{t(log x_j - log x_i)})
    # survives large t without overflow and near-coincident points without log(0)
    for i in range(n):
        for j in range(i + 1, n):
            logp += math.log(v[i] - v[j])
            if theta > 0:
                u = -math.expm1(theta * (logx[j] - logx[i]))
                if u == 0.0:
                    return 0.0
                logp += theta * logx[i] + math.log(u)
            else:
                d = logx[i] - logx[j]
                if d == 0.0:
                    return 0.0
                logp += math.log(d)
    return math.exp(logp)


def wishart_joint_density(x, n: int, m: int) -> float:
    """Eigenvalue density of a complex Wishart matrix (n <= m), ordered points."""
    if not (isinstance(n, int) and isinstance(m, int) and 1 <= n <= m):
        raise InputError("need integers 1 <= n <= m")
    v = _validate_decreasing_positive(x)
    if v.size != n:
        raise InputError("point dimension must equal n")
    logp = -math.fsum(math.lgamma(m - n + k) + math.lgamma(k) for k in range(1, n + 1))
    logp += -float(np.sum(v)) + (m - n) * float(np.sum(np.log(v)))
    for i in range(n):
        for j in range(i + 1, n):
            logp += 2.0 * math.log(v[i] - v[j])
    return math.exp(logp)


def lu_identity_residual(j: int, k: int) -> float:
    """Residual of the Stirling reconstruction of g_{j,k} from the first row.

    Both sides come from quadrature: the left side directly, the right side
    through g_{0, k-r} and exact integer coefficients |s(j+1, r+1)| (k)_r.
    """
    if not (isinstance(j, int) and isinstance(k, int) and j >= 0 and k >= 0):
        raise InputError("j and k must be nonnegative integers")
    lhs = g_entry(j, k)
    rhs = math.fsum(
        stirling_unsigned(j + 1, r + 1) * _falling(k, r) * g_entry(0, k - r)
        for r in range(min(j, k) + 1)
    )
    return abs(lhs - rhs)


@dataclass(frozen=True)
class GTPattern:
    """Interlacing triangular array below a fixed top row.

    levels[0] is the top row x (length k); each subsequent row is one
    shorter and interlaces the row above: x_i >= y_i >= x_{i+1}.
    """

    levels: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.levels)
        object.__setattr__(self, "levels", rows)
        if not rows or len(rows[0]) != len(rows):
            raise InputError("need k rows with the top row of length k")
        for r, (top, bot) in enumerate(zip(rows, rows[1:])):
            if len(bot) != len(top) - 1:
                raise InputError("each row must shrink by one")
            for i, y in enumerate(bot):
                if not (top[i] >= y >= top[i + 1]):
                    raise InputError(f"interlacing violated at row {r + 1}, slot {i}")

    @property
    def top(self):
        return self.levels[0]


def gt_volume(x) -> float:
    """Volume of the interlacing-pattern polytope below top row x.

    Product formula prod_{i<j} (x_i - x_j)/(j - i).  Ties collapse the
    polytope to measure zero, so they return 0 rather than raising.
    """
    v = np.asarray(x, dtype=float).ravel()
    if v.size == 0:
        raise InputError("x must be nonempty")
    if not np.all(np.isfinite(v)):
        raise InputError("x must be finite")
    if np.any(np.diff(v) > 0):
        raise InputError("x must be nonincreasing")
    if np.any(np.diff(v) == 0):
        return 0.0
    k = v.size
    out = 1.0
    for i in range(k):
        for j in range(i + 1, k):
            out *= (v[i] - v[j]) / (j - i)
    return out


def bari_K(lam, theta: float) -> float:
    """Closed form of the unitary minor integral over decreasing positive lam.

    Each pair contributes the integral of x^(-theta-1) over (lam_j, lam_i)
    divided by (lam_i - lam_j).  theta below 1e-8 is routed to the log
    branch: the power-branch numerator (lam_j^-t - lam_i^-t)/t cancels
    catastrophically there.
    """
    v = np.asarray(lam, dtype=float).ravel()
    if v.size == 0:
        raise InputError("lam must be nonempty")
    if not np.all(np.isfinite(v)) or not np.all(v > 0):
        raise InputError("lam must be positive and finite")
    if np.any(np.diff(v) == 0):
        raise DegeneracyError("tied entries make the ratio 0/0")
    if np.any(np.diff(v) > 0):
        raise InputError("lam must be strictly decreasing")
    if not theta >= 0:
        raise InputError("theta must be >= 0")
    out = 1.0
    for i in range(v.size):
        for j in range(i + 1, v.size):
            gap = v[i] - v[j]
            if theta < 1e-8:
                out *= (math.log(v[i]) - math.log(v[j])) / gap
            else:
                out *= (v[j] ** -theta - v[i] ** -theta) / (theta * gap)
    return out


_BARI_CHUNK = 1 << 16


def bari_haar_mc(lam, theta: float, reps: int, rng: RngState):
    """Monte Carlo for the unitary minor integral; returns (mean, stderr).

    Averages prod_{i<n} det(a_i)^(-theta-1) over Haar unitaries H, where
    a = H diag(lam) H* and a_i is its leading i x i minor.  Restricted to
    n in {2, 3}: minor determinants are expanded in closed form.
    """
    v = np.asarray(lam, dtype=float).ravel()
    n = v.size
    if n not in (2, 3):
        raise InputError("bari_haar_mc supports n in {2, 3}")
    if not np.all(np.isfinite(v)) or not np.all(v > 0):
        raise InputError("lam must be positive and finite")
    if np.any(np.diff(v) >= 0):
        raise InputError("lam must be strictly decreasing")
    if not (isinstance(reps, int) and reps >= 1):
        raise InputError("reps must be an integer >= 1")
    if not theta >= 0:
        raise InputError("theta must be >= 0")
    g = rng.generator()
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < reps:
        chunk = min(_BARI_CHUNK, reps - done)
        z = (g.standard_normal((chunk, n, n)) + 1j * g.standard_normal((chunk, n, n))) / math.sqrt(2.0)
        q, r = np.linalg.qr(z)
        d = np.einsum("...ii->...i", r)
        q = q * (d.conj() / np.abs(d))[:, None, :]
        a = (q * v) @ np.conj(np.swapaxes(q, 1, 2))
        det_prod = a[:, 0, 0].real
        if n == 3:
            det2 = (a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]).real
            det_prod = det_prod * det2
        vals = det_prod ** (-theta - 1.0)
        total += float(np.sum(vals))
        total_sq += float(np.sum(vals * vals))
        done += chunk
    mean = total / reps
    if reps < 2:
        return mean, math.inf
    var = max(total_sq - reps * mean * mean, 0.0) / (reps - 1)
    return mean, math.sqrt(var / reps)
