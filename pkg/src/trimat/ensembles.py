"""Samplers for triangular matrix ensembles and Monte Carlo drivers.

All randomness flows through RngState, a (seed, stream) pair mapped onto a
numpy PCG64 generator.  Replica r of a Monte Carlo run uses stream base+r,
so runs are reproducible independently of how replicas are scheduled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, InputError
from .numerics import qr_unitary, singular_values

__all__ = [
    "RngState",
    "EnsembleParams",
    "SpectrumSample",
    "EmpiricalDistribution",
    "sample_standard_complex_gaussian",
    "sample_gamma",
    "sample_matrix",
    "spectrum",
    "ks_statistic",
    "mc_moment",
    "sample_haar_unitary",
]

_MASK64 = (1 << 64) - 1

KIND_WIGNER = "triangular-wigner"
KIND_THETA_B = "theta-b"
LAW_GAUSSIAN = "standard-complex-gaussian"
LAW_UNIFORM_PHASE = "uniform-phase-unit-modulus"


@dataclass(frozen=True)
class RngState:
    """Deterministic generator state: 64-bit seed plus 64-bit stream id.

    Identical (seed, stream) pairs produce identical draw sequences on any
    platform running the same numpy version; replica(r) shifts the stream.
    """

    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise InputError(f"RngState.{name} must be an integer")
            if not 0 <= v <= _MASK64:
                raise InputError(f"RngState.{name} must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def replica(self, r: int) -> "RngState":
        if r < 0:
            raise InputError("replica index must be nonnegative")
        return RngState(self.seed, (self.stream + r) & _MASK64)


@dataclass(frozen=True)
class EnsembleParams:
    """Which triangular ensemble to draw.

    kind "triangular-wigner": i.i.d. variance-1 entries on and below the
    diagonal, entry_law selecting standard complex Gaussian or uniform-phase
    unit modulus.  kind "theta-b": strictly-lower entries standard complex
    Gaussian, diagonal entry k with squared modulus Gamma(theta*(k-1)+b, 1)
    and independent uniform phase.
    """

    n: int
    kind: str = KIND_WIGNER
    theta: float = 0.0
    b: float = 1.0
    entry_law: str = LAW_GAUSSIAN

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise InputError("EnsembleParams.n must be a positive integer")
        if self.kind not in (KIND_WIGNER, KIND_THETA_B):
            raise InputError(f"unknown ensemble kind: {self.kind!r}")
        if self.entry_law not in (LAW_GAUSSIAN, LAW_UNIFORM_PHASE):
            raise InputError(f"unknown entry law: {self.entry_law!r}")
        if self.kind == KIND_THETA_B:
            if self.entry_law != LAW_GAUSSIAN:
                raise InputError("entry_law applies to the triangular-wigner kind only")
            if not self.theta >= 0.0:
                raise InputError("theta must be >= 0")
            if not self.b > 0.0:
                raise InputError("b must be > 0")

    def shape_params(self) -> np.ndarray:
        """Diagonal Gamma shapes c_k = theta*(k-1) + b, k = 1..n."""
        return self.theta * np.arange(self.n, dtype=float) + self.b


@dataclass(frozen=True)
class SpectrumSample:
    """Eigenvalues of (1/n) X X*, descending, with the state that made them."""

    params: EnsembleParams
    values: np.ndarray = field(repr=False)
    seed_used: RngState = RngState(0)

    def __len__(self) -> int:
        return len(self.values)


def sample_standard_complex_gaussian(rng: RngState, size=None):
    """Standard complex Gaussian: Re and Im independent N(0, 1/2), E|z|^2 = 1."""
    g = rng.generator()
    return _complex_gaussians(g, size)


def _complex_gaussians(g: np.random.Generator, size=None):
    if size is None:
        re, im = g.standard_normal(2)
        return complex(re, im) / math.sqrt(2.0)
    z = g.standard_normal(size) + 1j * g.standard_normal(size)
    return z / math.sqrt(2.0)


def _unit_circle(g: np.random.Generator, size) -> np.ndarray:
    """Uniform phases with np.abs(z) == 1 bit-exactly.

    cos/sin of a random angle land within one ulp of the circle, which leaves
    np.abs off 1.0 for ~30% of draws, and z/|z| has non-unit fixed points.
    Nudge the larger component by ulps until np.abs rounds to exactly 1: its
    sensitivity d|z|/d(big) is ~1 everywhere, so a couple of steps suffice and
    only the modulus moves, never the phase (by more than ~2e-16).
    """
    theta = 2.0 * np.pi * g.random(size)
    c, s = np.cos(theta), np.sin(theta)
    ac, as_ = np.abs(c), np.abs(s)
    swap = ac < as_
    big = np.where(swap, as_, ac)
    small = np.where(swap, ac, as_)

    def assemble(b):
        re = np.copysign(np.where(swap, small, b), c)
        im = np.copysign(np.where(swap, b, small), s)
        return re + 1j * im

    z = assemble(big)
    a = np.abs(z)
    for _ in range(200):
        need = a != 1.0
        if not np.any(need):
            return z
        toward = np.where(a > 1.0, 0.0, np.inf)
        big = np.where(need, np.nextafter(big, toward), big)
        z = assemble(big)
        a = np.abs(z)
    raise ConvergenceError("unit-circle construction failed to settle")


def sample_gamma(c, rng: RngState, size=None):
    """Gamma(c, 1) draws by Marsaglia-Tsang, with the U^(1/c) boost for c < 1.

    c may be a scalar or an array (one shape per draw); size applies only to
    scalar c.
    """
    g = rng.generator()
    scalar = np.isscalar(c) and size is None
    if np.isscalar(c):
        shapes = np.full(1 if size is None else int(size), float(c))
    else:
        if size is not None:
            raise InputError("size is only valid with scalar c")
        shapes = np.asarray(c, dtype=float).ravel()
    if shapes.size and not np.all(shapes > 0):
        raise InputError("gamma shape c must be > 0")
    out = _gamma_mt(g, shapes)
    if scalar:
        return float(out[0])
    if np.isscalar(c):
        return out
    return out.reshape(np.asarray(c).shape)


def _gamma_mt(g: np.random.Generator, shapes: np.ndarray) -> np.ndarray:
    """Vectorized Marsaglia-Tsang; boosted shapes c+1 are used when c < 1."""
    small = shapes < 1.0
    d = np.where(small, shapes + 1.0, shapes) - 1.0 / 3.0
    out = np.empty_like(d)
    pending = np.arange(d.size)
    while pending.size:
        dd = d[pending]
        x = g.standard_normal(pending.size)
        u = g.random(pending.size)
        t = 1.0 + x / np.sqrt(9.0 * dd)
        v = t * t * t
        with np.errstate(divide="ignore", invalid="ignore"):
            ok = (t > 0.0) & (np.log(u) < 0.5 * x * x + dd * (1.0 - v + np.log(v)))
        accepted = pending[ok]
        out[accepted] = d[accepted] * v[ok]
        pending = pending[~ok]
    ns = int(np.count_nonzero(small))
    if ns:
        u = g.random(ns)
        out[small] *= u ** (1.0 / shapes[small])
    return out


def sample_matrix(params: EnsembleParams, rng: RngState) -> np.ndarray:
    """One draw of the lower-triangular matrix X for the given ensemble."""
    g = rng.generator()
    n = params.n
    if params.kind == KIND_WIGNER:
        if params.entry_law == LAW_GAUSSIAN:
            full = _complex_gaussians(g, (n, n))
        else:
            full = _unit_circle(g, (n, n))
        return np.tril(full)
    # theta-b: Gaussian strictly below, Gamma-modulus diagonal with uniform phase
    full = _complex_gaussians(g, (n, n))
    x = np.tril(full, k=-1)
    r2 = _gamma_mt(g, params.shape_params())
    phase = _unit_circle(g, n)
    np.fill_diagonal(x, np.sqrt(r2) * phase)
    return x


def spectrum(params: EnsembleParams, rng: RngState) -> SpectrumSample:
    """Squared singular values of X divided by n, sorted descending."""
    x = sample_matrix(params, rng)
    s = singular_values(x)
    values = (s * s) / params.n
    return SpectrumSample(params=params, values=values, seed_used=rng)


class EmpiricalDistribution:
    """Sorted sample with the usual right-continuous empirical CDF."""

    def __init__(self, values):
        v = np.asarray(values, dtype=float).ravel()
        if v.size == 0:
            raise InputError("empirical distribution needs at least one point")
        if not np.all(np.isfinite(v)):
            raise InputError("sample contains non-finite values")
        self.values = np.sort(v)

    def __len__(self) -> int:
        return len(self.values)

    def cdf(self, x) -> float:
        return np.searchsorted(self.values, x, side="right") / len(self.values)


def ks_statistic(emp: EmpiricalDistribution, cdf) -> float:
    """Two-sided Kolmogorov-Smirnov statistic sup |F_emp - cdf|.

    Evaluated at the sample points with the step function taken from both
    sides, which is where the sup of a cadlag difference is attained.
    """
    if not isinstance(emp, EmpiricalDistribution):
        emp = EmpiricalDistribution(emp)
    n = len(emp)
    try:
        f = np.asarray(cdf(emp.values), dtype=float)
        if f.shape != emp.values.shape:
            raise TypeError
    except (TypeError, ValueError):
        f = np.array([float(cdf(float(x))) for x in emp.values])
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - f)
    d_minus = np.max(f - (i - 1) / n)
    return float(max(d_plus, d_minus))


def mc_moment(params: EnsembleParams, k: int, reps: int, rng: RngState) -> float:
    """Monte Carlo estimate of int x^k dESD: mean over reps of (1/n) sum v^k.

    Replica r uses rng.replica(r); summation runs in fixed replica order so
    the result is bit-deterministic.
    """
    if not (isinstance(k, int) and k >= 1):
        raise InputError("k must be an integer >= 1")
    if not (isinstance(reps, int) and reps >= 1):
        raise InputError("reps must be an integer >= 1")
    acc = 0.0
    for r in range(reps):
        sample = spectrum(params, rng.replica(r))
        acc += float(np.mean(sample.values**k))
    return acc / reps


def sample_haar_unitary(n: int, rng: RngState) -> np.ndarray:
    """Haar unitary: QR of a Ginibre matrix with R's diagonal made positive."""
    if not (isinstance(n, int) and n >= 1):
        raise InputError("n must be a positive integer")
    g = rng.generator()
    z = _complex_gaussians(g, (n, n))
    q, _ = qr_unitary(z)
    return q
