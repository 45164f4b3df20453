"""Numbered verification suite behind the verify command and the release tests.

Every check is deterministic: Monte Carlo criteria run from fixed seeds, so
two runs of the suite produce identical observed values and identical
reports.  Each criterion group returns one row per sub-check; a row carries
the expected value, the observed value, the tolerance, and the verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import biorthogonal, ensembles, limitlaws, trees
from .numerics import QuadratureRule, integrate

__all__ = ["CriterionResult", "criterion_groups", "run_criteria"]


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    description: str
    expected: object
    observed: object
    tolerance: object
    passed: bool

    def as_dict(self) -> dict:
        return {
            "id": self.cid,
            "description": self.description,
            "expected": _plain(self.expected),
            "observed": _plain(self.observed),
            "tolerance": _plain(self.tolerance),
            "pass": bool(self.passed),
        }


def _plain(v):
    """numpy scalars -> native Python so the report serializes cleanly."""
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        return float(v)
    return v


def _rel(value: float, reference: float) -> float:
    return abs(value - reference) / abs(reference)


# ---------------------------------------------------------------- 01


_MOMENT_TARGETS = {1: 0.5, 2: 2.0 / 3.0, 3: 9.0 / 8.0, 4: 32.0 / 15.0}


def _crit_moments():
    rows = []
    laws = (
        (ensembles.LAW_GAUSSIAN, "gaussian", 1000),
        (ensembles.LAW_UNIFORM_PHASE, "uniform-phase", 2000),
    )
    for law, tag, stream in laws:
        params = ensembles.EnsembleParams(n=512, entry_law=law)
        rng = ensembles.RngState(12345, stream=stream)
        for k in range(1, 5):
            est = ensembles.mc_moment(params, k, 50, rng)
            target = _MOMENT_TARGETS[k]
            rows.append(CriterionResult(
                cid=f"01-moments-{tag}-k{k}",
                description=f"mean spectral moment k={k}, n=512, 50 replicas, {tag} entries",
                expected=target,
                observed=est,
                tolerance="5% relative",
                passed=_rel(est, target) <= 0.05,
            ))
    return rows


# ---------------------------------------------------------------- 02


def _crit_esd_ks():
    params = ensembles.EnsembleParams(n=2048)
    sample = ensembles.spectrum(params, ensembles.RngState(12345, stream=3000))
    d = ensembles.ks_statistic(ensembles.EmpiricalDistribution(sample.values),
                               limitlaws.f0_cdf)
    return [CriterionResult(
        cid="02-esd-ks",
        description="KS distance of a single n=2048 spectrum to the limiting CDF",
        expected=0.0,
        observed=d,
        tolerance=0.05,
        passed=d <= 0.05,
    )]


# ---------------------------------------------------------------- 03


def _crit_largest_eigenvalue():
    params = ensembles.EnsembleParams(n=2048)
    base = ensembles.RngState(12345, stream=4000)
    tops = [float(ensembles.spectrum(params, base.replica(r)).values[0])
            for r in range(10)]
    mean = sum(tops) / len(tops)
    lo, hi = math.e - 0.15, math.e + 0.05
    return [CriterionResult(
        cid="03-largest-eigenvalue",
        description="mean largest eigenvalue over 10 seeds at n=2048",
        expected=math.e,
        observed=mean,
        tolerance="[e-0.15, e+0.05]",
        passed=lo <= mean <= hi,
    )]


# ---------------------------------------------------------------- 04


def _crit_edge():
    x = math.e - 1e-4
    ratio = limitlaws.f0_density(x) / math.sqrt(1e-4)
    target = math.sqrt(2.0) / (math.pi * math.e ** 1.5)
    rows = [CriterionResult(
        cid="04-edge-soft",
        description="f0(e - 1e-4)/sqrt(1e-4) against the square-root edge constant",
        expected=target,
        observed=ratio,
        tolerance="2% relative",
        passed=_rel(ratio, target) <= 0.02,
    )]
    x = 1e-6
    val = x * math.log(x) ** 2 * limitlaws.f0_density(x)
    rows.append(CriterionResult(
        cid="04-edge-hard",
        description="x (log x)^2 f0(x) at x = 1e-6 against its x -> 0 limit",
        expected=1.0,
        observed=val,
        tolerance="15% relative",
        passed=_rel(val, 1.0) <= 0.15,
    ))
    return rows


# ---------------------------------------------------------------- 05


def _crit_stieltjes():
    series = sum(limitlaws.mu0_moment(k) * 10.0 ** (-k - 1) for k in range(41))
    resid = abs(limitlaws.stieltjes_S(10.0) + series)
    rows = [CriterionResult(
        cid="05-stieltjes-series",
        description="Stieltjes transform at z=10 against the 41-term moment series",
        expected=0.0,
        observed=resid,
        tolerance=1e-12,
        passed=resid <= 1e-12,
    )]
    worst = 0.0
    for z in (0.1 + 0.0j, 0.2j, 0.3 + 0.1j):
        k = limitlaws.r_transform(z) + 1.0 / z
        worst = max(worst, abs(limitlaws.stieltjes_S(k) + z))
    rows.append(CriterionResult(
        cid="05-stieltjes-r-inverse",
        description="max |S(R(z) + 1/z) + z| over three reference points",
        expected=0.0,
        observed=worst,
        tolerance=1e-10,
        passed=worst <= 1e-10,
    ))
    return rows


# ---------------------------------------------------------------- 06


def _superfactorial(n: int) -> int:
    out = 1
    for j in range(1, n):
        out *= math.factorial(j)
    return out


def _crit_det_g():
    worst = 0.0
    for n in range(1, 7):
        worst = max(worst, _rel(biorthogonal.det_G(n), float(_superfactorial(n))))
    rows = [CriterionResult(
        cid="06-det-g-small",
        description="max relative error of det G(n) vs 1!2!...(n-1)!, b=1, n <= 6",
        expected=0.0,
        observed=worst,
        tolerance=1e-6,
        passed=worst <= 1e-6,
    )]
    r8 = _rel(biorthogonal.det_G(8), float(_superfactorial(8)))
    rows.append(CriterionResult(
        cid="06-det-g-n8",
        description="relative error of det G(8) vs 1!2!...7!, b=1",
        expected=0.0,
        observed=r8,
        tolerance=1e-4,
        passed=r8 <= 1e-4,
    ))
    return rows


# ---------------------------------------------------------------- 07


def _crit_stirling_lu():
    worst = max(biorthogonal.lu_identity_residual(j, k)
                for j in range(7) for k in range(7))
    return [CriterionResult(
        cid="07-stirling-lu",
        description="max residual of the Stirling triangular factorization, j,k <= 6",
        expected=0.0,
        observed=worst,
        tolerance=1e-7,
        passed=worst <= 1e-7,
    )]


# ---------------------------------------------------------------- 08


_K_RULE = QuadratureRule("semi-infinite-exp-weighted", abs_tol=1e-9,
                         rel_tol=1e-9, max_depth=48)


def _crit_kernel():
    worst_tr = 0.0
    for n in range(1, 6):
        coeffs = biorthogonal.KernelCoeffs.build(n)
        tr = integrate(lambda t: biorthogonal.kernel_eval(t, t, coeffs),
                       0.0, math.inf, rule=_K_RULE)
        worst_tr = max(worst_tr, abs(tr - n))
    rows = [CriterionResult(
        cid="08-kernel-trace",
        description="max |trace of the kernel - n| for n <= 5, b=1",
        expected=0.0,
        observed=worst_tr,
        tolerance=1e-6,
        passed=worst_tr <= 1e-6,
    )]

    c3 = biorthogonal.KernelCoeffs.build(3)
    worst_rep = 0.0
    for x, y in ((0.7, 1.3), (2.0, 0.5), (1.0, 1.0)):
        conv = integrate(
            lambda t: biorthogonal.kernel_eval(x, t, c3) * biorthogonal.kernel_eval(t, y, c3),
            0.0, math.inf, rule=_K_RULE)
        worst_rep = max(worst_rep, abs(conv - biorthogonal.kernel_eval(x, y, c3)))
    rows.append(CriterionResult(
        cid="08-kernel-reproducing",
        description="max reproducing-composition defect at three point pairs, n=3, b=1",
        expected=0.0,
        observed=worst_rep,
        tolerance=1e-6,
        passed=worst_rep <= 1e-6,
    ))

    c2 = biorthogonal.KernelCoeffs.build(2)
    pairs = ((2.0, 1.0), (3.0, 0.5), (1.5, 1.2), (5.0, 0.1), (0.9, 0.3))
    worst_corr = 0.0
    for a, b in pairs:
        rho = biorthogonal.correlation((a, b), c2)
        # 2! times the symmetrized density is the ordered-tuple density itself
        target = biorthogonal.joint_density((max(a, b), min(a, b)), 0.0, 1.0)
        worst_corr = max(worst_corr, abs(rho - target))
    rows.append(CriterionResult(
        cid="08-kernel-correlation",
        description="max |2-point correlation determinant - two-particle density| at 5 pairs, n=2, b=1",
        expected=0.0,
        observed=worst_corr,
        tolerance=1e-8,
        passed=worst_corr <= 1e-8,
    ))
    return rows


# ---------------------------------------------------------------- 09


def _crit_wishart():
    n, m = 2, 4
    # checked at b = m - n; the two densities actually coincide at b = m - n + 1
    b = float(m - n)
    g = ensembles.RngState(42).generator()
    points = np.sort(g.random((5, n)) * 5.0 + 0.05, axis=1)[:, ::-1]
    worst = 0.0
    for row in points:
        lhs = biorthogonal.joint_density(tuple(row), 1.0, b)
        rhs = biorthogonal.wishart_joint_density(tuple(row), n, m)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return [CriterionResult(
        cid="09-wishart-reduction",
        description="theta=1, b=m-n joint density vs the complex Wishart density, (n,m)=(2,4), 5 points",
        expected=0.0,
        observed=worst,
        tolerance="1e-10 relative",
        passed=worst <= 1e-10,
    )]


# ---------------------------------------------------------------- 10


_INNER_RULE = QuadratureRule("semi-infinite-exp-weighted", abs_tol=1e-9,
                             rel_tol=1e-9, max_depth=48)
_OUTER_RULE = QuadratureRule("semi-infinite-exp-weighted", abs_tol=1e-7,
                             rel_tol=1e-7, max_depth=48)


def _ordered_pair_mass(theta: float) -> float:
    def inner(x2: float) -> float:
        if x2 <= 0.0:
            return 0.0
        return integrate(
            lambda x1: biorthogonal.joint_density([x1, x2], theta, 1.0) if x1 > x2 else 0.0,
            x2, math.inf, rule=_INNER_RULE)

    return integrate(inner, 0.0, math.inf, rule=_OUTER_RULE)


def _crit_joint_mass():
    rows = []
    for theta in (0.0, 1.0):
        mass = _ordered_pair_mass(theta)
        rows.append(CriterionResult(
            cid=f"10-joint-mass-theta{int(theta)}",
            description=f"total mass of the n=2 ordered joint density, theta={int(theta)}, b=1",
            expected=1.0,
            observed=mass,
            tolerance=1e-4,
            passed=abs(mass - 1.0) <= 1e-4,
        ))
    return rows


# ---------------------------------------------------------------- 11


def _crit_trees():
    mismatches = sum(1 for k in range(1, 7)
                     if trees.count_alternating_trees(k) != k**k)
    rows = [CriterionResult(
        cid="11-trees-alternating",
        description="alternating tree counts equal k^k exactly for k <= 6 (mismatches)",
        expected=0,
        observed=mismatches,
        tolerance="exact",
        passed=mismatches == 0,
    )]
    bad = 0
    for n, k in ((3, 1), (4, 2), (5, 2), (5, 3)):
        enumerated, closed = trees.count_delta_hat(n, k)
        if enumerated != closed:
            bad += 1
    rows.append(CriterionResult(
        cid="11-trees-delta-hat",
        description="enumerated delta-hat pair counts match C(n,k+1) k^k at four (n,k) (mismatches)",
        expected=0,
        observed=bad,
        tolerance="exact",
        passed=bad == 0,
    ))
    return rows


# ---------------------------------------------------------------- 12


def _crit_bari():
    rows = []
    lam = (2.0, 1.0)
    for theta, stream in ((0.0, 5000), (1.0, 6000)):
        closed = biorthogonal.bari_K(lam, theta)
        mean, se = biorthogonal.bari_haar_mc(
            lam, theta, 100000, ensembles.RngState(12345, stream=stream))
        rows.append(CriterionResult(
            cid=f"12-bari-theta{int(theta)}",
            description=f"unitary minor integral, closed form vs 1e5-replica Monte Carlo, theta={int(theta)}",
            expected=closed,
            observed=mean,
            tolerance=3.0 * se,
            passed=abs(mean - closed) <= 3.0 * se,
        ))
    return rows


# ---------------------------------------------------------------- 13


def _crit_gt_volume():
    x = (3.0, 1.0, 0.0)
    vol = biorthogonal.gt_volume(x)
    g = ensembles.RngState(12345, stream=7000).generator()
    n_prop = 1_000_000
    # box [1,3] x [0,1] x [0,3] covers the middle-row interlacing exactly
    y1 = g.random(n_prop) * 2.0 + 1.0
    y2 = g.random(n_prop)
    z = g.random(n_prop) * 3.0
    p = float(np.mean((z <= y1) & (z >= y2)))
    box = 6.0
    est = box * p
    se = box * math.sqrt(p * (1.0 - p) / n_prop)
    return [CriterionResult(
        cid="13-gt-volume",
        description="interlacing-pattern volume below (3,1,0): formula vs rejection Monte Carlo",
        expected=vol,
        observed=est,
        tolerance=3.0 * se,
        passed=abs(est - vol) <= 3.0 * se,
    )]


# ---------------------------------------------------------------- 14


_F2_STEP_RULE = QuadratureRule("finite-adaptive", abs_tol=1e-7, rel_tol=1e-7,
                               max_depth=44)
_F2_MASS_RULE = QuadratureRule("finite-adaptive", abs_tol=1e-8, rel_tol=1e-8,
                               max_depth=48)


def _f2_head_mass(x_hi: float, rule=_F2_STEP_RULE) -> float:
    # substitute x = u^3: the x^(-1/3) blowup at the hard edge flattens out
    return integrate(lambda u: 3.0 * u * u * limitlaws.ftheta_density(u**3, 2.0),
                     0.0, x_hi ** (1.0 / 3.0), rule=rule)


def _f2_cdf_on_sorted(xs: np.ndarray) -> np.ndarray:
    edge = limitlaws.ftheta_edge(2.0)
    out = np.empty(len(xs))
    acc = _f2_head_mass(min(float(xs[0]), edge))
    out[0] = acc
    prev = min(float(xs[0]), edge)
    for i in range(1, len(xs)):
        cur = min(float(xs[i]), edge)
        if cur > prev:
            acc += integrate(lambda t: limitlaws.ftheta_density(t, 2.0),
                             prev, cur, rule=_F2_STEP_RULE)
            prev = cur
        out[i] = min(acc, 1.0)
    return out


def _crit_theta2():
    params = ensembles.EnsembleParams(n=1024, kind=ensembles.KIND_THETA_B,
                                      theta=2.0, b=1.0)
    sample = ensembles.spectrum(params, ensembles.RngState(12345, stream=8000))
    d = ensembles.ks_statistic(ensembles.EmpiricalDistribution(sample.values),
                               _f2_cdf_on_sorted)
    rows = [CriterionResult(
        cid="14-theta2-ks",
        description="KS distance of a theta=2, b=1 spectrum at n=1024 to its limit law",
        expected=0.0,
        observed=d,
        tolerance=0.07,
        passed=d <= 0.07,
    )]

    edge = limitlaws.ftheta_edge(2.0)
    mass = _f2_head_mass(edge, rule=_F2_MASS_RULE)
    rows.append(CriterionResult(
        cid="14-theta2-mass",
        description="total mass of the theta=2 limit density",
        expected=1.0,
        observed=mass,
        tolerance=1e-6,
        passed=abs(mass - 1.0) <= 1e-6,
    ))

    beyond = max(limitlaws.ftheta_density(x, 2.0)
                 for x in (edge * (1.0 + 1e-12), edge + 0.5, 10.0, 100.0))
    rows.append(CriterionResult(
        cid="14-theta2-edge",
        description=f"density beyond the support edge {edge!r} (max over probe points)",
        expected=0.0,
        observed=beyond,
        tolerance="exact",
        passed=beyond == 0.0,
    ))
    return rows


# ---------------------------------------------------------------- 15


def _crit_lambert():
    xs = np.concatenate([
        -np.geomspace(math.exp(-1.0), 1e-12, 200),
        [0.0],
        np.geomspace(1e-12, 1e6, 400),
    ])
    worst_real = 0.0
    for x in xs:
        w = limitlaws.lambert_w_real(float(x))
        worst_real = max(worst_real, abs(w * math.exp(w) - x) / max(1.0, abs(x)))
    rows = [CriterionResult(
        cid="15-lambert-real",
        description="max relative defining-equation residual on a log-spaced real grid",
        expected=0.0,
        observed=worst_real,
        tolerance=1e-14,
        passed=worst_real <= 1e-14,
    )]

    worst_cut = 0.0
    for z in -np.geomspace(math.exp(-1.0), 1e6, 300):
        w = limitlaws.lambert_w_cut(float(z)).w
        worst_cut = max(worst_cut, abs(w * np.exp(w) - z) / abs(z))
    rows.append(CriterionResult(
        cid="15-lambert-cut",
        description="max relative defining-equation residual on the cut, z in [-1e6, -1/e]",
        expected=0.0,
        observed=worst_cut,
        tolerance=1e-12,
        passed=worst_cut <= 1e-12,
    ))

    bs = np.linspace(1e-8, math.pi * (1.0 - 1e-9), 10000)
    phi = -bs / np.tan(bs) + np.log(bs / np.sin(bs))
    violations = int(np.sum(np.diff(phi) <= 0.0))
    rows.append(CriterionResult(
        cid="15-lambert-monotone",
        description="non-increasing steps of the cut parametrization on a 1e4-point grid",
        expected=0,
        observed=violations,
        tolerance="strict",
        passed=violations == 0,
    ))
    return rows


# ---------------------------------------------------------------- runner


def criterion_groups():
    """Ordered (group id, callable) pairs; ids are stable CLI filter targets."""
    return (
        ("01-moments", _crit_moments),
        ("02-esd", _crit_esd_ks),
        ("03-largest-eigenvalue", _crit_largest_eigenvalue),
        ("04-edge", _crit_edge),
        ("05-stieltjes", _crit_stieltjes),
        ("06-det-g", _crit_det_g),
        ("07-stirling-lu", _crit_stirling_lu),
        ("08-kernel", _crit_kernel),
        ("09-wishart", _crit_wishart),
        ("10-joint-mass", _crit_joint_mass),
        ("11-trees", _crit_trees),
        ("12-bari", _crit_bari),
        ("13-gt-volume", _crit_gt_volume),
        ("14-theta2", _crit_theta2),
        ("15-lambert", _crit_lambert),
    )


def run_criteria(only: str | None = None) -> list[CriterionResult]:
    """Run all criterion groups, or only those whose id contains `only`."""
    rows: list[CriterionResult] = []
    for gid, fn in criterion_groups():
        if only is not None and only.lower() not in gid:
            continue
        rows.extend(fn())
    return rows
