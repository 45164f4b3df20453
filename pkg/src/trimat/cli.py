"""Command-line front end: seeded sampling runs, density and kernel tables,
tree counts, closed-form vs Monte Carlo reports, and the verification suite.

Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 verification
failure.  Table commands write CSV (comma, header row, LF, floats at 17
significant digits) and, unless --no-plot is given, a PNG figure next to it.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import ensembles, limitlaws, tables
from .errors import InputError, TrimatError

__all__ = [
    "DEFAULT_SEED",
    "SEED_ENV",
    "EXIT_OK",
    "EXIT_CONFIG",
    "EXIT_IO",
    "EXIT_VERIFY",
    "RunConfig",
    "build_parser",
    "main",
]

DEFAULT_SEED = 12345
SEED_ENV = "TRIMAT_SEED"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2
EXIT_VERIFY = 3


def _require(ok: bool, message: str) -> None:
    if not ok:
        raise InputError(message)


@dataclass(frozen=True)
class RunConfig:
    """Validated arguments of one CLI invocation.

    Commands construct this before touching any sampler or table writer, so
    a bad flag can never leave a half-written output behind.  Fields a
    command does not use keep their defaults.
    """

    command: str
    n: int = 1
    k: int = 1
    reps: int = 1
    theta: float = 0.0
    b: float = 1.0
    seed: int = DEFAULT_SEED
    grid: tuple = (0.0, 1.0, 2)
    output_path: str = ""
    format: str = "csv"

    def __post_init__(self):
        _require(isinstance(self.n, int) and self.n >= 1,
                 "n must be a positive integer")
        _require(isinstance(self.k, int) and self.k >= 1,
                 "k must be a positive integer")
        _require(isinstance(self.reps, int) and self.reps >= 1,
                 "reps must be a positive integer")
        _require(math.isfinite(self.theta), "theta must be finite")
        _require(math.isfinite(self.b), "b must be finite")
        _require(self.format in ("csv", "json"), "format must be csv or json")
        lo, hi, points = self.grid
        _require(math.isfinite(lo) and math.isfinite(hi) and hi > lo,
                 "grid needs finite LO < HI")
        _require(isinstance(points, int) and points >= 2,
                 "grid needs at least 2 points")


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(
                f"{SEED_ENV} must be a decimal integer, got {env!r}") from None
    return DEFAULT_SEED


def _parse_grid(raw, default) -> tuple[float, float, int]:
    if raw is None:
        return default
    try:
        return float(raw[0]), float(raw[1]), int(raw[2])
    except ValueError:
        raise InputError(f"grid must be LO HI POINTS, got {raw!r}") from None


def _png_twin(args, writer) -> list[str]:
    """Render the companion figure unless --no-plot; returns paths written."""
    if args.no_plot:
        return []
    from . import plotting

    png = plotting.png_path_for(args.output)
    writer(plotting, png)
    return [png]


def _announce(paths) -> None:
    print("wrote " + ", ".join(paths))


# ---------------------------------------------------------------- sample


def _build_params(cfg: RunConfig, kind: str, entry_law: str) -> ensembles.EnsembleParams:
    if kind in ("wigner", "triangular-wigner"):
        law = (ensembles.LAW_UNIFORM_PHASE if entry_law == "uniform-phase"
               else ensembles.LAW_GAUSSIAN)
        return ensembles.EnsembleParams(n=cfg.n, kind=ensembles.KIND_WIGNER,
                                        entry_law=law)
    return ensembles.EnsembleParams(n=cfg.n, kind=ensembles.KIND_THETA_B,
                                    theta=cfg.theta, b=cfg.b)


def cmd_sample(args) -> int:
    cfg = RunConfig(command="sample", n=args.n, reps=args.reps,
                    theta=args.theta, b=args.b, seed=_resolve_seed(args),
                    output_path=args.output)
    params = _build_params(cfg, args.kind, args.entry_law)
    base = ensembles.RngState(cfg.seed)
    rows = []
    pooled = []
    for r in range(cfg.reps):
        sample = ensembles.spectrum(params, base.replica(r))
        rows.extend((r, rank, float(v))
                    for rank, v in enumerate(sample.values, start=1))
        pooled.append(sample.values)
    tables.write_csv(cfg.output_path, ("replica_index", "rank", "value"), rows)
    written = [cfg.output_path]

    def draw(plotting, png):
        values = np.concatenate(pooled)
        overlay = None
        if params.kind == ensembles.KIND_WIGNER:
            xs = np.linspace(1e-3, math.e, 400)
            overlay = (xs, [limitlaws.f0_density(x) for x in xs], "limit density")
        elif params.theta > 1.0:
            edge = limitlaws.ftheta_edge(params.theta)
            xs = np.linspace(edge * 1e-3, edge, 400)
            overlay = (xs, limitlaws.ftheta_density_grid(xs, params.theta),
                       "limit density")
        plotting.save_histogram(
            png, values,
            title=f"spectrum of {params.kind}, n={params.n}, reps={cfg.reps}",
            xlabel="eigenvalue", overlay=overlay)

    written += _png_twin(args, draw)
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- density


def cmd_density(args) -> int:
    law = args.law
    if law == "ftheta":
        _require(args.theta is not None, "ftheta needs --theta")
        _require(args.theta > 1.0, "theta must be > 1 for the ftheta law")
        hi_default = limitlaws.ftheta_edge(args.theta)
    elif law == "mp":
        _require(args.c > 0.0, "c must be positive")
        hi_default = (1.0 + math.sqrt(args.c)) ** 2
    else:
        hi_default = math.e
    cfg = RunConfig(command="density",
                    theta=args.theta if args.theta is not None else 0.0,
                    grid=_parse_grid(args.grid, (0.0, hi_default, 1000)),
                    output_path=args.output)
    lo, hi, points = cfg.grid
    xs = np.linspace(lo, hi, points)

    if law == "f0":
        header = ("x", "density", "cdf")
        dens = [limitlaws.f0_density(x) for x in xs]
        rows = [(float(x), d, limitlaws.f0_cdf(x)) for x, d in zip(xs, dens)]
        curves = {"density": dens, "cdf": [r[2] for r in rows]}
    elif law == "mp":
        header = ("x", "density")
        dens = [limitlaws.mp_density(x, args.c) for x in xs]
        rows = [(float(x), d) for x, d in zip(xs, dens)]
        curves = {"density": dens}
        atom = limitlaws.mp_atom(args.c)
        if atom > 0.0:
            print(f"point mass at 0: {atom:.6f} (not part of the table)")
    else:
        header = ("x", "density")
        dens = limitlaws.ftheta_density_grid(xs, cfg.theta)
        rows = [(float(x), d) for x, d in zip(xs, dens)]
        curves = {"density": dens}

    tables.write_csv(cfg.output_path, header, rows)
    written = [cfg.output_path]
    written += _png_twin(args, lambda plotting, png: plotting.save_line_plot(
        png, xs, curves, title=f"{law} on [{lo:g}, {hi:g}]", xlabel="x",
        ylabel="value"))
    print(f"trapezoid mass on the grid: {np.trapezoid(dens, xs):.6f}")
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- moments


def cmd_moments(args) -> int:
    cfg = RunConfig(command="moments", n=args.n, k=args.kmax, reps=args.reps,
                    seed=_resolve_seed(args), output_path=args.output)
    law = (ensembles.LAW_UNIFORM_PHASE if args.entry_law == "uniform-phase"
           else ensembles.LAW_GAUSSIAN)
    params = ensembles.EnsembleParams(n=cfg.n, entry_law=law)
    rng = ensembles.RngState(cfg.seed)
    rows = []
    for k in range(1, cfg.k + 1):
        est = ensembles.mc_moment(params, k, cfg.reps, rng)
        exact = limitlaws.mu0_moment(k)
        rows.append((k, est, exact, abs(est - exact) / exact))
    tables.write_csv(cfg.output_path, ("k", "estimate", "exact", "rel_error"),
                     rows)
    written = [cfg.output_path]
    ks = [r[0] for r in rows]
    written += _png_twin(args, lambda plotting, png: plotting.save_line_plot(
        png, ks,
        {"estimate": [r[1] for r in rows], "exact": [r[2] for r in rows]},
        title=f"spectral moments, n={cfg.n}, reps={cfg.reps}",
        xlabel="k", ylabel="moment", logy=cfg.k > 6))
    print(f"worst relative error: {max(r[3] for r in rows):.3e}")
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- kernel


def cmd_kernel(args) -> int:
    from . import biorthogonal

    _require(args.b > 0.0, "b must be positive")
    cfg = RunConfig(command="kernel", n=args.n, b=args.b,
                    grid=_parse_grid(args.grid, (0.01, 4.0 * max(args.n, 1), 400)),
                    output_path=args.output)
    lo, hi, points = cfg.grid
    _require(lo > 0.0, "grid LO must be positive for the kernel table")
    coeffs = biorthogonal.KernelCoeffs.build(cfg.n, cfg.b)
    xs = np.linspace(lo, hi, points)
    dens = [biorthogonal.kernel_eval(x, x, coeffs) for x in xs]
    tables.write_csv(cfg.output_path, ("x", "intensity"),
                     zip(map(float, xs), dens))
    written = [cfg.output_path]
    written += _png_twin(args, lambda plotting, png: plotting.save_line_plot(
        png, xs, {"intensity": dens},
        title=f"1-point intensity, n={cfg.n}, b={cfg.b:g}",
        xlabel="x", ylabel="K(x, x)"))
    print(f"trapezoid trace on the grid: {np.trapezoid(dens, xs):.6f} "
          f"(target {cfg.n})")
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- trees


def cmd_trees(args) -> int:
    from . import trees as trees_mod

    cfg = RunConfig(command="trees", n=args.n if args.n is not None else 1,
                    k=args.kmax, output_path=args.output)
    header = ["k", "alternating_trees", "closed_form"]
    if args.n is not None:
        header += ["delta_hat_pairs", "delta_hat_closed"]
    rows = []
    for k in range(1, cfg.k + 1):
        count = trees_mod.count_alternating_trees(k)
        row = [k, count, k**k]
        if args.n is not None:
            enumerated, closed = trees_mod.count_delta_hat(cfg.n, k)
            row += [enumerated, closed]
        rows.append(row)
    tables.write_csv(cfg.output_path, header, rows)
    written = [cfg.output_path]
    ks = [r[0] for r in rows]
    written += _png_twin(args, lambda plotting, png: plotting.save_line_plot(
        png, ks, {"alternating trees": [r[1] for r in rows]},
        title="alternating tree counts", xlabel="k", ylabel="count",
        logy=cfg.k > 3))
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- bari


def cmd_bari(args) -> int:
    from . import biorthogonal

    try:
        lam = tuple(float(t) for t in args.lam.split(","))
    except ValueError:
        raise InputError(
            f"--lam must be comma-separated numbers, got {args.lam!r}") from None
    _require(args.reps >= 2, "reps must be at least 2 for a standard error")
    cfg = RunConfig(command="bari", n=len(lam), reps=args.reps,
                    theta=args.theta, seed=_resolve_seed(args),
                    output_path=args.output)
    closed = biorthogonal.bari_K(lam, cfg.theta)
    mean, se = biorthogonal.bari_haar_mc(lam, cfg.theta, cfg.reps,
                                         ensembles.RngState(cfg.seed))
    z = abs(mean - closed) / se if se > 0.0 else math.inf
    tables.write_csv(
        cfg.output_path,
        ("theta", "reps", "closed_form", "mc_mean", "mc_stderr", "z_score"),
        [(cfg.theta, cfg.reps, closed, mean, se, z)])
    written = [cfg.output_path]
    written += _png_twin(args, lambda plotting, png: plotting.save_errorbar(
        png, [f"theta={cfg.theta:g}"], [mean], [se], [closed],
        title=f"unitary minor integral, lam={args.lam}, {cfg.reps} replicas",
        ylabel="value"))
    print(f"closed form {closed:.10g}, monte carlo {mean:.10g} "
          f"(stderr {se:.3g}, {z:.2f} se apart)")
    _announce(written)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    from . import acceptance

    cfg = RunConfig(command="verify", output_path=args.output, format="json")
    rows = acceptance.run_criteria(only=args.only)
    if not rows:
        raise InputError(f"--only {args.only!r} matches no criterion group")
    report = {
        "criteria": [r.as_dict() for r in rows],
        "passed": sum(1 for r in rows if r.passed),
        "failed": sum(1 for r in rows if not r.passed),
    }
    tables.write_json_report(cfg.output_path, report)
    for entry in report["criteria"]:
        verdict = "PASS" if entry["pass"] else "FAIL"
        print(f"{verdict}  {entry['id']}: observed {entry['observed']!r}, "
              f"expected {entry['expected']!r}, tolerance {entry['tolerance']!r}")
    print(f"{report['passed']} passed, {report['failed']} failed "
          f"-> {cfg.output_path}")
    return EXIT_OK if report["failed"] == 0 else EXIT_VERIFY


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; config errors must exit with 1
    def error(self, message):
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_common(sp, output_default: str) -> None:
    sp.add_argument("--seed", type=int, default=None,
                    help=f"RNG seed; overrides ${SEED_ENV}; default {DEFAULT_SEED}")
    sp.add_argument("--output", "-o", default=output_default,
                    help="output table path")
    sp.add_argument("--no-plot", action="store_true",
                    help="skip the companion PNG figure")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="trimat",
                description="Triangular random matrix ensembles: spectra, "
                            "limit laws, finite-n kernels, tree counts.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("sample", help="draw eigenvalue spectra")
    sp.add_argument("--kind", choices=("wigner", "triangular-wigner", "theta-b"),
                    default="wigner")
    sp.add_argument("--n", type=int, required=True, help="matrix size")
    sp.add_argument("--reps", type=int, default=1, help="independent replicas")
    sp.add_argument("--entry-law", choices=("gaussian", "uniform-phase"),
                    default="gaussian")
    sp.add_argument("--theta", type=float, default=0.0, help="theta-b kind only")
    sp.add_argument("--b", type=float, default=1.0, help="theta-b kind only")
    _add_common(sp, "sample.csv")
    sp.set_defaults(func=cmd_sample)

    sp = sub.add_parser("density", help="tabulate a limiting density")
    sp.add_argument("--law", choices=("f0", "ftheta", "mp"), required=True)
    sp.add_argument("--theta", type=float, default=None, help="ftheta law only")
    sp.add_argument("--c", type=float, default=1.0, help="mp aspect ratio")
    sp.add_argument("--grid", nargs=3, metavar=("LO", "HI", "POINTS"),
                    default=None)
    _add_common(sp, "density.csv")
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("moments",
                        help="Monte Carlo spectral moments vs k^k/(k+1)!")
    sp.add_argument("--n", type=int, default=256)
    sp.add_argument("--reps", type=int, default=20)
    sp.add_argument("--kmax", type=int, default=4)
    sp.add_argument("--entry-law", choices=("gaussian", "uniform-phase"),
                    default="gaussian")
    _add_common(sp, "moments.csv")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("kernel", help="tabulate the 1-point intensity K(x, x)")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--b", type=float, default=1.0)
    sp.add_argument("--grid", nargs=3, metavar=("LO", "HI", "POINTS"),
                    default=None)
    _add_common(sp, "kernel.csv")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("trees", help="alternating tree and index-pair counts")
    sp.add_argument("--kmax", type=int, default=5)
    sp.add_argument("--n", type=int, default=None,
                    help="also enumerate delta-hat pairs in {1..n}")
    _add_common(sp, "trees.csv")
    sp.set_defaults(func=cmd_trees)

    sp = sub.add_parser("bari",
                        help="unitary minor integral: closed form vs Monte Carlo")
    sp.add_argument("--lam", default="2,1",
                    help="comma-separated decreasing positive eigenvalues")
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--reps", type=int, default=100000)
    _add_common(sp, "bari.csv")
    sp.set_defaults(func=cmd_bari)

    sp = sub.add_parser("verify", help="run the numbered verification suite")
    sp.add_argument("--only", default=None,
                    help="restrict to criterion groups whose id contains this")
    sp.add_argument("--output", "-o", default="verify_report.json",
                    help="JSON report path")
    sp.set_defaults(func=cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TrimatError as exc:
        print(f"trimat {args.command}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"trimat {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
