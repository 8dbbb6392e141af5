"""Command-line front end: runs experiments and serializes them to CSV.

Every command is deterministic under a fixed ``--seed`` and config,
independent of ``--workers``.  Floats are written with 17 significant
digits so a rerun is byte-identical.  Exit codes: 0 success, 2 invalid
configuration, 3 runtime or solver failure.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import cs, geometry, mclab, risk
from .errors import ProxlabError
from .prox import PROGRAMS, ProgramSpec, solve_pd

__all__ = ["main", "build_parser", "PRESETS"]


class ConfigError(ValueError):
    pass


# Presets bundle the figure-caption parameter tuples.  Desk-scale
# reductions: fig3b runs k=10 (down from 50); fig6b stops the dimension
# grid at 1e5 (down from 1e7) with 25 grid points.  fig5a is kept at its
# published size and takes tens of minutes.
PRESETS = {
    "fig3a": ("sweep", {"s": 20, "n_dim": 1000, "eta": 1e-3, "k": 150, "grid_n": 301}),
    "fig3b": ("sweep", {"s": 20, "n_dim": 10**6, "eta": 1e-3, "k": 10, "grid_n": 301}),
    "fig5a": ("sweep", {"s": 1, "n_dim": 10**7, "eta": 1.0, "k": 10, "grid_n": 237}),
    "fig5b": ("sweep", {"s": 2500, "n_dim": 10**4, "eta": 233.0, "k": 25, "grid_n": 401}),
    "fig4a": ("analytic", {"quantity": "risk", "grid": "n", "s": 1,
                           "u": [0.99, 0.999, 2.0], "grid_start": 1e2, "grid_stop": 1e15,
                           "grid_points": 40}),
    "fig4b": ("analytic", {"quantity": "risk", "grid": "lambda", "s": 1, "n_dim": 10**15,
                           "grid_points": 301}),
    "fig4c": ("analytic", {"quantity": "risk_derivative", "grid": "n", "s": 1,
                           "u": [0.99, 0.999, 2.0], "grid_start": 1e2, "grid_stop": 1e15,
                           "grid_points": 40}),
    "fig6b": ("bestloss", {"s": 1, "eta": 1.0, "k": 25, "n_sigma": 31,
                           "n_start": 1e2, "n_stop": 1e5, "n_points": 25}),
}


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def _write_csv(path, header, rows):
    tmp = path + ".part"
    try:
        with open(tmp, "w", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _apply_preset(args, command):
    if not getattr(args, "preset", None):
        return
    if args.preset not in PRESETS:
        raise ConfigError(f"unknown preset {args.preset!r}")
    preset_command, values = PRESETS[args.preset]
    if preset_command != command:
        raise ConfigError(f"preset {args.preset!r} belongs to the {preset_command!r} command")
    for key, value in values.items():
        if not getattr(args, f"_set_{key}", False):
            setattr(args, key, value)


class _Remember(argparse.Action):
    # Track flags the user set explicitly so presets only fill the gaps.
    def __call__(self, parser, namespace, values, option_string=None):
        setattr(namespace, self.dest, values)
        setattr(namespace, f"_set_{self.dest}", True)


def _add(parser, flag, **kwargs):
    kwargs.setdefault("action", _Remember)
    parser.add_argument(flag, **kwargs)


def _add_common(parser):
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument("--seed", type=int, default=0, help="master RNG seed (default 0)")
    parser.add_argument("--workers", type=int, default=None,
                        help="worker threads (default: available parallelism)")


def _programs(value):
    names = [p.strip() for p in value.split(",") if p.strip()]
    bad = [p for p in names if p not in PROGRAMS]
    if bad or not names:
        raise ConfigError(f"programs must be a comma list drawn from {PROGRAMS}, got {value!r}")
    return names


def build_parser():
    parser = argparse.ArgumentParser(
        prog="proxlab",
        description="l1 proximal-denoising experiments with CSV output",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="average loss vs normalized parameter for each program")
    _add_common(p)
    p.add_argument("--preset", choices=[k for k, v in PRESETS.items() if v[0] == "sweep"])
    _add(p, "--s", type=int, default=20)
    _add(p, "--n-dim", dest="n_dim", type=int, default=1000)
    _add(p, "--eta", type=float, default=1e-3)
    _add(p, "--k", type=int, default=25)
    _add(p, "--grid-n", dest="grid_n", type=int, default=51)
    _add(p, "--span", type=float, default=10.0)
    _add(p, "--scale", type=float, default=None)
    _add(p, "--programs", type=str, default="ls,qp,bp")
    _add(p, "--search-k", dest="search_k", type=int, default=32)
    p.add_argument("--share-noise", action="store_true",
                   help="reuse the same k draws at every grid point")

    p = sub.add_parser("analytic", help="closed-form risk and its derivative on a grid")
    _add_common(p)
    p.add_argument("--preset", choices=[k for k, v in PRESETS.items() if v[0] == "analytic"])
    _add(p, "--quantity", choices=["risk", "risk_derivative"], default="risk")
    _add(p, "--grid", choices=["n", "lambda"], default="lambda")
    _add(p, "--s", type=int, default=1)
    _add(p, "--n-dim", dest="n_dim", type=int, default=10**15)
    _add(p, "--u", type=float, nargs="+", default=[1.0])
    _add(p, "--grid-start", dest="grid_start", type=float, default=None)
    _add(p, "--grid-stop", dest="grid_stop", type=float, default=None)
    _add(p, "--grid-points", dest="grid_points", type=int, default=101)

    p = sub.add_parser("bestloss", help="per-realization best residual-program loss vs dimension")
    _add_common(p)
    p.add_argument("--preset", choices=[k for k, v in PRESETS.items() if v[0] == "bestloss"])
    _add(p, "--s", type=int, default=1)
    _add(p, "--eta", type=float, default=1.0)
    _add(p, "--k", type=int, default=25)
    _add(p, "--n-sigma", dest="n_sigma", type=int, default=31)
    _add(p, "--n-start", dest="n_start", type=float, default=1e2)
    _add(p, "--n-stop", dest="n_stop", type=float, default=1e5)
    _add(p, "--n-points", dest="n_points", type=int, default=25)
    _add(p, "--c-low", dest="c_low", type=float, default=0.5)
    _add(p, "--c-high", dest="c_high", type=float, default=5.0)
    _add(p, "--max-reject", dest="max_reject", type=int, default=10_000_000)

    p = sub.add_parser("gmw", help="Monte-Carlo Gaussian mean width of a capped l1 ball")
    _add_common(p)
    _add(p, "--dim", type=int, default=1000)
    _add(p, "--l1-radius", dest="l1_radius", type=float, default=1.0)
    _add(p, "--l2-radius", dest="l2_radius", type=float, default=0.3)
    _add(p, "--samples", type=int, default=2000)

    p = sub.add_parser("denoise1d", help="wavelet-domain denoising sweep on a 1D signal")
    _add_common(p)
    _add(p, "--s", type=int, default=10)
    _add(p, "--n-dim", dest="n_dim", type=int, default=4096)
    _add(p, "--eta", type=float, default=40.96)
    _add(p, "--k", type=int, default=25)
    _add(p, "--grid-n", dest="grid_n", type=int, default=501)
    _add(p, "--span", type=float, default=10.0)
    _add(p, "--scale", type=float, default=None)
    _add(p, "--programs", type=str, default="ls,qp,bp")
    _add(p, "--search-k", dest="search_k", type=int, default=16)

    p = sub.add_parser("cs-sweep", help="generalized-Lasso sweep with a Gaussian matrix")
    _add_common(p)
    _add(p, "--s", type=int, default=5)
    _add(p, "--n-dim", dest="n_dim", type=int, default=256)
    _add(p, "--m", type=int, default=128)
    _add(p, "--eta", type=float, default=1e-3)
    _add(p, "--k", type=int, default=3)
    _add(p, "--grid-n", dest="grid_n", type=int, default=15)
    _add(p, "--span", type=float, default=3.0)
    _add(p, "--scale", type=float, default=1000.0)
    _add(p, "--programs", type=str, default="ls,qp,bp")
    _add(p, "--search-k", dest="search_k", type=int, default=8)
    _add(p, "--max-iter", dest="max_iter", type=int, default=4000)
    _add(p, "--tol", type=float, default=1e-12)
    _add(p, "--bp-tol", dest="bp_tol", type=float, default=1e-2)

    p = sub.add_parser("n0", help="dimension threshold implied by failure-bound constants")
    _add_common(p)
    _add(p, "--a1", type=float, default=1.45)
    _add(p, "--c1", type=float, default=5.0)
    _add(p, "--c2", type=float, default=4.0)
    _add(p, "--big-l", dest="big_l", type=float, default=3.78)

    return parser


def _validate_positive(args, names):
    for name in names:
        value = getattr(args, name)
        if value is None:
            continue
        if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
            raise ConfigError(f"--{name.replace('_', '-')} must be positive, got {value!r}")


SWEEP_HEADER = ["program", "rho", "param_value", "mean_nnse", "stderr_nnse",
                "k", "N", "s", "eta", "seed"]


def cmd_sweep(args):
    _apply_preset(args, "sweep")
    _validate_positive(args, ["n_dim", "eta", "k", "grid_n", "span", "search_k"])
    if args.s < 1 or args.s > args.n_dim:
        raise ConfigError("--s must satisfy 1 <= s <= n-dim")
    programs = _programs(args.programs)
    inst = mclab.make_instance(args.s, args.n_dim, args.eta, entry_scale=args.scale, seed=args.seed)
    grid = mclab.SweepGrid.logspaced(args.grid_n, args.span)
    rows = []
    for kind in programs:
        rho_star = mclab.optimal_param(kind, inst, k_search=args.search_k)
        curve = mclab.sweep(kind, grid, inst, args.k, rho_star,
                            workers=args.workers, share_noise=args.share_noise)
        for pt in curve.points:
            rows.append([kind, pt.rho, pt.param_value, pt.mean_nnse, pt.stderr_nnse,
                         args.k, args.n_dim, args.s, args.eta, args.seed])
    _write_csv(args.out, SWEEP_HEADER, rows)


ANALYTIC_HEADER = ["quantity", "grid_var", "grid_value", "s", "N", "u_or_lambda", "value"]


def cmd_analytic(args):
    _apply_preset(args, "analytic")
    _validate_positive(args, ["n_dim", "grid_points"])
    if args.s < 1:
        raise ConfigError("--s must be >= 1")
    rows = []
    if args.grid == "lambda":
        lb = risk.lambda_bar(args.n_dim)
        start = args.grid_start if args.grid_start is not None else 0.3 * lb
        stop = args.grid_stop if args.grid_stop is not None else 2.5 * lb
        if not 0 < start <= stop:
            raise ConfigError("need 0 < grid-start <= grid-stop")
        lams = np.geomspace(start, stop, args.grid_points)
        for lam in lams:
            if args.quantity == "risk":
                value = risk.qp_risk(lam, args.s, args.n_dim)
            else:
                value = risk.qp_risk_derivative(lam / lb, args.s, args.n_dim)
            rows.append(["risk" if args.quantity == "risk" else "risk_derivative",
                         "lambda", lam, args.s, args.n_dim, lam, value])
    else:
        start = args.grid_start if args.grid_start is not None else 1e2
        stop = args.grid_stop if args.grid_stop is not None else 1e15
        if not 2 <= start <= stop:
            raise ConfigError("need 2 <= grid-start <= grid-stop")
        dims = np.unique(np.rint(np.geomspace(start, stop, args.grid_points)).astype(np.int64))
        for u in args.u:
            if u <= 0:
                raise ConfigError("--u values must be positive")
            for n in dims:
                if n <= args.s:
                    continue
                if args.quantity == "risk":
                    value = risk.qp_risk(u * risk.lambda_bar(n), args.s, int(n))
                else:
                    value = risk.qp_risk_derivative(u, args.s, int(n))
                rows.append([args.quantity, "N", int(n), args.s, int(n), u, value])
    _write_csv(args.out, ANALYTIC_HEADER, rows)


BESTLOSS_HEADER = ["N", "mean_best_nnse", "std_best_nnse", "k", "n_sigma", "s", "eta", "seed"]


def cmd_bestloss(args):
    _apply_preset(args, "bestloss")
    _validate_positive(args, ["eta", "k", "n_sigma", "n_start", "n_stop", "n_points", "max_reject"])
    if args.s < 0:
        raise ConfigError("--s must be >= 0")
    if args.c_low >= args.c_high:
        raise ConfigError("--c-low must be below --c-high")
    n_grid = np.unique(np.rint(np.geomspace(args.n_start, args.n_stop, args.n_points)).astype(np.int64))
    if n_grid[0] < max(args.s, 2):
        raise ConfigError("the dimension grid must start at max(s, 2) or above")
    rows = mclab.best_loss_vs_N(
        n_grid, args.s, args.eta, args.k, args.n_sigma, args.seed,
        c_low=args.c_low, c_high=args.c_high, workers=args.workers,
        max_attempts=args.max_reject,
    )
    table = [[n, mean, std, args.k, args.n_sigma, args.s, args.eta, args.seed]
             for n, mean, std in rows]
    _write_csv(args.out, BESTLOSS_HEADER, table)


GMW_HEADER = ["dim", "l1_radius", "l2_radius", "samples", "mean", "stderr", "seed"]


def cmd_gmw(args):
    _validate_positive(args, ["dim", "l1_radius", "l2_radius", "samples"])
    spec = geometry.GmwSetSpec(args.l1_radius, args.l2_radius, args.dim)
    mean, stderr = geometry.gmw_estimate(spec, args.samples, args.seed)
    _write_csv(args.out, GMW_HEADER,
               [[args.dim, args.l1_radius, args.l2_radius, args.samples, mean, stderr, args.seed]])


def cmd_denoise1d(args):
    _validate_positive(args, ["n_dim", "k", "grid_n", "span", "search_k"])
    if args.eta < 0:
        raise ConfigError("--eta must be >= 0")
    if args.s < 1 or args.s > args.n_dim:
        raise ConfigError("--s must satisfy 1 <= s <= n-dim")
    if args.n_dim & (args.n_dim - 1):
        raise ConfigError("--n-dim must be a power of two")
    programs = _programs(args.programs)
    n = args.n_dim
    scale = float(n) if args.scale is None else args.scale
    w0 = np.zeros(n)
    w0[: args.s] = scale
    grid = mclab.SweepGrid.logspaced(args.grid_n, args.span)

    # Noise enters in the signal domain; the transform is orthonormal, so
    # wavelet-domain denoising sees iid noise and signal-domain loss equals
    # coefficient-domain loss.
    if args.eta > 0:
        inst = mclab.make_instance(args.s, n, args.eta, entry_scale=scale, seed=args.seed)
        stars = {"ls": float(np.abs(w0).sum())}
        stars["qp"] = mclab.optimal_param("qp", inst, k_search=args.search_k)
        stars["bp"] = mclab.optimal_param("bp", inst, k_search=args.search_k)
        normalizer = args.eta ** -2
    else:
        stars = {"ls": float(np.abs(w0).sum()), "qp": 0.0, "bp": 0.0}
        normalizer = 1.0

    rows = []
    for kind in programs:
        for i, rho in enumerate(grid.rho_values):
            param = float(rho) * stars[kind]
            losses = np.empty(args.k)
            for j in range(args.k):
                rng = mclab._rng(args.seed, mclab._LANE_SWEEP, i, j)
                noise_w = cs.haar_forward(rng.standard_normal(n))
                y_w = w0 + args.eta * noise_w
                d = solve_pd(ProgramSpec(kind, param), y_w) - w0
                losses[j] = float(d @ d) * normalizer
            mean = float(losses.mean())
            stderr = float(losses.std(ddof=1) / math.sqrt(args.k)) if args.k > 1 else 0.0
            rows.append([kind, float(rho), param, mean, stderr,
                         args.k, n, args.s, args.eta, args.seed])
    _write_csv(args.out, SWEEP_HEADER, rows)


CS_HEADER = ["program", "rho", "param_value", "mean_nnse", "stderr_nnse", "mean_psnr",
             "k", "N", "s", "m", "eta", "seed"]


def cmd_cs_sweep(args):
    _validate_positive(args, ["n_dim", "m", "eta", "k", "grid_n", "span", "scale",
                              "search_k", "max_iter", "tol", "bp_tol"])
    if args.s < 1 or args.s > args.n_dim:
        raise ConfigError("--s must satisfy 1 <= s <= n-dim")
    programs = _programs(args.programs)
    n, m = args.n_dim, args.m
    x0 = np.zeros(n)
    x0[: args.s] = args.scale
    A = cs.gaussian_matrix(m, n, args.seed)
    y_clean = A @ x0
    grid = mclab.SweepGrid.logspaced(args.grid_n, args.span)

    def solve(kind, param, y):
        if kind == "qp":
            return cs.ista_qp(A, y, param, max_iter=args.max_iter, tol=args.tol,
                              accelerate=True).solution
        if kind == "ls":
            return cs.pg_ls(A, y, param, max_iter=args.max_iter, tol=args.tol).solution
        return cs.bp_sigma_general(A, y, param, max_iter=args.max_iter, tol=args.bp_tol).solution

    def cs_loss(kind, param, z):
        xhat = solve(kind, param, y_clean + args.eta * z)
        d = xhat - x0
        return float(d @ d) / (args.eta ** 2), xhat

    # Sweep centers: exact radius for "ls", common-random-number golden search
    # seeded at eta*sqrt(2 log(N/s)) for "qp", and the standard pilot value
    # eta*sqrt(m) for "bp" (a search there would multiply the run time by the
    # cost of the low-noise residual solves).
    search_draws = [mclab._rng(args.seed, mclab._LANE_SEARCH, 0, j).standard_normal(m)
                    for j in range(args.search_k)]

    def search(kind, seed_value):
        def mean_loss(param):
            return float(np.mean([cs_loss(kind, param, z)[0] for z in search_draws]))
        t = risk.golden_section(lambda t: mean_loss(math.exp(t)),
                                math.log(seed_value / 5.0), math.log(seed_value * 5.0), 1e-2)
        return math.exp(t)

    stars = {}
    for kind in programs:
        if kind == "ls":
            stars[kind] = float(np.abs(x0).sum())
        elif kind == "qp":
            stars[kind] = search("qp", args.eta * math.sqrt(2.0 * math.log(n / args.s)))
        else:
            stars[kind] = args.eta * math.sqrt(m)

    rows = []
    for kind in programs:
        for i, rho in enumerate(grid.rho_values):
            param = float(rho) * stars[kind]
            losses = np.empty(args.k)
            psnrs = np.empty(args.k)
            for j in range(args.k):
                z = mclab._rng(args.seed, mclab._LANE_SWEEP, i, j).standard_normal(m)
                losses[j], xhat = cs_loss(kind, param, z)
                err = xhat - x0
                msev = float(err @ err) / n
                peak = float((x0 * x0).max())
                psnrs[j] = 10.0 * math.log10(peak / msev) if msev > 0 else math.inf
            mean = float(losses.mean())
            stderr = float(losses.std(ddof=1) / math.sqrt(args.k)) if args.k > 1 else 0.0
            rows.append([kind, float(rho), param, mean, stderr, float(psnrs.mean()),
                         args.k, n, args.s, m, args.eta, args.seed])
    _write_csv(args.out, CS_HEADER, rows)


N0_HEADER = ["a1", "c1", "c2", "L", "d1", "d2", "d5", "n0_2a"]


def cmd_n0(args):
    _validate_positive(args, ["a1", "c1", "c2", "big_l"])
    tc = geometry.InstabilityConstants(args.a1, args.c1, args.c2, args.big_l)
    est = geometry.n0_estimate(tc)
    _write_csv(args.out, N0_HEADER,
               [[args.a1, args.c1, args.c2, args.big_l, est.d1, est.d2, est.d5, est.n0_2a]])


_COMMANDS = {
    "sweep": cmd_sweep,
    "analytic": cmd_analytic,
    "bestloss": cmd_bestloss,
    "gmw": cmd_gmw,
    "denoise1d": cmd_denoise1d,
    "cs-sweep": cmd_cs_sweep,
    "n0": cmd_n0,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    if args.workers is not None and args.workers < 1:
        print("error: --workers must be >= 1", file=sys.stderr)
        return 2
    try:
        _COMMANDS[args.command](args)
    except (ConfigError, argparse.ArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProxlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3 if not isinstance(exc, ValueError) else 2
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
