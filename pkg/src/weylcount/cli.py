"""Command-line front end.

Subcommands: count, remainder, constants, molly, counterexample, rerun.
Exit codes: 0 success, 1 a reported check failed, 2 usage error, 3 work cap.
Settings precedence: flags > JSON file named by $WEYLCOUNT_CONFIG > defaults.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone
from fractions import Fraction
from functools import partial
from pathlib import Path
from typing import Optional, Sequence

from . import __version__
from . import counterexample as cx
from .analysis import FitError, Grid, RemainderSeries, evaluate, fit_exponent
from .exact import as_fraction, format_exact, format_float
from .mollify import PROFILE_TOL, epsilon_star, sandwich
from .product_count import (
    DimsParseError,
    ProductManifold,
    count,
    lattice_main_term,
    lattice_problem,
    parse_dims,
    weyl_constant,
    weyl_remainder,
)
from .weighted_lattice import LatticeProblem, main_term, remainder_from_sum, weighted_count

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3
CONFIG_ENV = "WEYLCOUNT_CONFIG"


class UsageError(Exception):
    pass


class WorkCapExceeded(Exception):
    pass


@dataclass
class Settings:
    threads: Optional[int] = None
    work_cap: float = 2e8
    per_decade: int = 64
    envelope_bins_per_octave: int = 4
    offset_jumps: bool = True


def load_settings(env=None) -> Settings:
    env = os.environ if env is None else env
    s = Settings()
    path = env.get(CONFIG_ENV)
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read {CONFIG_ENV}={path}: {exc}") from exc
        known = {f.name for f in fields(Settings)}
        for key, val in data.items():
            if key not in known:
                raise UsageError(f"unknown config key {key!r} in {path}")
            setattr(s, key, val)
    return s


# ------------------------------------------------------------------ parsing


def _positive_int_list(text: str, what: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad {what}: {text!r}") from None
    return vals


def parse_lattice(text: str, shift: Optional[str]) -> LatticeProblem:
    """``n,k,d_1,...,d_k`` plus an optional decimal shift list."""
    vals = _positive_int_list(text, "--lattice")
    if len(vals) < 2:
        raise UsageError("--lattice needs n,k,d_1,...,d_k")
    n, k, weighted = vals[0], vals[1], vals[2:]
    ys = ()
    if shift:
        try:
            ys = tuple(as_fraction(t) for t in shift.split(","))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    try:
        return LatticeProblem.from_nkd(n, k, weighted, ys)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _dims(text: str) -> ProductManifold:
    try:
        return parse_dims(text)
    except DimsParseError as exc:
        raise UsageError(str(exc)) from None


def _lambda_sq(args) -> Fraction:
    text = args.lambda_sq if args.lambda_sq is not None else args.lam
    try:
        v = as_fraction(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if v < 0:
        raise UsageError("lambda must be nonnegative")
    return v if args.lambda_sq is not None else v * v


def _check_cap(estimate: float, cap: float, what: str):
    if estimate > cap:
        raise WorkCapExceeded(f"{what}: estimated {estimate:.3g} nodes exceeds work cap {cap:.3g}")


def _nodes(lam: float, n: int) -> float:
    # outer coordinates are enumerated, the innermost is closed form
    return (2 * lam + 2) ** max(n - 1, 0)


# ----------------------------------------------------------------- manifest


def write_manifest(out: Path, argv: Sequence[str], params: dict, started: float, extra: dict):
    manifest = {
        "command_line": list(argv),
        "parameters": params,
        "tool": "weylcount",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "wall_time_s": time.time() - started,
        "quadrature_tolerance": PROFILE_TOL,
    }
    manifest.update(extra)
    path = out.with_name(out.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _emit_csv(rows: list[list[str]], header: list[str], out: Optional[str]) -> Optional[Path]:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    if out:
        p = Path(out)
        p.write_text(buf.getvalue())
        return p
    sys.stdout.write(buf.getvalue())
    return None


# ----------------------------------------------------------------- commands


def cmd_count(args, settings: Settings) -> int:
    M = _dims(args.dims)
    T = _lambda_sq(args)
    lam = math.sqrt(T)
    _check_cap(_nodes(lam, M.n), settings.work_cap, "count")
    N, main, err = weyl_remainder(M, T)
    print(f"N={N} main_term={format_float(main)} error={format_float(err)} "
          f"dims={','.join(map(str, M.dims))} lambda_sq={format_exact(T)}")
    return EXIT_OK


def _product_row(M: ProductManifold, sq: Fraction):
    N, main, err = weyl_remainder(M, sq)
    return [format_float(math.sqrt(sq)), str(N), format_float(main), format_float(err)], err


def _lattice_row(P: LatticeProblem, sq: Fraction):
    s = weighted_count(P, lam_sq=sq)
    err = remainder_from_sum(s)
    main = float(s.lam_sq) ** (P.total_dim / 2) * main_term(P)
    return [format_float(math.sqrt(sq)), format_exact(s.value), format_float(main), format_float(err)], err


def cmd_remainder(args, settings: Settings, argv) -> int:
    started = time.time()
    if (args.dims is None) == (args.lattice is None):
        raise UsageError("give exactly one of --dims or --lattice")
    if args.samples is not None and args.samples < 8:
        raise UsageError("--samples must be >= 8")
    if not 0 < args.lambda_min < args.lambda_max:
        raise UsageError("need 0 < --lambda-min < --lambda-max")
    per_decade = args.per_decade or settings.per_decade
    offset = settings.offset_jumps if args.offset_jumps is None else args.offset_jumps
    grid = Grid(args.lambda_min, args.lambda_max, args.samples, per_decade, offset)
    squares = grid.lambda_squares()

    if args.dims is not None:
        if args.shift:
            raise UsageError("--shift applies to --lattice only")
        M = _dims(args.dims)
        n, D, label = M.n, M.total_dim, f"dims {','.join(map(str, M.dims))}"
        fn = partial(_product_row, M)
    else:
        P = parse_lattice(args.lattice, args.shift)
        n, D = P.n, P.total_dim
        label = f"lattice dims {','.join(map(str, P.dims))} shift {','.join(map(format_exact, P.shift))}"
        fn = partial(_lattice_row, P)
    _check_cap(len(squares) * _nodes(args.lambda_max, n), settings.work_cap, "remainder")

    threads = args.threads or settings.threads
    results = evaluate(fn, squares, threads)
    rows = [r for r, _ in results]
    series = RemainderSeries(tuple((math.sqrt(sq), e) for sq, (_, e) in zip(squares, results)), label, D)
    out = _emit_csv(rows, ["lambda", "value", "main_term", "error"], args.out)
    bins = args.bins_per_octave or settings.envelope_bins_per_octave
    try:
        fit = fit_exponent(series, use_envelope=args.envelope, bins_per_octave=bins)
        summary = asdict(fit)
        print(f"# {label}: {fit}", file=sys.stderr if out is None else sys.stdout)
    except FitError as exc:
        summary = {"error": str(exc)}
        print(f"# {label}: fit unavailable: {exc}", file=sys.stderr)
    if out is not None:
        write_manifest(out, argv, vars_clean(args), started, {
            "grid": grid.describe(),
            "arithmetic": "exact",
            "fit": summary,
            "envelope": bool(args.envelope),
            "envelope_bins_per_octave": bins,
        })
    return EXIT_OK


def cmd_constants(args, settings: Settings) -> int:
    M = _dims(args.dims)
    w = weyl_constant(M)
    mt = main_term(lattice_problem(M))
    prod = lattice_main_term(M)
    rel = abs(prod - w) / w
    print(f"dims={','.join(map(str, M.dims))}")
    print(f"weyl_constant={format_float(w)}")
    print(f"main_term={format_float(mt)}")
    print(f"weighted_main_term={format_float(prod)}")
    print(f"reldiff={rel:.3e}")
    return EXIT_OK


def cmd_molly(args, settings: Settings) -> int:
    M = _dims(args.dims)
    try:
        lam = float(args.lam)
    except ValueError:
        raise UsageError(f"bad --lambda {args.lam!r}") from None
    if lam <= 0:
        raise UsageError("--lambda must be positive")
    P = lattice_problem(M)
    if args.epsilon == "auto":
        eps = epsilon_star(lam, P.n)
    else:
        try:
            eps = float(args.epsilon)
        except ValueError:
            raise UsageError(f"bad --epsilon {args.epsilon!r}") from None
    if not eps > 0:
        raise UsageError("--epsilon must be positive")
    _check_cap(_nodes(lam + eps, P.n), settings.work_cap, "molly")
    rep = sandwich(P, lam, eps)
    print(f"epsilon={format_float(eps)}")
    print(f"N_eps(lambda-eps)={format_float(rep.lower.value)} (shell points {rep.lower.shell_points})")
    print(f"N(lambda)={format_exact(rep.exact)}")
    print(f"N_eps(lambda+eps)={format_float(rep.upper.value)} (shell points {rep.upper.shell_points})")
    print(f"quadrature_slack={rep.slack:.3e} tol={PROFILE_TOL:g}")
    print("sandwich " + ("PASS" if rep.holds else "FAIL"))
    return EXIT_OK if rep.holds else EXIT_FAIL


def cmd_counterexample(args, settings: Settings, argv) -> int:
    started = time.time()
    if args.kmax < 2:
        raise UsageError("--kmax must be >= 2")
    # two spare octaves keep the top rows away from the truncation edge
    x_max = 2 ** (args.kmax + 2) + 1
    _check_cap(x_max * 8, settings.work_cap, "counterexample")
    S = cx.build_set(x_max)
    ratios = dict(cx.ratio_at_jumps(S, 1, args.kmax))
    rows = []
    for k in range(1, args.kmax + 1):
        rows.append([str(k), str(cx.jump(S, k)), format_float(cx.jump_threshold(k)),
                     str(S.drops(k)), format_float(ratios[k])])
    out = _emit_csv(rows, ["k", "jump", "threshold", "drops", "ratio"], args.out)
    best = max(ratios.items(), key=lambda kv: kv[1])
    print(f"# max ratio {format_float(best[1])} at k={best[0]}", file=sys.stderr if out is None else sys.stdout)
    if out is not None:
        write_manifest(out, argv, vars_clean(args), started, {
            "x_max": x_max, "delta": "1/8", "arithmetic": "exact", "set_size": len(S),
        })
    return EXIT_OK


def cmd_rerun(args, settings: Settings) -> int:
    try:
        manifest = json.loads(Path(args.manifest).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read manifest: {exc}") from None
    argv = list(manifest["command_line"])
    if args.out:
        if "--out" in argv:
            argv[argv.index("--out") + 1] = args.out
        else:
            argv += ["--out", args.out]
    return main(argv)


def vars_clean(args) -> dict:
    return {k: v for k, v in vars(args).items() if k != "func"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weylcount", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"weylcount {__version__}")
    p.add_argument("--work-cap", type=float, help="node budget before exiting with code 3")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", help="exact N(lambda) for a product of spheres")
    c.add_argument("--dims", required=True)
    g = c.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda", dest="lam")
    g.add_argument("--lambda-sq", dest="lambda_sq")

    r = sub.add_parser("remainder", help="remainder series on a geometric lambda grid")
    r.add_argument("--dims")
    r.add_argument("--lattice", help="n,k,d_1,...,d_k")
    r.add_argument("--shift", help="comma-separated shift (lattice mode)")
    r.add_argument("--lambda-min", type=float, required=True)
    r.add_argument("--lambda-max", type=float, required=True)
    r.add_argument("--samples", type=int)
    r.add_argument("--per-decade", type=int)
    r.add_argument("--envelope", action="store_true")
    r.add_argument("--bins-per-octave", type=int)
    r.add_argument("--offset-jumps", dest="offset_jumps", action="store_true", default=None)
    r.add_argument("--no-offset-jumps", dest="offset_jumps", action="store_false")
    r.add_argument("--threads", type=int)
    r.add_argument("--out")

    k = sub.add_parser("constants", help="compare the Weyl constant with the lattice main term")
    k.add_argument("--dims", required=True)

    m = sub.add_parser("molly", help="mollified sandwich check")
    m.add_argument("--dims", required=True)
    m.add_argument("--lambda", dest="lam", required=True)
    m.add_argument("--epsilon", default="auto")

    x = sub.add_parser("counterexample", help="jump table of the dyadic pair-count construction")
    x.add_argument("--kmax", type=int, required=True)
    x.add_argument("--out")

    rr = sub.add_parser("rerun", help="re-execute the command recorded in a manifest")
    rr.add_argument("manifest")
    rr.add_argument("--out")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # argparse exits with 2 on bad usage
    try:
        settings = load_settings()
        if args.work_cap is not None:
            settings.work_cap = args.work_cap
        if args.command == "count":
            return cmd_count(args, settings)
        if args.command == "remainder":
            return cmd_remainder(args, settings, argv)
        if args.command == "constants":
            return cmd_constants(args, settings)
        if args.command == "molly":
            return cmd_molly(args, settings)
        if args.command == "counterexample":
            return cmd_counterexample(args, settings, argv)
        if args.command == "rerun":
            return cmd_rerun(args, settings)
    except UsageError as exc:
        print(f"weylcount: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WorkCapExceeded as exc:
        print(f"weylcount: {exc}", file=sys.stderr)
        return EXIT_CAP
    parser.error(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
