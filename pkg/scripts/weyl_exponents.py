"""Fitted remainder exponents for sphere products against |d| - 1 - (n-1)/(n+1).

    python scripts/weyl_exponents.py --dims 2,1 2,2 3,1 --lambda-max 2000
"""

import argparse
import math
from functools import partial

from weylcount import product_count as pc
from weylcount.analysis import Grid, RemainderSeries, evaluate, fit_exponent


def _error(M, t):
    return pc.weyl_remainder(M, t)[2]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--dims", nargs="+", default=["2,1", "2,2", "3,1", "1,1"])
    ap.add_argument("--lambda-min", type=float, default=50)
    ap.add_argument("--lambda-max", type=float, default=2000)
    ap.add_argument("--samples", type=int, default=128)
    ap.add_argument("--threads", type=int)
    args = ap.parse_args()

    grid = Grid(args.lambda_min, args.lambda_max, args.samples).lambda_squares()
    print(f"{'dims':>8} {'bound':>7} {'raw':>7} {'envelope':>9} {'R^2':>6}")
    for text in args.dims:
        M = pc.parse_dims(text)
        errs = evaluate(partial(_error, M), grid, args.threads)
        series = RemainderSeries(tuple(zip(map(math.sqrt, grid), errs)), text, M.total_dim)
        raw = fit_exponent(series)
        env = fit_exponent(series, use_envelope=True)
        bound = M.total_dim - 1 - (M.n - 1) / (M.n + 1)
        print(f"{text:>8} {bound:7.3f} {raw.slope:7.3f} {env.slope:9.3f} {env.r_squared:6.3f}")


if __name__ == "__main__":
    main()
