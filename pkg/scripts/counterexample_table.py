"""Jump table of the dyadic pair-count construction, with drop accounting."""

import argparse

from weylcount import counterexample as cx


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kmax", type=int, default=16)
    args = ap.parse_args()

    S = cx.build_set(2 ** (args.kmax + 2) + 1)
    ratios = dict(cx.ratio_at_jumps(S, 3, args.kmax))
    print(f"{'k':>3} {'jump':>8} {'threshold':>10} {'drops':>7} {'jump/2^k':>9} {'drops/2^k':>10} {'ratio':>7}")
    for k in range(3, args.kmax + 1):
        j, d = cx.jump(S, k), S.drops(k)
        print(f"{k:3d} {j:8d} {cx.jump_threshold(k):10.1f} {d:7d} {j / 2 ** k:9.3f} {d / 2 ** k:10.3f} {ratios[k]:7.3f}")
    print(f"set size {len(S)}, dropped {len(S.dropped)}")


if __name__ == "__main__":
    main()
