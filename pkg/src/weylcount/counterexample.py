"""A unit-density set whose pair count jumps by order lam at every radius 2^k.

Block k contributes the integers n in [2^(k-1/2) + 1, 2^k - 1] together with
sqrt(4^k - n^2), so every such n pairs with a partner on the circle of
radius 2^k.  Candidates from different blocks can fall into the same unit
interval; the candidate from the larger block is kept and the other is
recorded as dropped.  Empty intervals [n, n+1) receive the filler n + 1/2.

Points are stored through exact squared values scaled by 4 (block integers
4n^2, sqrt-points 4(4^k - n^2), fillers (2n+1)^2), so pair tests
a^2 + b^2 <= lam^2 are integer comparisons.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exact import RationalLike, as_fraction, floor_fraction

BLOCK = "block-integer"
SQRT = "sqrt-point"
FILLER = "filler"


@dataclass(frozen=True)
class Point:
    sq4: int  # 4 * value^2, exact
    kind: str
    k: Optional[int] = None
    n: Optional[int] = None

    @property
    def value(self) -> float:
        return math.sqrt(self.sq4) / 2

    @property
    def interval(self) -> int:
        """floor(value), exactly."""
        return math.isqrt(self.sq4) // 2


@dataclass
class JumpSet:
    x_max: float
    points: list[Point]
    dropped: list[Point] = field(default_factory=list)

    def __post_init__(self):
        self._sq4 = [p.sq4 for p in self.points]

    @property
    def values(self) -> list[float]:
        return [p.value for p in self.points]

    def drops(self, k: int) -> int:
        return sum(1 for p in self.dropped if p.k == k)

    def __len__(self):
        return len(self.points)


def block_range(k: int) -> range:
    """Integers n with 2^(k-1/2) + 1 <= n <= 2^k - 1."""
    # 2^(k-1/2) = sqrt(2^(2k-1)); n >= that + 1  <=>  (n-1)^2 >= 2^(2k-1) for n >= 1
    lo = math.isqrt(2 ** (2 * k - 1))
    if lo * lo < 2 ** (2 * k - 1):
        lo += 1
    return range(lo + 1, 2 ** k)


def build_set(x_max: float) -> JumpSet:
    """Assemble the set on [0, floor(x_max)); collisions keep the larger block."""
    if x_max < 4:
        raise ValueError("x_max must be at least 4")
    slots: dict[int, Point] = {}
    dropped: list[Point] = []
    k = 1
    while 2 ** k <= x_max:
        R2 = 4 ** k
        for n in block_range(k):
            for cand in (Point(4 * n * n, BLOCK, k, n), Point(4 * (R2 - n * n), SQRT, k, n)):
                slot = cand.interval
                old = slots.get(slot)
                if old is not None:
                    dropped.append(old)
                slots[slot] = cand
        k += 1
    for m in range(int(math.floor(x_max))):
        if m not in slots:
            slots[m] = Point((2 * m + 1) ** 2, FILLER)
    pts = sorted(slots.values(), key=lambda p: p.sq4)
    return JumpSet(x_max, pts, dropped)


def _scaled_budget(lam_sq: Fraction) -> int:
    # a^2 + b^2 <= lam^2  <=>  4a^2 + 4b^2 <= floor(4 lam^2)
    return floor_fraction(4 * lam_sq)


def pair_count(S: JumpSet, lam=None, *, lam_sq: Optional[RationalLike] = None) -> int:
    """#{(a, b) in S x S : a^2 + b^2 <= lam^2}, ordered pairs, two-pointer sweep."""
    if (lam is None) == (lam_sq is None):
        raise TypeError("give exactly one of lam or lam_sq")
    L2 = as_fraction(lam_sq) if lam_sq is not None else as_fraction(lam) ** 2
    if L2 > Fraction(S.x_max) ** 2:
        raise ValueError(f"lambda beyond the usable range (<= x_max = {S.x_max})")
    B = _scaled_budget(L2)
    a = S._sq4
    j = bisect_right(a, B) - 1
    total = 0
    for x in a:
        if x > B:
            break
        while j >= 0 and x + a[j] > B:
            j -= 1
        if j < 0:
            break
        total += j + 1
    return total


def brute_pair_count(S: JumpSet, lam_sq: RationalLike) -> int:
    B = _scaled_budget(as_fraction(lam_sq))
    return sum(1 for x in S._sq4 for y in S._sq4 if x + y <= B)


def jump(S: JumpSet, k: int, delta: RationalLike = Fraction(1, 8)) -> int:
    """N(2^k + delta) - N(2^k - delta)."""
    d = as_fraction(delta)
    if not 0 < d <= Fraction(1, 4):
        raise ValueError("need 0 < delta <= 1/4")
    R = Fraction(2 ** k)
    return pair_count(S, lam_sq=(R + d) ** 2) - pair_count(S, lam_sq=(R - d) ** 2)


def jump_threshold(k: int) -> float:
    """2^k (2 - sqrt 2) - 3."""
    return 2 ** k * (2 - math.sqrt(2)) - 3


def quarter_disk_area(lam_sq: RationalLike) -> float:
    """Area term for pairs of positive reals: pi lam^2 / 4."""
    return math.pi * float(as_fraction(lam_sq)) / 4


def ratio_at_jumps(S: JumpSet, k_lo: int, k_hi: int) -> list[tuple[int, float]]:
    """(k, |N(2^k) - pi 4^k / 4| / 2^k) for k in [k_lo, k_hi]."""
    out = []
    for k in range(k_lo, k_hi + 1):
        R2 = 4 ** k
        out.append((k, abs(pair_count(S, lam_sq=R2) - quarter_disk_area(R2)) / 2 ** k))
    return out


def unit_interval_census(S: JumpSet) -> dict[int, int]:
    """Number of points in each [m, m+1), m = 0 .. floor(x_max) - 1."""
    counts = {m: 0 for m in range(int(math.floor(S.x_max)))}
    for p in S.points:
        counts[p.interval] = counts.get(p.interval, 0) + 1
    return counts


def within_block_gaps(k: int) -> list[float]:
    """Gaps between successive sqrt-points of block k."""
    vals = sorted(math.sqrt(4 ** k - n * n) for n in block_range(k))
    return [b - a for a, b in zip(vals, vals[1:])]
