"""Weighted point counts over shifted lattices and their continuous main term.

The sum of interest is

    sum over m in (Z^n + y), m_i >= 0 for i < k, |m| <= lam, of prod_{i<k} m_i^(d_i - 1)

In exact mode the shift is rational.  All coordinates are scaled by the
common denominator q of the shift so that every lattice point becomes an
integer vector X = q*m, the ball constraint becomes sum X_i^2 <= floor(q^2 lam^2)
and the weight becomes an integer prod X_i^e_i divided by q^(sum e_i).  The
last coordinate is summed in closed form with Faulhaber polynomials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

import mpmath

from .exact import RationalLike, as_fraction, floor_fraction

WORKING_DPS = 40


@dataclass(frozen=True)
class LatticeProblem:
    """Data of a weighted shifted-lattice count.

    ``dims`` is the full multi-index (d_1, ..., d_k, 1, ..., 1); the first
    ``k`` entries are >= 2 and carry the weights x_i^(d_i - 1) on the
    half-lines x_i >= 0.
    """

    dims: tuple[int, ...]
    shift: tuple = ()
    mode: str = "exact"
    n: int = field(init=False)
    k: int = field(init=False)

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims:
            raise ValueError("need at least one coordinate")
        k = sum(1 for d in dims if d >= 2)
        if any(d < 1 for d in dims) or any(d < 2 for d in dims[:k]):
            raise ValueError(f"dims must be (d_1..d_k >= 2, 1, ..., 1), got {dims}")
        if self.mode not in ("exact", "floating"):
            raise ValueError(f"unknown mode {self.mode!r}")
        shift = tuple(self.shift) if self.shift else (0,) * len(dims)
        if len(shift) != len(dims):
            raise ValueError("shift length must equal the number of coordinates")
        if self.mode == "exact":
            shift = tuple(as_fraction(s) for s in shift)
        else:
            shift = tuple(float(s) for s in shift)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "n", len(dims))
        object.__setattr__(self, "k", k)

    @classmethod
    def from_nkd(cls, n: int, k: int, weighted: Sequence[int], shift=(), mode="exact"):
        if len(weighted) != k:
            raise ValueError(f"expected {k} weighted dimensions, got {len(weighted)}")
        if not 0 <= k <= n:
            raise ValueError("need 0 <= k <= n")
        return cls(tuple(weighted) + (1,) * (n - k), shift, mode)

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.dims)


@dataclass(frozen=True)
class WeightedSum:
    value: Union[Fraction, float]
    lam_sq: Union[Fraction, float]
    problem: LatticeProblem

    @property
    def lam(self) -> float:
        return math.sqrt(self.lam_sq)


# ---------------------------------------------------------------- Faulhaber


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with the B_1 = +1/2 convention."""
    if m < 0:
        raise ValueError("index must be nonnegative")
    B = _bernoulli_table(m)
    return B[m]


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # Akiyama-Tanigawa gives B_1 = +1/2 directly
    out = []
    a = [Fraction(0)] * (m + 1)
    for i in range(m + 1):
        a[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return tuple(out)


@lru_cache(maxsize=None)
def _faulhaber(t: int) -> tuple[int, tuple[int, ...]]:
    """Power-sum polynomial S_t(x) = sum_{j=1}^x j^t as (denominator, int coefficients).

    Coefficients are lowest degree first.  S_t(x) - S_t(x-1) = x^t holds as a
    polynomial identity, so S_t(b) - S_t(a-1) is the sum over any integer range.
    """
    B = _bernoulli_table(t)
    coeffs = [Fraction(0)] * (t + 2)
    for i in range(t + 1):
        coeffs[t + 1 - i] += Fraction(math.comb(t + 1, i)) * B[i] / (t + 1)
    den = math.lcm(*(c.denominator for c in coeffs))
    return den, tuple(int(c * den) for c in coeffs)


def _power_sum(t: int, x: int) -> int:
    den, coeffs = _faulhaber(t)
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    q, r = divmod(acc, den)
    assert r == 0
    return q


def _range_power_sum(t: int, a: int, b: int) -> int:
    """sum_{j=a}^{b} j^t for integers a <= b + 1."""
    if t == 0:
        return b - a + 1
    if t == 1:
        return (a + b) * (b - a + 1) // 2
    return _power_sum(t, b) - _power_sum(t, a - 1)


def _progression_power_sum(e: int, q: int, p: int, a: int, b: int) -> int:
    """sum_{j=a}^{b} (q j + p)^e, exact."""
    if b < a:
        return 0
    if e == 0:
        return b - a + 1
    if e == 1:
        return q * (a + b) * (b - a + 1) // 2 + p * (b - a + 1)
    total = 0
    qt = 1
    for t in range(e + 1):
        total += math.comb(e, t) * qt * p ** (e - t) * _range_power_sum(t, a, b)
        qt *= q
    return total


def faulhaber_sum(exponent: int, a: int, b: int, shift: RationalLike = 0) -> Fraction:
    """sum_{j=a}^{b} (j + shift)^exponent, evaluated in closed form."""
    if exponent < 0:
        raise ValueError("exponent must be nonnegative")
    if a > b:
        raise ValueError("need a <= b")
    s = as_fraction(shift)
    q, p = s.denominator, s.numerator
    return Fraction(_progression_power_sum(exponent, q, p, a, b), q ** exponent)


# ---------------------------------------------------------- exact recursion


@dataclass(frozen=True)
class ScaledLattice:
    """Integer form of a lattice domain: X_i = q*j + offsets[i], j >= jmin[i].

    ``jmin[i] is None`` means the coordinate runs over all of Z.
    """

    q: int
    offsets: tuple[int, ...]
    exponents: tuple[int, ...]
    jmin: tuple[Optional[int], ...]

    def budget(self, radius_sq: RationalLike) -> int:
        """Largest integer B with sum X_i^2 <= B  <=>  |m|^2 <= radius_sq."""
        r = as_fraction(radius_sq)
        if r < 0:
            return -1
        return floor_fraction(r * self.q * self.q)

    @property
    def denominator(self) -> int:
        return self.q ** sum(self.exponents)

    def _range(self, i: int, rem: int) -> tuple[int, int]:
        s = math.isqrt(rem)
        q, p = self.q, self.offsets[i]
        hi = (s - p) // q
        lo = -((s + p) // q)
        if self.jmin[i] is not None:
            lo = max(lo, self.jmin[i])
        return lo, hi

    def weighted_total(self, budget: int) -> int:
        """sum of prod X_i^e_i over points with sum X_i^2 <= budget."""
        if budget < 0:
            return 0
        return self._total(0, budget)

    def _total(self, i: int, rem: int) -> int:
        lo, hi = self._range(i, rem)
        if hi < lo:
            return 0
        q, p, e = self.q, self.offsets[i], self.exponents[i]
        if i == len(self.offsets) - 1:
            return _progression_power_sum(e, q, p, lo, hi)
        total = 0
        nxt = i + 1
        for j in range(lo, hi + 1):
            x = q * j + p
            if e == 0:
                total += self._total(nxt, rem - x * x)
            else:
                total += x ** e * self._total(nxt, rem - x * x)
        return total

    def points(self, lo_budget: int, hi_budget: int) -> Iterator[tuple[int, ...]]:
        """Scaled points with lo_budget < sum X_i^2 <= hi_budget."""
        if hi_budget < 0:
            return
        yield from self._points(0, (), 0, lo_budget, hi_budget)

    def _points(self, i, prefix, used, lo_b, hi_b):
        lo, hi = self._range(i, hi_b - used)
        q, p = self.q, self.offsets[i]
        last = i == len(self.offsets) - 1
        for j in range(lo, hi + 1):
            x = q * j + p
            s = used + x * x
            if last:
                if s > lo_b:
                    yield prefix + (x,)
            else:
                yield from self._points(i + 1, prefix + (x,), s, lo_b, hi_b)


def _descending_order(dims: Sequence[int]) -> list[int]:
    return sorted(range(len(dims)), key=lambda i: -dims[i])


def scaled_lattice(problem: LatticeProblem) -> ScaledLattice:
    """Integer form of the problem's domain, coordinates sorted by descending d."""
    if problem.mode != "exact":
        raise ValueError("scaled form needs an exact (rational) shift")
    order = _descending_order(problem.dims)
    q = math.lcm(*(s.denominator for s in problem.shift))
    offsets, exps, jmin = [], [], []
    for i in order:
        s = problem.shift[i]
        p = s.numerator * (q // s.denominator)
        offsets.append(p)
        exps.append(problem.dims[i] - 1)
        # x_i >= 0  <=>  q j + p >= 0  <=>  j >= ceil(-p / q)
        jmin.append(-(p // q) if i < problem.k else None)
    return ScaledLattice(q, tuple(offsets), tuple(exps), tuple(jmin))


def _lam_sq(lam, lam_sq):
    if (lam is None) == (lam_sq is None):
        raise TypeError("give exactly one of lam or lam_sq")
    if lam_sq is not None:
        return lam_sq
    return as_fraction(lam) ** 2


def weighted_count(problem: LatticeProblem, lam=None, *, lam_sq=None) -> WeightedSum:
    """Weighted count over the closed ball |m| <= lam (ties included)."""
    r = _lam_sq(lam, lam_sq)
    if problem.mode == "floating":
        r = float(r)
        return WeightedSum(_floating_count(problem, r), r, problem)
    r = as_fraction(r)
    lat = scaled_lattice(problem)
    total = lat.weighted_total(lat.budget(r))
    return WeightedSum(Fraction(total, lat.denominator), r, problem)


# ------------------------------------------------------- floating recursion


def _float_progression_sum(e: int, y: float, a: int, b: int) -> list[float]:
    if b < a:
        return []
    if e == 0:
        return [float(b - a + 1)]
    return [math.comb(e, t) * y ** (e - t) * _range_power_sum(t, a, b) for t in range(e + 1)]


def _floating_count(problem: LatticeProblem, r: float) -> float:
    """Real-shift version; terms are collected and summed with math.fsum."""
    order = _descending_order(problem.dims)
    ys = [problem.shift[i] for i in order]
    es = [problem.dims[i] - 1 for i in order]
    half = [i < problem.k for i in order]
    terms: list[float] = []
    last = len(order) - 1

    def rec(i: int, rem: float, w: float):
        if rem < 0:
            return
        s = math.sqrt(rem)
        y = ys[i]
        lo, hi = math.ceil(-s - y), math.floor(s - y)
        if half[i]:
            lo = max(lo, math.ceil(-y))
        if i == last:
            terms.extend(w * t for t in _float_progression_sum(es[i], y, lo, hi))
            return
        for j in range(lo, hi + 1):
            x = j + y
            rec(i + 1, rem - x * x, w * x ** es[i])

    rec(0, r, 1.0)
    return math.fsum(terms)


# ----------------------------------------------------------------- main term


def main_term(problem: LatticeProblem) -> float:
    """Integral of prod x_i^(d_i-1) over the unit ball, x_i >= 0 for i < k.

    Dirichlet: prod Gamma(d_i/2) / (2^k Gamma(|d|/2 + 1)).
    """
    return float(main_term_mp(problem.dims))


def main_term_mp(dims: Sequence[int]) -> mpmath.mpf:
    k = sum(1 for d in dims if d >= 2)
    with mpmath.workdps(WORKING_DPS):
        num = mpmath.mpf(1)
        for d in dims:
            num *= mpmath.gamma(mpmath.mpf(d) / 2)
        return num / (mpmath.mpf(2) ** k * mpmath.gamma(mpmath.mpf(sum(dims)) / 2 + 1))


def _to_mpf(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def remainder_from_sum(s: WeightedSum) -> float:
    """E = sum - lam^|d| * main term, subtracted at 40 significant digits."""
    with mpmath.workdps(WORKING_DPS):
        lam_pow = _to_mpf(s.lam_sq) ** (mpmath.mpf(s.problem.total_dim) / 2)
        return float(_to_mpf(s.value) - lam_pow * main_term_mp(s.problem.dims))


def remainder(problem: LatticeProblem, lam=None, *, lam_sq=None) -> float:
    return remainder_from_sum(weighted_count(problem, lam, lam_sq=lam_sq))
