"""Weyl counting functions of products of spheres and circles.

A product M = S^{d_1} x ... x S^{d_n} has eigenvalue squares
sum_i k_i (k_i + d_i - 1) with multiplicity prod_i mult(d_i, k_i); N(lam) sums
the multiplicities of all index tuples below lam^2.  Thresholds are exact
rationals and, since every eigenvalue square is an integer, only floor(lam^2)
matters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import mpmath

from . import spectra
from .exact import RationalLike, as_fraction, floor_fraction
from .weighted_lattice import (
    WORKING_DPS,
    LatticeProblem,
    ScaledLattice,
    main_term_mp,
    weighted_count,
)


class DimsParseError(ValueError):
    """Raised for a malformed dimension list such as ``"2,0"``."""

    def __init__(self, token: str, reason: str):
        self.token = token
        super().__init__(f"invalid dimension {token!r}: {reason}")


@dataclass(frozen=True)
class ProductManifold:
    """S^{d_1} x ... x S^{d_n} with sphere factors (d >= 2) gathered first.

    ``order[i]`` is the position in the user's original list of the factor
    now stored at position ``i``.
    """

    dims: tuple[int, ...]
    order: tuple[int, ...] = ()
    k: int = field(init=False)
    total_dim: int = field(init=False)
    shift: tuple[Fraction, ...] = field(init=False)

    def __post_init__(self):
        if not self.dims:
            raise ValueError("a product needs at least one factor")
        for d in self.dims:
            spectra.Factor(d)
        k = sum(1 for d in self.dims if d >= 2)
        if any(d == 1 for d in self.dims[:k]):
            raise ValueError("sphere factors (d >= 2) must precede circle factors")
        if not self.order:
            object.__setattr__(self, "order", tuple(range(len(self.dims))))
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "total_dim", sum(self.dims))
        object.__setattr__(self, "shift", tuple(Fraction(d - 1, 2) for d in self.dims))

    @classmethod
    def from_dims(cls, dims: Sequence[int]) -> "ProductManifold":
        dims = [int(d) for d in dims]
        for d in dims:
            spectra.Factor(d)
        order = [i for i, d in enumerate(dims) if d >= 2] + [i for i, d in enumerate(dims) if d == 1]
        return cls(tuple(dims[i] for i in order), tuple(order))

    @property
    def n(self) -> int:
        return len(self.dims)

    @property
    def shift_norm_sq(self) -> Fraction:
        return sum((y * y for y in self.shift), Fraction(0))

    def label(self) -> str:
        return "x".join(f"S{d}" for d in self.dims)


@dataclass(frozen=True)
class CountResult:
    value: Union[int, Fraction]
    lambda_sq: Fraction
    manifold: ProductManifold


@dataclass(frozen=True)
class ReductionChain:
    N: int
    N1: int
    N2: Fraction
    N3: Fraction
    lambda_sq: Fraction
    manifold: ProductManifold


def parse_dims(text: str) -> ProductManifold:
    """Parse ``"d1,d2,...,dn"``; circles are moved to the right, stably."""
    tokens = [t.strip() for t in text.split(",")]
    if not text.strip():
        raise DimsParseError(text, "empty dimension list")
    dims = []
    for tok in tokens:
        if not tok:
            raise DimsParseError(tok, "empty entry")
        try:
            d = int(tok)
        except ValueError:
            raise DimsParseError(tok, "not an integer") from None
        if d < 1:
            raise DimsParseError(tok, "dimensions must be >= 1")
        dims.append(d)
    return ProductManifold.from_dims(dims)


def _manifold(M) -> ProductManifold:
    if isinstance(M, ProductManifold):
        return M
    if isinstance(M, str):
        return parse_dims(M)
    return ProductManifold.from_dims(M)


def _recursive_count(dims: Sequence[int], t: int, min_index: Sequence[int]) -> int:
    """sum over k_i >= min_index[i], sum eigen_sq <= t, of prod mult; innermost closed form."""
    if t < 0:
        return 0
    *outer, last = range(len(dims))
    if not outer:
        d = dims[last]
        K = spectra.max_level(d, t)
        return spectra.cum_mult_upto(d, K) - spectra.cum_mult_upto(d, min(K, min_index[last] - 1))
    d = dims[0]
    rest_dims, rest_min = dims[1:], min_index[1:]
    total = 0
    kk = min_index[0]
    while True:
        e = kk * (kk + d - 1)
        if e > t:
            break
        total += spectra.mult(d, kk) * _recursive_count(rest_dims, t - e, rest_min)
        kk += 1
    return total


def _sorted_dims(M: ProductManifold) -> tuple[int, ...]:
    return tuple(sorted(M.dims, reverse=True))


def count(M, lambda_sq: RationalLike) -> CountResult:
    """Exact N(lam) for lam^2 = lambda_sq (closed threshold)."""
    M = _manifold(M)
    T = as_fraction(lambda_sq)
    if T < 0:
        raise ValueError("lambda_sq must be nonnegative")
    dims = _sorted_dims(M)
    value = _recursive_count(dims, floor_fraction(T), (0,) * len(dims))
    return CountResult(value, T, M)


def count_lambda(M, lam: RationalLike) -> CountResult:
    return count(M, as_fraction(lam) ** 2)


def brute_count(M, lambda_sq: RationalLike) -> CountResult:
    """Enumerate every index tuple directly; no closed forms."""
    M = _manifold(M)
    T = as_fraction(lambda_sq)
    per_factor = []
    for d in M.dims:
        lv = []
        k = 0
        while k * (k + d - 1) <= T:
            lv.append((k * (k + d - 1), spectra.mult(d, k)))
            k += 1
        per_factor.append(lv)
    total = 0
    for combo in itertools.product(*per_factor):
        if sum(e for e, _ in combo) <= T:
            total += math.prod(m for _, m in combo)
    return CountResult(total, T, M)


def _ball_volume_mp(m: int):
    return mpmath.pi ** (mpmath.mpf(m) / 2) / mpmath.gamma(mpmath.mpf(m) / 2 + 1)


def _sphere_volume_mp(d: int):
    return 2 * mpmath.pi ** (mpmath.mpf(d + 1) / 2) / mpmath.gamma(mpmath.mpf(d + 1) / 2)


def weyl_constant_mp(M) -> mpmath.mpf:
    M = _manifold(M)
    with mpmath.workdps(WORKING_DPS):
        vol = mpmath.mpf(1)
        for d in M.dims:
            vol *= _sphere_volume_mp(d)
        D = M.total_dim
        return _ball_volume_mp(D) * vol / (2 * mpmath.pi) ** D


def weyl_constant(M) -> float:
    """|B_|d|| vol(M) / (2 pi)^|d|."""
    return float(weyl_constant_mp(M))


def weight_constant(M) -> Fraction:
    """prod over sphere factors of 2/(d_i - 1)!."""
    M = _manifold(M)
    return math.prod((Fraction(2, math.factorial(d - 1)) for d in M.dims if d >= 2), start=Fraction(1))


def lattice_problem(M) -> LatticeProblem:
    """The shifted-lattice problem N reduces to (shift y_i = (d_i - 1)/2)."""
    M = _manifold(M)
    return LatticeProblem(M.dims, M.shift)


def lattice_main_term(M) -> float:
    """prod 2/(d_i-1)! times the Dirichlet integral; equals weyl_constant."""
    M = _manifold(M)
    with mpmath.workdps(WORKING_DPS):
        c = weight_constant(M)
        return float(mpmath.mpf(c.numerator) / c.denominator * main_term_mp(M.dims))


def weyl_remainder(M, lambda_sq: RationalLike) -> tuple[int, float, float]:
    """(N, main term, error) with the subtraction done at 40 digits."""
    M = _manifold(M)
    T = as_fraction(lambda_sq)
    N = count(M, T).value
    with mpmath.workdps(WORKING_DPS):
        main = weyl_constant_mp(M) * (mpmath.mpf(T.numerator) / T.denominator) ** (mpmath.mpf(M.total_dim) / 2)
        return N, float(main), float(N - main)


def _n2(M: ProductManifold, threshold: Fraction) -> Fraction:
    # same domain as N1 (sphere indices >= 2) but monomial weights in x = k + y
    sl = ScaledLattice(
        q=2,
        offsets=tuple(d - 1 for d in M.dims),
        exponents=tuple(d - 1 for d in M.dims),
        jmin=tuple(2 if d >= 2 else None for d in M.dims),
    )
    total = sl.weighted_total(sl.budget(threshold))
    return weight_constant(M) * Fraction(total, sl.denominator)


def reduction_chain(M, lam: RationalLike) -> ReductionChain:
    """N, N1, N2, N3 at |m + y|^2 <= lam^2 + |y|^2.

    N1 drops sphere levels 0 and 1, N2 swaps multiplicities for leading
    monomials, N3 is the full half-space shifted-lattice monomial sum.
    """
    M = _manifold(M)
    lam_sq = as_fraction(lam) ** 2
    t = floor_fraction(lam_sq)
    dims = M.dims
    N = _recursive_count(dims, t, (0,) * M.n)
    N1 = _recursive_count(dims, t, tuple(2 if d >= 2 else 0 for d in dims))
    threshold = lam_sq + M.shift_norm_sq
    N2 = _n2(M, threshold)
    N3 = weight_constant(M) * weighted_count(lattice_problem(M), lam_sq=threshold).value
    return ReductionChain(N, N1, N2, N3, lam_sq, M)
