"""Spectra and multiplicities of sphere factors S^d (d = 1 is the circle).

Everything here is exact: eigenvalues are handled through their squares
k(k + d - 1), which are integers, and multiplicities are Python ints.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exact import RationalLike, as_fraction, floor_fraction


@dataclass(frozen=True)
class Factor:
    """A sphere factor S^dim; ``dim == 1`` is the circle."""

    dim: int

    def __post_init__(self):
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise ValueError(f"factor dimension must be an integer >= 1, got {self.dim!r}")

    @property
    def is_circle(self) -> bool:
        return self.dim == 1


@dataclass(frozen=True)
class EigenLevel:
    k: int
    eigen_sq: int
    mult: int


def _dim(factor) -> int:
    return factor.dim if isinstance(factor, Factor) else Factor(factor).dim


def eigen_sq(factor, k: int) -> int:
    """Squared eigenvalue k(k + d - 1) of the k-th level."""
    if k < 0:
        raise ValueError("level index must be nonnegative")
    d = _dim(factor)
    return k * (k + d - 1)


def mult(factor, k: int) -> int:
    """Multiplicity of the k-th level; binom(d+k, d) - binom(d+k-2, d) for d >= 2."""
    if k < 0:
        raise ValueError("level index must be nonnegative")
    d = _dim(factor)
    if d == 1:
        return 1 if k == 0 else 2
    # math.comb(n, r) is 0 for r > n, which covers d + k - 2 < d
    return math.comb(d + k, d) - math.comb(d + k - 2, d)


def level(factor, k: int) -> EigenLevel:
    return EigenLevel(k, eigen_sq(factor, k), mult(factor, k))


def levels(factor, T: RationalLike) -> Iterator[EigenLevel]:
    """All levels with eigen_sq <= T, in increasing order."""
    t = floor_fraction(as_fraction(T))
    k = 0
    while eigen_sq(factor, k) <= t:
        yield level(factor, k)
        k += 1


def max_level(d: int, t: int) -> int:
    """Largest k with k(k + d - 1) <= t, or -1 if none (t < 0)."""
    if t < 0:
        return -1
    b = d - 1
    k = (math.isqrt(b * b + 4 * t) - b) // 2
    while (k + 1) * (k + 1 + b) <= t:
        k += 1
    while k * (k + b) > t:
        k -= 1
    return k


def cum_mult_upto(d: int, K: int) -> int:
    """sum_{k=0}^{K} mult(d, k) in closed form (0 for K < 0)."""
    if K < 0:
        return 0
    if d == 1:
        return 2 * K + 1
    return math.comb(K + d, d) + math.comb(K + d - 1, d)


def cum_mult(factor, T: RationalLike) -> int:
    """Total multiplicity of levels with k(k + d - 1) <= T."""
    d = _dim(factor)
    t = floor_fraction(as_fraction(T))
    return cum_mult_upto(d, max_level(d, t))


@dataclass(frozen=True)
class MultiplicityPolynomial:
    """P_{d-1} with exact coefficients, lowest degree first.

    P(k + (d - 1)/2) reproduces the multiplicity of level k.
    """

    dim: int
    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1]

    @property
    def shift(self) -> Fraction:
        return Fraction(self.dim - 1, 2)

    def __call__(self, t: RationalLike) -> Fraction:
        t = as_fraction(t)
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * t + c
        return acc

    def at_level(self, k: int) -> Fraction:
        return self(k + self.shift)


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def poly_P(dim: int) -> MultiplicityPolynomial:
    """Expand 2/(d-1)! * t * prod_{j=1}^{d-2} (t - (d-1)/2 + j)."""
    if dim < 2:
        raise ValueError("the multiplicity polynomial is defined for dim >= 2")
    half = Fraction(dim - 1, 2)
    coeffs = [Fraction(0), Fraction(2, math.factorial(dim - 1))]
    for j in range(1, dim - 1):
        coeffs = _poly_mul(coeffs, [j - half, Fraction(1)])
    return MultiplicityPolynomial(dim, tuple(coeffs))
