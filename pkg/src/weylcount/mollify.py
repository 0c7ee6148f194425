"""Mollified counting functions and the ball Fourier transform.

The mollifier is the standard bump rho(x) = c_n exp(-1/(1 - |x|^2)) on the
unit ball, rescaled to rho_eps(x) = eps^-n rho(x/eps).  (chi_{lam B} * rho_eps)(x)
is the rho_eps-mass of the ball of radius lam around x; it depends on |x| only
and is computed by a one-dimensional quadrature over the radius of the
mollifier variable, the angular part being a regularized incomplete beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import integrate, special

from .analysis import ExponentFit, FitError, RemainderSeries, fit_exponent
from .weighted_lattice import LatticeProblem, scaled_lattice, weighted_count

PROFILE_TOL = 1e-8


class QuadratureError(RuntimeError):
    def __init__(self, achieved: float, target: float = PROFILE_TOL):
        self.achieved = achieved
        super().__init__(f"quadrature did not reach {target:g}; error bound {achieved:g}")


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return 2 * math.pi ** (n / 2) / math.gamma(n / 2)


def _bump(s):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    inside = s < 1
    out[inside] = np.exp(-1.0 / (1.0 - s[inside] ** 2))
    return out


def _bump_scalar(s: float) -> float:
    return math.exp(-1.0 / (1.0 - s * s)) if s < 1 else 0.0


@lru_cache(maxsize=None)
def bump_constant(n: int) -> float:
    """c_n with int_{R^n} c_n exp(-1/(1-|x|^2)) dx = 1."""
    val, _ = integrate.quad(lambda s: s ** (n - 1) * _bump_scalar(s), 0, 1, epsabs=0, epsrel=1e-12)
    return 1.0 / (sphere_area(n) * val)


@dataclass(frozen=True)
class Mollifier:
    n: int
    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    def density(self, x) -> np.ndarray:
        """rho_eps at points x (shape (..., n))."""
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1) / self.epsilon
        return bump_constant(self.n) * _bump(r) / self.epsilon ** self.n

    def radial_density(self, s: float) -> float:
        """density of |z|/eps for z ~ rho_eps, on [0, 1]."""
        return bump_constant(self.n) * sphere_area(self.n) * s ** (self.n - 1) * _bump_scalar(s)

    def mass(self) -> tuple[float, float]:
        """(integral of rho_eps, quadrature error), in polar coordinates."""
        eps, n = self.epsilon, self.n
        c = bump_constant(n) * sphere_area(n) / eps ** n
        val, err = integrate.quad(lambda r: c * r ** (n - 1) * _bump_scalar(r / eps), 0, eps,
                                  epsabs=1e-14, epsrel=1e-13)
        return val, err


def _sphere_fraction(n: int, t0: float) -> float:
    """Fraction of S^{n-1} with first coordinate >= t0."""
    if t0 <= -1:
        return 1.0
    if t0 >= 1:
        return 0.0
    if n == 1:
        return 0.5  # only +1 qualifies for -1 < t0 < 1
    half = 0.5 * special.betainc((n - 1) / 2, 0.5, 1 - t0 * t0)
    return half if t0 >= 0 else 1 - half


def radial_profile_with_error(n: int, lam: float, eps: float, r: float) -> tuple[float, float]:
    """(chi_{lam B} * rho_eps)(x) at |x| = r, with the quadrature error bound."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    r = abs(r)
    if r <= lam - eps:
        return 1.0, 0.0
    if r >= lam + eps:
        return 0.0, 0.0
    moll = Mollifier(n, eps)
    if r == 0:
        # centred: mass of rho_eps inside radius lam
        smax = min(1.0, lam / eps)
        val, err = integrate.quad(moll.radial_density, 0, smax, epsabs=PROFILE_TOL / 10, limit=200)
        return min(1.0, max(0.0, val)), err

    def integrand(s):
        if s <= 0:
            return 0.0
        t0 = (r * r + eps * eps * s * s - lam * lam) / (2 * r * eps * s)
        return moll.radial_density(s) * _sphere_fraction(n, t0)

    # kinks where the sphere of radius eps*s first/last touches the ball
    breaks = sorted({b for b in ((r - lam) / eps, (lam - r) / eps, (r + lam) / eps) if 0 < b < 1})
    val, err = integrate.quad(integrand, 0, 1, points=breaks or None, epsabs=PROFILE_TOL / 10,
                              epsrel=1e-10, limit=400)
    if err > PROFILE_TOL:
        raise QuadratureError(err)
    return min(1.0, max(0.0, val)), err


def radial_profile(n: int, lam: float, eps: float, r: float) -> float:
    return radial_profile_with_error(n, lam, eps, r)[0]


@dataclass(frozen=True)
class MollifiedSum:
    value: float
    interior: Fraction
    shell: float
    shell_points: int
    error_bound: float
    lam: float
    eps: float


def mollified_count(problem: LatticeProblem, lam: float, eps: float) -> MollifiedSum:
    """sum over the lattice of (chi_{lam B} * rho_eps)(m) * weight(m).

    Points with |m| <= lam - eps contribute their full weight and are summed
    exactly; only the shell lam - eps < |m| < lam + eps needs quadrature.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    lat = scaled_lattice(problem)
    inner = max(lam - eps, 0.0)
    inner_sq = Fraction(inner) ** 2 if lam - eps >= 0 else Fraction(-1)
    lo_budget = lat.budget(inner_sq)
    hi_budget = lat.budget(Fraction(lam + eps) ** 2)
    interior = Fraction(lat.weighted_total(lo_budget), lat.denominator) if lo_budget >= 0 else Fraction(0)
    q = lat.q
    cache: dict[int, tuple[float, float]] = {}
    shell_terms, err_terms = [], []
    count = 0
    for X in lat.points(lo_budget, hi_budget):
        sq = sum(x * x for x in X)
        if sq not in cache:
            cache[sq] = radial_profile_with_error(problem.n, lam, eps, math.sqrt(sq) / q)
        val, err = cache[sq]
        w = 1.0
        for x, e in zip(X, lat.exponents):
            if e:
                w *= (x / q) ** e
        shell_terms.append(val * w)
        err_terms.append(err * w)
        count += 1
    shell = math.fsum(shell_terms)
    value = float(interior) + shell
    return MollifiedSum(value, interior, shell, count, math.fsum(err_terms), lam, eps)


def epsilon_star(lam: float, n: int) -> float:
    """lam^{-(n-1)/(n+1)}, the balancing choice of eps."""
    if lam <= 0:
        raise ValueError("lam must be positive")
    return lam ** (-(n - 1) / (n + 1))


@dataclass(frozen=True)
class SandwichReport:
    lower: MollifiedSum
    exact: Fraction
    upper: MollifiedSum

    @property
    def slack(self) -> float:
        return self.lower.error_bound + self.upper.error_bound

    @property
    def holds(self) -> bool:
        ex = float(self.exact)
        tol = self.slack + 1e-12 * max(1.0, abs(ex))
        return self.lower.value - tol <= ex <= self.upper.value + tol


def sandwich(problem: LatticeProblem, lam: float, eps: float) -> SandwichReport:
    """N_eps(lam - eps) <= N(lam) <= N_eps(lam + eps)."""
    exact = weighted_count(problem, lam_sq=Fraction(lam) ** 2).value
    return SandwichReport(mollified_count(problem, lam - eps, eps), exact,
                          mollified_count(problem, lam + eps, eps))


# ------------------------------------------------------------ ball transform


def ball_fourier(n: int, xi) -> np.ndarray:
    """chi_B^(xi) = |xi|^{-n/2} J_{n/2}(2 pi |xi|) for the e^{-2 pi i <x, xi>} convention."""
    xi = np.abs(np.asarray(xi, dtype=float))
    out = np.empty_like(xi)
    small = xi < 1e-8
    vol = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    out[small] = vol
    x = xi[~small]
    out[~small] = special.jv(n / 2, 2 * math.pi * x) / x ** (n / 2)
    return out


def ball_fourier_quad(n: int, xi: float) -> float:
    """Same transform by direct quadrature over slices x_1 = t (n >= 2)."""
    if n == 1:
        return math.sin(2 * math.pi * xi) / (math.pi * xi) if xi else 2.0
    vol_slice = math.pi ** ((n - 1) / 2) / math.gamma((n - 1) / 2 + 1)
    w = 2 * math.pi * xi
    val, _ = integrate.quad(lambda t: (1 - t * t) ** ((n - 1) / 2), -1, 1, weight="cos", wvar=w,
                            epsabs=1e-13, epsrel=1e-12, limit=200)
    return vol_slice * val


def _local_maxima(values: np.ndarray) -> np.ndarray:
    v = values
    return np.where((v[1:-1] > v[:-2]) & (v[1:-1] >= v[2:]))[0] + 1


@dataclass(frozen=True)
class DecayFit:
    fit: ExponentFit
    envelope_points: int
    expected: float

    @property
    def slope(self) -> float:
        return self.fit.slope


def ball_fourier_decay(n: int, xi_magnitudes: Sequence[float]) -> DecayFit:
    """Fit the log-log slope of the local maxima of |chi_B^| sampled at ``xi_magnitudes``."""
    xi = np.asarray(sorted(xi_magnitudes), dtype=float)
    if xi.size == 0 or xi[0] < 1:
        raise ValueError("magnitudes must be >= 1")
    if xi[-1] < 10 * xi[0]:
        raise ValueError("magnitudes must span at least one decade")
    vals = np.abs(ball_fourier(n, xi))
    idx = _local_maxima(vals)
    if idx.size < 8:
        raise FitError(f"only {idx.size} envelope points; need 8")
    series = RemainderSeries(tuple(zip(xi[idx], vals[idx])), f"ball transform n={n}")
    return DecayFit(fit_exponent(series), int(idx.size), -(n + 1) / 2)
