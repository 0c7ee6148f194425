"""Remainder series, sampling grids and log-log exponent fits."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .exact import as_fraction, floor_fraction

MIN_SAMPLES = 8
DROP_RELATIVE = 1e-9
FLAG_DROPPED_FRACTION = 0.3


class FitError(ValueError):
    """Too few usable samples for an exponent fit."""


@dataclass(frozen=True)
class RemainderSeries:
    """Sampled (lam, E(lam)) pairs.

    ``scale_exponent`` is the |d| used by the near-zero dropping rule
    |E| < 1e-9 * lam^|d|; leave it at 0 for an absolute 1e-9 cutoff.
    """

    samples: tuple[tuple[float, float], ...]
    source: str = ""
    scale_exponent: float = 0.0

    def __post_init__(self):
        samples = tuple((float(l), float(e)) for l, e in self.samples)
        lams = [l for l, _ in samples]
        if any(b <= a for a, b in zip(lams, lams[1:])):
            raise ValueError("lambdas must be strictly increasing")
        object.__setattr__(self, "samples", samples)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([l for l, _ in self.samples])

    @property
    def errors(self) -> np.ndarray:
        return np.array([e for _, e in self.samples])

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    r_squared: float
    dropped: int
    used: int
    flagged: bool = False

    def __str__(self):
        flag = "  [>30% dropped]" if self.flagged else ""
        return (f"slope={self.slope:.6f} intercept={self.intercept:.6f} "
                f"R^2={self.r_squared:.6f} used={self.used} dropped={self.dropped}{flag}")


def envelope(series: RemainderSeries, bins_per_octave: int = 4) -> RemainderSeries:
    """Keep the sample with the largest |E| in each 2^(1/bins) band of lam."""
    if len(series) == 0:
        return series
    lam0 = series.samples[0][0]
    best: dict[int, tuple[float, float]] = {}
    for lam, err in series.samples:
        b = int(math.floor(bins_per_octave * math.log2(lam / lam0) + 1e-12))
        if b not in best or abs(err) > abs(best[b][1]):
            best[b] = (lam, err)
    picked = tuple(best[b] for b in sorted(best))
    return RemainderSeries(picked, series.source + " [envelope]", series.scale_exponent)


def fit_exponent(series: RemainderSeries, *, use_envelope: bool = False,
                 bins_per_octave: int = 4) -> ExponentFit:
    """OLS of log|E| on log lam after dropping near-zero samples."""
    if use_envelope:
        series = envelope(series, bins_per_octave)
    lam = series.lambdas
    err = np.abs(series.errors)
    if len(lam) == 0:
        raise FitError("empty series")
    keep = err >= DROP_RELATIVE * lam ** series.scale_exponent
    dropped = int((~keep).sum())
    used = int(keep.sum())
    if used < MIN_SAMPLES:
        raise FitError(f"only {used} usable samples (need {MIN_SAMPLES}); {dropped} dropped as near-zero")
    x = np.log(lam[keep])
    y = np.log(err[keep])
    # centred least squares; exact power laws come back to rounding error
    xm, ym = x.mean(), y.mean()
    sxx = float(((x - xm) ** 2).sum())
    slope = float(((x - xm) * (y - ym)).sum() / sxx)
    intercept = float(ym - slope * xm)
    resid = y - (intercept + slope * x)
    syy = float(((y - ym) ** 2).sum())
    r2 = 1.0 if syy == 0 else max(0.0, min(1.0, 1.0 - float((resid ** 2).sum()) / syy))
    flagged = dropped > FLAG_DROPPED_FRACTION * len(lam)
    return ExponentFit(slope, intercept, r2, dropped, used, flagged)


def max_normalized_error(series: RemainderSeries, exponent: float) -> float:
    """max |E(lam)| / lam^exponent over the samples."""
    if not math.isfinite(exponent):
        raise ValueError("exponent must be finite")
    if len(series) == 0:
        return 0.0
    return float(np.max(np.abs(series.errors) / series.lambdas ** exponent))


# ------------------------------------------------------------------- grids


@dataclass(frozen=True)
class Grid:
    """Geometric lam grid; lam^2 values are exact rationals."""

    lam_min: float
    lam_max: float
    samples: Optional[int] = None
    per_decade: int = 64
    offset_jumps: bool = True

    def lambda_squares(self) -> list[Fraction]:
        if not 0 < self.lam_min < self.lam_max:
            raise ValueError("need 0 < lam_min < lam_max")
        count = self.samples
        if count is None:
            count = max(2, int(round(self.per_decade * math.log10(self.lam_max / self.lam_min))) + 1)
        lams = np.geomspace(self.lam_min, self.lam_max, count)
        out: list[Fraction] = []
        for lam in lams:
            sq = Fraction(float(lam)) ** 2
            if self.offset_jumps:
                # half-integer lam^2 sits strictly between integer eigenvalue squares
                sq = Fraction(2 * floor_fraction(sq) + 1, 2)
            if not out or sq > out[-1]:
                out.append(sq)
        return out

    def describe(self) -> dict:
        return {
            "lam_min": self.lam_min,
            "lam_max": self.lam_max,
            "samples": self.samples,
            "per_decade": self.per_decade,
            "spacing": "geometric",
            "offset_jumps": self.offset_jumps,
        }


def evaluate(fn: Callable, items: Sequence, threads: Optional[int] = None) -> list:
    """Map ``fn`` over ``items``; results come back in input order."""
    threads = threads or os.cpu_count() or 1
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def series_from_points(points: Iterable[tuple[float, float]], source: str = "",
                       scale_exponent: float = 0.0) -> RemainderSeries:
    return RemainderSeries(tuple(points), source, scale_exponent)
