"""Binomial confidence intervals and log-log power-law fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def wilson_interval(hits: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion.

    Unlike the Wald interval it keeps positive width at ``hits = 0`` and
    ``hits = trials``, where tail probabilities live.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    if not 0 <= hits <= trials:
        raise DomainError(f"hits={hits} outside [0, {trials}]")
    if z <= 0:
        raise DomainError("z must be positive")
    p = hits / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo, hi = centre - half, centre + half
    # pin the exact boundaries that rounding would otherwise blur
    if hits == 0:
        lo = 0.0
    if hits == trials:
        hi = 1.0
    return max(0.0, min(lo, p)), min(1.0, max(hi, p))


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line ``log y = slope * log x + intercept``."""

    slope: float
    intercept: float
    r_squared: float
    n_points: int
    n_excluded: int = 0

    def predict(self, x):
        return np.exp(self.intercept) * np.asarray(x, dtype=float) ** self.slope


def fit_power_law(xs, ys, drop_zeros: bool = False) -> PowerLawFit:
    """Fit ``y = exp(intercept) * x**slope`` by least squares on logs.

    With ``drop_zeros`` rows whose ``y`` is zero (a tail with no hits) are
    excluded and counted in ``n_excluded``; otherwise they are an error.
    """
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DomainError("xs and ys must be one-dimensional and of equal length")
    excluded = 0
    if drop_zeros:
        keep = y != 0
        excluded = int((~keep).sum())
        x, y = x[keep], y[keep]
    if np.any(x <= 0) or np.any(y <= 0):
        raise DomainError("power-law fit needs strictly positive data")
    if len(np.unique(x)) < 2:
        raise DomainError("need at least two distinct abscissae")
    lx, ly = np.log(x), np.log(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    # constant data fits exactly; scale-aware cutoff absorbs log rounding
    r2 = 1.0 if ss_tot <= 1e-24 * max(1.0, float(np.sum(ly**2))) else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(float(slope), float(intercept), r2, len(x), excluded)
