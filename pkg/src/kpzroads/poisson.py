"""Straight-line cars on a marked Poisson process: the baseline without coalescence.

Cars start at the points of a unit-rate Poisson process in the plane, pick a
uniform direction and drive an Exp(gamma) distance in a straight line.
``N_r`` counts those whose trip meets the disc ``B(0, r)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError

TAIL_TOLERANCE = 1e-6


def hits_disc(z: float, theta: float, ell: float, r: float) -> bool:
    """Does a trip of length ``ell`` from distance ``z`` meet ``B(0, r)``?

    ``theta`` is measured from the direction pointing from the car to the
    origin.  Beyond the sine and length clauses the car must also head toward
    the disc (``cos theta >= 0``); otherwise the nearest chord point lies
    behind it.
    """
    if z < 0 or r <= 0 or ell < 0:
        raise DomainError("need z >= 0, r > 0, ell >= 0")
    if z <= r:
        return True
    s, c = math.sin(theta), math.cos(theta)
    if abs(s) > r / z or c < 0:
        return False
    return ell >= z * c - math.sqrt(max(r * r - z * z * s * s, 0.0))


def hits_disc_array(z, theta, ell, r: float) -> np.ndarray:
    z, theta, ell = (np.asarray(a, dtype=float) for a in (z, theta, ell))
    s, c = np.sin(theta), np.cos(theta)
    reach = z * c - np.sqrt(np.maximum(r * r - z * z * s * s, 0.0))
    far = (np.abs(s) * z <= r) & (c >= 0) & (ell >= reach)
    return (z <= r) | far


def poisson_lower_bound(r: float, gamma: float) -> float:
    """``pi r^2 + (2 r / gamma) exp(-gamma r)``."""
    if r <= 0 or gamma <= 0:
        raise DomainError("r and gamma must be positive")
    return math.pi * r * r + (2 * r / gamma) * math.exp(-gamma * r)


def window_tail_bound(r: float, gamma: float, window_radius: float) -> float:
    """Upper bound on the expected number of hits from starts beyond the window.

    A start at distance ``z`` hits with probability at most
    ``(1/pi) arcsin(r/z) exp(-gamma (z - r)) <= (r / 2z) exp(-gamma (z - r))``;
    integrating against ``2 pi z dz`` over ``z > W`` gives
    ``pi r exp(-gamma (W - r)) / gamma``.
    """
    return math.pi * r * math.exp(-gamma * (window_radius - r)) / gamma


def default_window_radius(r: float, gamma: float, tol: float = TAIL_TOLERANCE) -> float:
    """Smallest radius whose tail bound is below ``tol`` (and at least ``r``)."""
    w = r + math.log(math.pi * r / (gamma * tol)) / gamma
    return max(r, math.ceil(w))


@dataclass(frozen=True)
class PoissonModelConfig:
    r: float
    gamma: float
    window_radius: float | None = None
    seed: int = 0
    trials: int = 1000

    def __post_init__(self):
        if self.r <= 0 or self.gamma <= 0:
            raise DomainError("r and gamma must be positive")
        if self.trials < 1:
            raise DomainError("trials must be positive")
        if self.window_radius is None:
            object.__setattr__(self, "window_radius", default_window_radius(self.r, self.gamma))
        if self.window_radius < self.r:
            raise DomainError("window_radius must be at least r")
        tail = window_tail_bound(self.r, self.gamma, self.window_radius)
        if tail >= TAIL_TOLERANCE:
            raise DomainError(
                f"window_radius={self.window_radius} leaves expected tail {tail:.3g} >= {TAIL_TOLERANCE}"
            )

    @property
    def tail_bound(self) -> float:
        return window_tail_bound(self.r, self.gamma, self.window_radius)


def simulate_trial(config: PoissonModelConfig, trial: int) -> int:
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, trial]))
    W = config.window_radius
    m = rng.poisson(math.pi * W * W)
    z = W * np.sqrt(rng.random(m))
    alpha = rng.uniform(0.0, 2 * math.pi, m)
    heading = rng.uniform(0.0, 2 * math.pi, m)
    ell = rng.exponential(1.0 / config.gamma, m)
    # relative angle between heading and the direction back to the origin
    rel = heading - (alpha + math.pi)
    return int(hits_disc_array(z, rel, ell, config.r).sum())


def simulate_N_r(config: PoissonModelConfig, pool=None) -> list[int]:
    mapper = pool.map if pool is not None else map
    return list(mapper(lambda t: simulate_trial(config, t), range(config.trials)))


@dataclass(frozen=True)
class PoissonSummary:
    mean: float
    se: float
    variance: float
    analytic_bound: float
    tail_bound: float
    trials: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)


def summarize(config: PoissonModelConfig, counts) -> PoissonSummary:
    c = np.asarray(counts, dtype=float)
    var = float(c.var(ddof=1)) if len(c) > 1 else 0.0
    return PoissonSummary(float(c.mean()), math.sqrt(var / len(c)), var,
                          poisson_lower_bound(config.r, config.gamma), config.tail_bound, len(c))


def counts_csv(counts) -> str:
    return "trial,count\n" + "".join(f"{i},{c}\n" for i, c in enumerate(counts))
