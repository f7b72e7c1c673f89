"""Last-passage dynamic programming and geodesics.

Public values follow the interior convention: the weight of an up-right path
from ``u`` to ``v`` is the sum of ``tau`` over the path with both endpoints
removed.  Kernels run the endpoint-inclusive recursion

    G(w) = tau(w) + max(G(w - e1), G(w - e2))

on a local copy of the rectangle whose endpoint weights are zeroed, which
gives the interior value without subtracting anything afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import BoundsError, DomainError, TieError
from .lattice import LatticePoint, Region, WeightField, as_point, rotate_coords

TIE_POLICIES = ("strict", "up-first")


@numba.njit(cache=True, nogil=True)
def forward_inclusive(w, out):
    """out[i, j] = max over up-right paths (0,0)->(i,j) of summed w, inclusive."""
    nx, ny = w.shape
    out[0, 0] = w[0, 0]
    for j in range(1, ny):
        out[0, j] = out[0, j - 1] + w[0, j]
    for i in range(1, nx):
        out[i, 0] = out[i - 1, 0] + w[i, 0]
        for j in range(1, ny):
            a = out[i - 1, j]
            b = out[i, j - 1]
            out[i, j] = w[i, j] + (a if a > b else b)


@numba.njit(cache=True, nogil=True)
def backward_exclusive(w, out):
    """out[i, j] = best sum of w strictly after (i, j) on paths to the far corner.

    The far corner's own weight is never counted, so ``out`` is the interior
    passage time to the corner.
    """
    nx, ny = w.shape
    out[nx - 1, ny - 1] = 0.0
    # step into the corner adds nothing
    for j in range(ny - 2, -1, -1):
        out[nx - 1, j] = out[nx - 1, j + 1] + (w[nx - 1, j + 1] if j + 1 < ny - 1 else 0.0)
    for i in range(nx - 2, -1, -1):
        out[i, ny - 1] = out[i + 1, ny - 1] + (w[i + 1, ny - 1] if i + 1 < nx - 1 else 0.0)
        for j in range(ny - 2, -1, -1):
            a = out[i + 1, j] + w[i + 1, j]
            b = out[i, j + 1] + w[i, j + 1]
            out[i, j] = a if a > b else b


@numba.njit(cache=True, nogil=True)
def backtrack(dp, up_first):
    """Walk the inclusive table from the far corner back to (0, 0).

    Returns the path as an (n, 2) offset array plus a flag that is set when a
    tie was met.  With ``up_first`` ties pick the predecessor below, i.e. the
    path's step into the current vertex is an up-step.
    """
    nx, ny = dp.shape
    n = nx + ny - 1
    path = np.empty((n, 2), dtype=np.int64)
    i = nx - 1
    j = ny - 1
    tie = False
    k = n - 1
    path[k, 0] = i
    path[k, 1] = j
    while i > 0 or j > 0:
        if i == 0:
            j -= 1
        elif j == 0:
            i -= 1
        else:
            a = dp[i - 1, j]
            b = dp[i, j - 1]
            if a == b:
                tie = True
                if up_first:
                    j -= 1
                else:
                    i -= 1
            elif a > b:
                i -= 1
            else:
                j -= 1
        k -= 1
        path[k, 0] = i
        path[k, 1] = j
    return path, tie


@dataclass(frozen=True, eq=False)
class GeodesicPath:
    """An up-right lattice path together with its interior passage value."""

    points: tuple[LatticePoint, ...]
    value: float

    def __post_init__(self):
        if not self.points:
            raise DomainError("a path needs at least one point")
        object.__setattr__(self, "points", tuple(as_point(p) for p in self.points))
        for a, b in zip(self.points, self.points[1:]):
            if (b.x - a.x, b.y - a.y) not in ((1, 0), (0, 1)):
                raise DomainError(f"non up-right step {a} -> {b}")

    @property
    def start(self) -> LatticePoint:
        return self.points[0]

    @property
    def end(self) -> LatticePoint:
        return self.points[-1]

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        x, y = p
        t = x + y - self.start.x - self.start.y
        return 0 <= t < len(self.points) and self.points[t] == (x, y)

    def at_time(self, T: int) -> LatticePoint | None:
        """The path vertex on the line ``x + y = T``, if the path meets it."""
        t = T - sum(self.start)
        if 0 <= t < len(self.points):
            return self.points[t]
        return None

    def psi_profile(self) -> dict[int, int]:
        return {p.x + p.y: p.x - p.y for p in self.points}

    def to_csv(self) -> str:
        return "x,y\n" + "".join(f"{p.x},{p.y}\n" for p in self.points)

    def to_json(self) -> str:
        return json.dumps([[p.x, p.y] for p in self.points])


@dataclass(frozen=True)
class DirectedGeodesicSpec:
    """Start point, direction in (0, pi/2) and horizon radius for a finite
    surrogate of the semi-infinite geodesic."""

    start: LatticePoint
    theta: float
    horizon: float

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        if not 0.0 < self.theta < math.pi / 2:
            raise DomainError(f"theta={self.theta} must lie strictly inside (0, pi/2)")
        if not self.horizon >= 1:
            raise DomainError("horizon must be at least 1")

    @property
    def target(self) -> LatticePoint:
        return horizon_target(self.start, self.theta, self.horizon)


def horizon_target(start, theta: float, horizon: float) -> LatticePoint:
    """``start + round(horizon * (cos theta, sin theta))`` with halves rounded up."""
    return LatticePoint(
        start[0] + int(math.floor(horizon * math.cos(theta) + 0.5)),
        start[1] + int(math.floor(horizon * math.sin(theta) + 0.5)),
    )


def _check_pair(field: WeightField, u, v):
    u, v = as_point(u), as_point(v)
    if u.x > v.x or u.y > v.y:
        raise DomainError(f"{u} is not <= {v} componentwise")
    for p in (u, v):
        if not field.region.contains(p):
            raise BoundsError(f"{p} outside field region {field.region.lo}..{field.region.hi}")
    return u, v


def _interior_table(field: WeightField, u, v) -> np.ndarray:
    # zeroed endpoints turn the inclusive DP into the interior convention
    w = np.array(field.window(Region(u, v)))
    w[0, 0] = 0.0
    w[-1, -1] = 0.0
    dp = np.empty_like(w)
    forward_inclusive(w, dp)
    return dp


def last_passage_time(field: WeightField, u, v) -> float:
    """T(u, v): best interior weight over up-right paths from ``u`` to ``v``."""
    u, v = _check_pair(field, u, v)
    if u == v:
        return 0.0
    return float(_interior_table(field, u, v)[-1, -1])


def geodesic(field: WeightField, u, v, tie: str = "strict") -> GeodesicPath:
    """The maximising path from ``u`` to ``v``.

    ``tie="strict"`` raises :class:`TieError` when backtracking meets two equal
    predecessors; ``tie="up-first"`` resolves such ties toward the up-step.
    """
    if tie not in TIE_POLICIES:
        raise DomainError(f"unknown tie policy {tie!r}")
    u, v = _check_pair(field, u, v)
    if u == v:
        return GeodesicPath((u,), 0.0)
    dp = _interior_table(field, u, v)
    offsets, had_tie = backtrack(dp, tie == "up-first")
    if had_tie and tie == "strict":
        raise TieError(f"tie while backtracking geodesic {u} -> {v}")
    points = tuple(LatticePoint(u.x + int(a), u.y + int(b)) for a, b in offsets)
    return GeodesicPath(points, float(dp[-1, -1]))


class PassageProfile:
    """Interior passage times from every ``u <= target`` of a region to ``target``.

    One backward sweep serves any number of starts; :meth:`geodesic_from`
    recovers a geodesic by greedy forward steps.
    """

    def __init__(self, field: WeightField, target):
        target = as_point(target)
        if not field.region.contains(target):
            raise BoundsError(f"target {target} outside field region")
        self.field = field
        self.target = target
        self.region = Region(field.region.lo, target)
        self._w = field.window(self.region)
        self.values = np.empty(self.region.shape, dtype=np.float64)
        backward_exclusive(self._w, self.values)
        self.values.setflags(write=False)

    def __getitem__(self, u) -> float:
        return float(self.values[self.region.index(u)])

    def __contains__(self, u) -> bool:
        return self.region.contains(u)

    def geodesic_from(self, u, tie: str = "strict") -> GeodesicPath:
        if tie not in TIE_POLICIES:
            raise DomainError(f"unknown tie policy {tie!r}")
        i, j = self.region.index(u)
        nx, ny = self.region.shape
        vals, w = self.values, self._w
        pts = [LatticePoint(*u)]
        while i < nx - 1 or j < ny - 1:
            if i == nx - 1:
                j += 1
            elif j == ny - 1:
                i += 1
            else:
                right = vals[i + 1, j] + (w[i + 1, j] if (i + 1, j) != (nx - 1, ny - 1) else 0.0)
                up = vals[i, j + 1] + (w[i, j + 1] if (i, j + 1) != (nx - 1, ny - 1) else 0.0)
                if right == up:
                    if tie == "strict":
                        raise TieError(f"tie at {pts[-1]} toward {self.target}")
                    j += 1
                elif right > up:
                    i += 1
                else:
                    j += 1
            pts.append(LatticePoint(self.region.lo.x + i, self.region.lo.y + j))
        return GeodesicPath(tuple(pts), self[u])


def passage_profile(field: WeightField, target) -> PassageProfile:
    return PassageProfile(field, target)


def directed_geodesic(field: WeightField, spec: DirectedGeodesicSpec, tie: str = "strict") -> GeodesicPath:
    """Finite-horizon surrogate of the semi-infinite geodesic from ``spec.start``.

    The target is ``start + round(R (cos theta, sin theta))``.  Restricted to a
    fixed window the path stabilises as ``R`` grows; :func:`stabilization_rate`
    measures how fast.
    """
    target = spec.target
    if not field.region.contains(target):
        raise BoundsError(f"horizon target {target} outside field region")
    return geodesic(field, spec.start, target, tie=tie)


def prefix_until(path: GeodesicPath, phi_max: int) -> tuple[LatticePoint, ...]:
    return tuple(p for p in path.points if p.x + p.y <= phi_max)


def check_planarity(paths) -> bool:
    """True iff paths sorted by start ``psi`` stay weakly ordered on every shared line.

    Touching and running together is allowed; a strict swap of order is not.
    """
    profiles = [p.psi_profile() for p in paths]
    starts = [rotate_coords(p.start)[1] for p in paths]
    if any(a > b for a, b in zip(starts, starts[1:])):
        raise DomainError("paths must be sorted by psi of their start points")
    for a in range(len(profiles)):
        for b in range(a + 1, len(profiles)):
            pa, pb = profiles[a], profiles[b]
            for t in pa.keys() & pb.keys():
                if pa[t] > pb[t]:
                    return False
    return True


def stabilization_rate(
    seeds,
    theta: float,
    horizon: float,
    phi_window: int,
    start=(0, 0),
    factor: float = 2.0,
) -> float:
    """Fraction of seeds whose directed geodesic agrees on ``phi <= phi_window``
    for horizons ``horizon`` and ``factor * horizon``."""
    from .lattice import sample_weight_field

    start = as_point(start)
    far = horizon_target(start, theta, factor * horizon)
    region = Region(start, far)
    agree = 0
    seeds = list(seeds)
    for seed in seeds:
        field = sample_weight_field(region, seed)
        near_path = directed_geodesic(field, DirectedGeodesicSpec(start, theta, horizon))
        far_path = directed_geodesic(field, DirectedGeodesicSpec(start, theta, factor * horizon))
        lim = sum(start) + phi_window
        agree += prefix_until(near_path, lim) == prefix_until(far_path, lim)
    return agree / len(seeds)
