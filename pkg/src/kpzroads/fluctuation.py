"""Transversal fluctuations, coalescence classes and path intersections."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, DomainError, HorizonError, ScaleError
from .lattice import LatticePoint, Region, WeightField, line_points, sample_weight_field
from .lpp import DirectedGeodesicSpec, GeodesicPath, directed_geodesic, horizon_target, passage_profile


@dataclass(frozen=True)
class FluctuationSample:
    T: int
    deviation_at_T: float
    sup_deviation: float
    deviation_at_start: float = 0.0

    def __post_init__(self):
        if not 0 <= self.deviation_at_T <= self.sup_deviation:
            raise DomainError("need 0 <= deviation_at_T <= sup_deviation")
        if not 0 <= self.deviation_at_start <= self.sup_deviation:
            raise DomainError("need 0 <= deviation_at_start <= sup_deviation")


def straight_line_psi(theta: float, t) -> np.ndarray:
    """psi of the ray from the origin in direction ``theta`` where it meets ``x + y = t``."""
    c, s = math.cos(theta), math.sin(theta)
    return np.asarray(t, dtype=float) * (c - s) / (c + s)


def deviation_profile(path: GeodesicPath, theta: float, T: int) -> np.ndarray:
    """``|psi(Gamma(t)) - psi(J(t))|`` for ``t = 0..T`` with ``J`` the ray from the path start.

    An up-right path meets every line ``x + y = t`` in exactly one vertex, so
    the crossing is read off directly.
    """
    s0 = path.start.x + path.start.y
    if path.end.x + path.end.y - s0 < T:
        raise HorizonError(f"path ends before reaching the line at time {T}")
    pts = np.array(path.points[: T + 1], dtype=np.int64)
    psi = (pts[:, 0] - pts[:, 1]) - (path.start.x - path.start.y)
    return np.abs(psi - straight_line_psi(theta, np.arange(T + 1)))


def transversal_fluctuation(field: WeightField, theta: float, T: int, horizon: float,
                            start=(0, 0), tie: str = "strict") -> FluctuationSample:
    """Deviation of the directed geodesic from its straight ray, at ``T`` and up to ``T``."""
    if T < 1:
        raise DomainError("T must be at least 1")
    spec = DirectedGeodesicSpec(start, theta, horizon)
    tgt = spec.target
    if tgt.x + tgt.y - spec.start.x - spec.start.y < T:
        raise HorizonError(f"horizon {horizon} does not reach beyond time {T}")
    dev = deviation_profile(directed_geodesic(field, spec, tie=tie), theta, T)
    return FluctuationSample(T, float(dev[T]), float(dev.max()), float(dev[0]))


def fluctuation_region(theta: float, horizon: float, start=(0, 0)) -> Region:
    start = LatticePoint(*start)
    return Region(start, horizon_target(start, theta, horizon))


def fluctuation_run(seeds, theta: float, Ts, horizon_factor: float = 4.0):
    """Rows ``(theta, T, seed, dev, sup_dev, dev_0)``; each T uses horizon ``horizon_factor * T``."""
    rows = []
    for T in Ts:
        region = fluctuation_region(theta, horizon_factor * T)
        for seed in seeds:
            s = transversal_fluctuation(sample_weight_field(region, seed), theta, T, horizon_factor * T)
            rows.append((theta, T, seed, s.deviation_at_T, s.sup_deviation, s.deviation_at_start))
    return rows


@dataclass(frozen=True)
class CoalescenceCount:
    n: int
    k: int
    class_count: int
    pairs: int = 0

    def __post_init__(self):
        if self.pairs and not 1 <= self.class_count <= self.pairs:
            raise DomainError("class_count must lie in [1, pairs]")


def window_lines(n: int) -> tuple[int, int]:
    """Time lines ``ceil(n/3) .. floor(2n/3)`` on which pairs must coincide."""
    return -(-n // 3), (2 * n) // 3


def restriction(path: GeodesicPath, t_lo: int, t_hi: int) -> tuple[int, ...]:
    """psi of the path on each line ``t_lo..t_hi``."""
    prof = path.psi_profile()
    try:
        return tuple(prof[t] for t in range(t_lo, t_hi + 1))
    except KeyError as exc:
        raise HorizonError(f"path does not span lines {t_lo}..{t_hi}") from exc


def coincide(a: GeodesicPath, b: GeodesicPath, t_lo: int, t_hi: int) -> bool:
    """Pointwise comparison of two paths on every line ``t_lo..t_hi``."""
    for t in range(t_lo, t_hi + 1):
        pa, pb = a.at_time(t), b.at_time(t)
        if pa is None or pb is None:
            raise HorizonError(f"path does not span lines {t_lo}..{t_hi}")
        if pa != pb:
            return False
    return True


def count_classes(paths, t_lo: int, t_hi: int) -> int:
    """Number of distinct restrictions of ``paths`` to the lines ``t_lo..t_hi``."""
    if not paths:
        raise DomainError("need at least one path")
    return len({restriction(p, t_lo, t_hi) for p in paths})


def relation_matrix(paths, t_lo: int, t_hi: int) -> np.ndarray:
    m = len(paths)
    rel = np.eye(m, dtype=bool)
    for i in range(m):
        for j in range(i + 1, m):
            rel[i, j] = rel[j, i] = coincide(paths[i], paths[j], t_lo, t_hi)
    return rel


def is_equivalence(rel: np.ndarray) -> bool:
    """Reflexive, symmetric and transitive, checked exhaustively."""
    if not rel.diagonal().all() or not (rel == rel.T).all():
        return False
    r = rel.astype(np.int64)
    return not np.any(((r @ r) > 0) & ~rel)


def classes_by_union_find(rel: np.ndarray) -> int:
    parent = list(range(len(rel)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in zip(*np.nonzero(np.triu(rel, 1))):
        parent[find(i)] = find(j)
    return len({find(i) for i in range(len(rel))})


def segment_meshes(n: int, k: int, segment_halfwidth: int, mesh: int = 4):
    """Mesh points of the source segment on ``x + y = 0`` and target segment on ``x + y = 2n``.

    Each segment holds the ``2 * segment_halfwidth + 1`` lattice points nearest
    its midpoint; the target midpoint ``(n - k n^(2/3), n + k n^(2/3))`` is
    rounded to a lattice point of ``x + y = 2n``.
    """
    if n < 3:
        raise ScaleError("n must be at least 3")
    if segment_halfwidth < 0 or mesh < 1:
        raise DomainError("segment_halfwidth must be >= 0 and mesh >= 1")
    h = 2 * segment_halfwidth
    src = line_points(0, -h, h)[::mesh]
    mx = n - int(round(k * n ** (2.0 / 3.0)))
    centre = mx - (2 * n - mx)
    dst = line_points(2 * n, centre - h, centre + h)[::mesh]
    return src, dst


def mesh_region(src, dst) -> Region:
    return Region.from_bounds(min(p.x for p in src), min(p.y for p in src),
                              max(p.x for p in dst), max(p.y for p in dst))


def mesh_geodesics(field: WeightField, src, dst, tie: str = "strict"):
    """Geodesics for every (u, v) in ``src x dst``; one backward sweep per target."""
    paths = []
    for v in dst:
        prof = passage_profile(field, v)
        for u in src:
            if u.x > v.x or u.y > v.y:
                raise DomainError(f"source {u} is not below target {v}")
            paths.append(prof.geodesic_from(u, tie=tie))
    return paths


def coalescence_classes(field: WeightField, n: int, k: int, segment_halfwidth: int,
                        mesh: int = 4, tie: str = "strict") -> CoalescenceCount:
    src, dst = segment_meshes(n, k, segment_halfwidth, mesh)
    if not field.region.contains_region(mesh_region(src, dst)):
        raise BoundsError("segments do not fit inside the field region")
    paths = mesh_geodesics(field, src, dst, tie)
    t_lo, t_hi = window_lines(n)
    return CoalescenceCount(n, k, count_classes(paths, t_lo, t_hi), len(paths))


def coalescence_run(seeds, n: int, k: int, segment_halfwidth: int, mesh: int = 4,
                    verify: bool = False):
    """Rows ``(n, k, seed, class_count)``.

    With ``verify`` every sample also checks the pairwise relation is an exact
    equivalence and that union-find over it reproduces the class count; a
    failure raises :class:`DomainError`.
    """
    src, dst = segment_meshes(n, k, segment_halfwidth, mesh)
    region = mesh_region(src, dst)
    t_lo, t_hi = window_lines(n)
    rows = []
    for seed in seeds:
        paths = mesh_geodesics(sample_weight_field(region, seed), src, dst)
        count = count_classes(paths, t_lo, t_hi)
        if verify:
            rel = relation_matrix(paths, t_lo, t_hi)
            if not is_equivalence(rel) or classes_by_union_find(rel) != count:
                raise DomainError(f"coincidence relation inconsistent for seed {seed}")
        rows.append((n, k, seed, count))
    return rows


def class_tail(counts, ells) -> list[float]:
    """Empirical ``P(M >= l)`` for each ``l``."""
    c = np.asarray(counts)
    return [float(np.mean(c >= ell)) for ell in ells]


def intersection_size(a: GeodesicPath, b: GeodesicPath, window: Region | None = None) -> int:
    """Number of lattice points on both paths (and inside ``window`` when given)."""
    common = set(a.points) & set(b.points)
    if window is not None:
        common = {p for p in common if window.contains(p)}
    return len(common)
