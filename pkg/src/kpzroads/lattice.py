"""Lattice coordinates, regions and reproducible exponential weight fields.

Vertex randomness is counter based: the uniform attached to a vertex is a
hash of ``(seed, stream, x, y)``.  A field sampled on any region therefore
agrees with every other region sampled under the same seed on their shared
vertices, and sampling order or thread count cannot change a single bit.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numba
import numpy as np

from .errors import BoundsError, CapacityError, DomainError

WEIGHT_STREAM = 0x57
DIRECTION_STREAM = 0xD1

# 2**26 vertices is 512 MiB of float64.
DEFAULT_MAX_VERTICES = 1 << 26

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_COORD_OFFSET = 1 << 31
_INV_2_53 = 1.0 / 9007199254740992.0


class LatticePoint(NamedTuple):
    x: int
    y: int


def as_point(p) -> LatticePoint:
    return p if isinstance(p, LatticePoint) else LatticePoint(int(p[0]), int(p[1]))


def rotate_coords(v) -> tuple[int, int]:
    """Return the time coordinate ``x + y`` and space coordinate ``x - y``."""
    x, y = v
    return x + y, x - y


def unrotate_coords(phi: int, psi: int) -> LatticePoint:
    """Inverse of :func:`rotate_coords`; ``phi`` and ``psi`` need equal parity."""
    if (phi - psi) % 2:
        raise DomainError(f"phi={phi} and psi={psi} have different parity")
    return LatticePoint((phi + psi) // 2, (phi - psi) // 2)


def line_points(T: int, psi_min: int, psi_max: int) -> list[LatticePoint]:
    """Lattice points of the anti-diagonal ``x + y = T`` with ``psi`` in range.

    Only ``psi`` of the same parity as ``T`` is realised by a lattice point, so
    the result may be empty.  Points come back ordered by ``psi``.
    """
    if psi_min > psi_max:
        raise DomainError("psi_min must not exceed psi_max")
    first = psi_min if (psi_min - T) % 2 == 0 else psi_min + 1
    return [unrotate_coords(T, psi) for psi in range(first, psi_max + 1, 2)]


@dataclass(frozen=True)
class Region:
    """Closed lattice rectangle ``lo <= v <= hi``."""

    lo: LatticePoint
    hi: LatticePoint

    def __post_init__(self):
        object.__setattr__(self, "lo", as_point(self.lo))
        object.__setattr__(self, "hi", as_point(self.hi))
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise DomainError(f"empty region {self.lo}..{self.hi}")

    @classmethod
    def from_bounds(cls, x0, y0, x1, y1) -> "Region":
        return cls(LatticePoint(x0, y0), LatticePoint(x1, y1))

    @property
    def shape(self) -> tuple[int, int]:
        return self.hi.x - self.lo.x + 1, self.hi.y - self.lo.y + 1

    @property
    def size(self) -> int:
        nx, ny = self.shape
        return nx * ny

    def contains(self, p) -> bool:
        x, y = p
        return self.lo.x <= x <= self.hi.x and self.lo.y <= y <= self.hi.y

    def contains_region(self, other: "Region") -> bool:
        return self.contains(other.lo) and self.contains(other.hi)

    def index(self, p) -> tuple[int, int]:
        if not self.contains(p):
            raise BoundsError(f"{tuple(p)} outside region {self.lo}..{self.hi}")
        return p[0] - self.lo.x, p[1] - self.lo.y

    def intersect(self, other: "Region") -> "Region | None":
        lo = LatticePoint(max(self.lo.x, other.lo.x), max(self.lo.y, other.lo.y))
        hi = LatticePoint(min(self.hi.x, other.hi.x), min(self.hi.y, other.hi.y))
        if lo.x > hi.x or lo.y > hi.y:
            return None
        return Region(lo, hi)


@numba.njit(inline="always")
def _mix64(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


@numba.njit(cache=True)
def _stream_key(seed, stream):
    return _mix64(seed + np.uint64(stream) * _GOLDEN)


def stream_key(seed: int, stream: int) -> np.uint64:
    """Hash key for one (seed, stream) pair; stays unsigned across the numba boundary."""
    return np.uint64(_stream_key(np.uint64(seed), stream))


@numba.njit(inline="always")
def _vertex_uniform(key, x, y):
    cx = np.uint64(x + _COORD_OFFSET)
    cy = np.uint64(y + _COORD_OFFSET)
    h = _mix64(((cx << np.uint64(32)) | cy) ^ key)
    h = _mix64(h + _GOLDEN)
    return (np.float64(h >> np.uint64(11)) + 0.5) * _INV_2_53


@numba.njit(cache=True, nogil=True)
def fill_uniform(key, x0, y0, out):
    """Open-interval uniforms for the rectangle whose lower corner is (x0, y0)."""
    nx, ny = out.shape
    for i in range(nx):
        for j in range(ny):
            out[i, j] = _vertex_uniform(key, x0 + i, y0 + j)


@numba.njit(cache=True, nogil=True)
def fill_exponential(key, x0, y0, out):
    nx, ny = out.shape
    for i in range(nx):
        for j in range(ny):
            out[i, j] = -np.log(_vertex_uniform(key, x0 + i, y0 + j))


def _check_capacity(region: Region, max_vertices: int):
    if region.size > max_vertices:
        raise CapacityError(
            f"region with {region.size} vertices exceeds budget of {max_vertices}"
        )


@dataclass(frozen=True, eq=False)
class WeightField:
    """Exp(1) vertex weights on a region; ``weights[x - lo.x, y - lo.y]``.

    The array is read-only.  ``seed`` is ``None`` for hand-built fixtures.
    """

    region: Region
    seed: int | None
    weights: np.ndarray

    def __post_init__(self):
        if self.weights.shape != self.region.shape:
            raise DomainError(
                f"weights shape {self.weights.shape} != region shape {self.region.shape}"
            )
        self.weights.setflags(write=False)

    @classmethod
    def from_array(cls, weights, lo=(0, 0), seed=None) -> "WeightField":
        """Wrap an explicit array (tests and synthetic fixtures)."""
        w = np.array(weights, dtype=np.float64)
        if w.ndim != 2:
            raise DomainError("weights must be two-dimensional")
        if np.any(w < 0):
            raise DomainError("weights must be nonnegative")
        lo = as_point(lo)
        hi = LatticePoint(lo.x + w.shape[0] - 1, lo.y + w.shape[1] - 1)
        return cls(Region(lo, hi), seed, w)

    def tau(self, p) -> float:
        return float(self.weights[self.region.index(p)])

    __getitem__ = tau

    def window(self, region: Region) -> np.ndarray:
        """View of the weights restricted to a sub-region."""
        if not self.region.contains_region(region):
            raise BoundsError(f"region {region} not inside field region {self.region}")
        i0, j0 = self.region.index(region.lo)
        nx, ny = region.shape
        return self.weights[i0 : i0 + nx, j0 : j0 + ny]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "y", "weight"])
        nx, ny = self.region.shape
        for i in range(nx):
            for j in range(ny):
                writer.writerow(
                    [self.region.lo.x + i, self.region.lo.y + j, repr(float(self.weights[i, j]))]
                )
        return buf.getvalue()


def sample_weight_field(region: Region, seed: int, max_vertices: int = DEFAULT_MAX_VERTICES) -> WeightField:
    """Sample i.i.d. Exp(1) weights by inverse CDF of counter-based uniforms."""
    _check_capacity(region, max_vertices)
    if not 0 <= seed < 1 << 64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    out = np.empty(region.shape, dtype=np.float64)
    fill_exponential(stream_key(seed, WEIGHT_STREAM), region.lo.x, region.lo.y, out)
    return WeightField(region, seed, out)


def vertex_uniforms(seed: int, stream: int, region: Region, max_vertices: int = DEFAULT_MAX_VERTICES) -> np.ndarray:
    """Raw uniforms in (0, 1) for a region and stream; used by other fields."""
    _check_capacity(region, max_vertices)
    out = np.empty(region.shape, dtype=np.float64)
    fill_uniform(stream_key(seed, stream), region.lo.x, region.lo.y, out)
    return out
