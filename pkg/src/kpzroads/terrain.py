"""Least-cost paths over elevation rasters.

Cells are graph vertices; an edge between neighbouring cells with heights
``h1, h2`` costs ``sqrt(delta^2 + (h1 - h2)^2)``, so ``delta`` trades
horizontal distance against climbing.  Nodata cells are impassable.
"""

from __future__ import annotations

import heapq
import io
import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import BoundsError, DomainError, NoPathError, ParseError, TruncationError

METERS_PER_DEGREE = 111_320.0

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")
_OPTIONAL_KEYS = ("nodata_value",)

_NEIGHBOURS_4 = ((-1, 0), (0, -1), (0, 1), (1, 0))
_NEIGHBOURS_8 = ((-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 1), (1, -1), (1, 0), (1, 1))


@dataclass(frozen=True, eq=False)
class ElevationGrid:
    """Raster of heights in metres, ``heights[row, col]`` with row 0 the northern edge."""

    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    heights: np.ndarray
    nodata_value: float | None = None
    passable: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        h = np.asarray(self.heights, dtype=np.float64)
        if self.ncols < 1 or self.nrows < 1:
            raise DomainError("grid must have positive dimensions")
        if h.shape != (self.nrows, self.ncols):
            raise TruncationError(f"{h.size} heights for a {self.nrows}x{self.ncols} grid")
        if not self.cellsize > 0:
            raise DomainError("cellsize must be positive")
        ok = np.isfinite(h)
        if self.nodata_value is not None:
            ok &= h != self.nodata_value
        h.setflags(write=False)
        ok.setflags(write=False)
        object.__setattr__(self, "heights", h)
        object.__setattr__(self, "passable", ok)

    def __eq__(self, other):
        if not isinstance(other, ElevationGrid):
            return NotImplemented
        return (
            (self.ncols, self.nrows, self.xllcorner, self.yllcorner, self.cellsize, self.nodata_value)
            == (other.ncols, other.nrows, other.xllcorner, other.yllcorner, other.cellsize, other.nodata_value)
            and np.array_equal(self.heights, other.heights)
        )

    @property
    def mean_latitude(self) -> float:
        return self.yllcorner + 0.5 * self.nrows * self.cellsize

    def cell_center(self, row: int, col: int) -> tuple[float, float]:
        """``(lon, lat)`` of a cell centre."""
        lon = self.xllcorner + (col + 0.5) * self.cellsize
        lat = self.yllcorner + (self.nrows - row - 0.5) * self.cellsize
        return lon, lat

    def cell_at(self, lat: float, lon: float) -> tuple[int, int]:
        """Cell containing ``(lat, lon)``."""
        col = math.floor((lon - self.xllcorner) / self.cellsize)
        row = self.nrows - 1 - math.floor((lat - self.yllcorner) / self.cellsize)
        if not (0 <= row < self.nrows and 0 <= col < self.ncols):
            raise BoundsError(f"({lat}, {lon}) lies outside the grid")
        return row, col

    def in_bounds(self, cell) -> bool:
        r, c = cell
        return 0 <= r < self.nrows and 0 <= c < self.ncols


def _open_text(source):
    if hasattr(source, "read"):
        return source.read()
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            return fh.read()
    if isinstance(source, str) and "\n" in source:
        return source
    raise FileNotFoundError(source)


def load_ascii_grid(source) -> ElevationGrid:
    """Parse an ESRI ASCII grid from a path, an open file or the text itself."""
    lines = _open_text(source).splitlines()
    header = {}
    idx = 0
    while idx < len(lines):
        parts = lines[idx].split()
        if not parts:
            idx += 1
            continue
        key = parts[0].lower()
        if key not in _HEADER_KEYS + _OPTIONAL_KEYS:
            break
        if len(parts) != 2:
            raise ParseError(f"header entry {parts[0]!r} needs exactly one value", idx + 1)
        if key in header:
            raise ParseError(f"duplicate header entry {parts[0]!r}", idx + 1)
        try:
            header[key] = float(parts[1])
        except ValueError:
            raise ParseError(f"non-numeric value {parts[1]!r} for {parts[0]}", idx + 1) from None
        idx += 1
    for key in _HEADER_KEYS:
        if key not in header:
            raise ParseError(f"missing header entry {key!r}", idx + 1)
    for key in ("ncols", "nrows"):
        if header[key] != int(header[key]) or header[key] < 1:
            raise ParseError(f"{key} must be a positive integer", None)
    ncols, nrows = int(header["ncols"]), int(header["nrows"])
    values = []
    for lineno in range(idx, len(lines)):
        for tok in lines[lineno].split():
            try:
                values.append(float(tok))
            except ValueError:
                raise ParseError(f"non-numeric height {tok!r}", lineno + 1) from None
    if len(values) != ncols * nrows:
        raise TruncationError(
            f"expected {ncols * nrows} heights, found {len(values)}", [ncols * nrows, len(values)]
        )
    return ElevationGrid(
        ncols, nrows, header["xllcorner"], header["yllcorner"], header["cellsize"],
        np.array(values).reshape(nrows, ncols), header.get("nodata_value"),
    )


def dump_ascii_grid(grid: ElevationGrid) -> str:
    buf = io.StringIO()
    buf.write(f"ncols {grid.ncols}\nnrows {grid.nrows}\n")
    buf.write(f"xllcorner {grid.xllcorner!r}\nyllcorner {grid.yllcorner!r}\ncellsize {grid.cellsize!r}\n")
    if grid.nodata_value is not None:
        buf.write(f"NODATA_value {grid.nodata_value!r}\n")
    for row in grid.heights:
        buf.write(" ".join(repr(float(v)) for v in row) + "\n")
    return buf.getvalue()


def edge_weight(h1: float, h2: float, delta: float, diagonal: bool = False) -> float:
    if not delta > 0:
        raise DomainError("delta must be positive")
    d = delta * math.sqrt(2.0) if diagonal else delta
    return math.hypot(d, h1 - h2)


def default_delta(grid: ElevationGrid) -> float:
    """Cell spacing in metres: geometric mean of the N-S and E-W spacings at mean latitude."""
    dy = grid.cellsize * METERS_PER_DEGREE
    dx = dy * math.cos(math.radians(grid.mean_latitude))
    return math.sqrt(dx * dy)


@dataclass(frozen=True)
class TerrainPath:
    cells: tuple[tuple[int, int], ...]
    total_cost: float
    delta: float = 0.0
    connectivity: int = 4

    def __len__(self):
        return len(self.cells)

    def climb(self, grid: ElevationGrid) -> float:
        """Total absolute height change along the path."""
        h = [grid.heights[c] for c in self.cells]
        return float(sum(abs(a - b) for a, b in zip(h, h[1:])))

    def cumulative_costs(self, grid: ElevationGrid) -> list[float]:
        out = [0.0]
        for a, b in zip(self.cells, self.cells[1:]):
            diag = a[0] != b[0] and a[1] != b[1]
            out.append(out[-1] + edge_weight(grid.heights[a], grid.heights[b], self.delta, diag))
        return out

    def to_csv(self, grid: ElevationGrid) -> str:
        lines = ["row,col,height,cum_cost"]
        for (r, c), cost in zip(self.cells, self.cumulative_costs(grid)):
            lines.append(f"{r},{c},{float(grid.heights[r, c])!r},{cost!r}")
        return "\n".join(lines) + "\n"


def _check_cell(grid, cell, name):
    cell = (int(cell[0]), int(cell[1]))
    if not grid.in_bounds(cell):
        raise BoundsError(f"{name} {cell} outside the grid")
    if not grid.passable[cell]:
        raise DomainError(f"{name} {cell} is a nodata cell")
    return cell


def shortest_path(grid: ElevationGrid, src, dst, delta: float | None = None,
                  connectivity: int = 4) -> TerrainPath:
    """Dijkstra with heap entries ``(cost, row, col)`` so ties settle deterministically."""
    if connectivity not in (4, 8):
        raise DomainError("connectivity must be 4 or 8")
    if delta is None:
        delta = default_delta(grid)
    if not delta > 0:
        raise DomainError("delta must be positive")
    src, dst = _check_cell(grid, src, "source"), _check_cell(grid, dst, "destination")
    steps = _NEIGHBOURS_4 if connectivity == 4 else _NEIGHBOURS_8
    h, ok = grid.heights, grid.passable
    dist = {src: 0.0}
    prev = {}
    done = set()
    heap = [(0.0, src[0], src[1])]
    diag_delta = delta * math.sqrt(2.0)
    while heap:
        d, r, c = heapq.heappop(heap)
        if (r, c) in done:
            continue
        done.add((r, c))
        if (r, c) == dst:
            break
        for dr, dc in steps:
            nr, nc = r + dr, c + dc
            if not (0 <= nr < grid.nrows and 0 <= nc < grid.ncols) or not ok[nr, nc]:
                continue
            if (nr, nc) in done:
                continue
            step = math.hypot(diag_delta if dr and dc else delta, h[r, c] - h[nr, nc])
            nd = d + step
            if nd < dist.get((nr, nc), math.inf):
                dist[(nr, nc)] = nd
                prev[(nr, nc)] = (r, c)
                heapq.heappush(heap, (nd, nr, nc))
    if dst not in done:
        raise NoPathError(f"{dst} is unreachable from {src}")
    cells = [dst]
    while cells[-1] != src:
        cells.append(prev[cells[-1]])
    return TerrainPath(tuple(reversed(cells)), dist[dst], delta, connectivity)


def export_path(path: TerrainPath, grid: ElevationGrid, metadata: dict | None = None) -> dict:
    """GeoJSON FeatureCollection holding the path through cell centres."""
    if not path.cells:
        raise DomainError("path is empty")
    coords = [list(grid.cell_center(r, c)) for r, c in path.cells]
    geom = {"type": "Point", "coordinates": coords[0]} if len(coords) == 1 else {
        "type": "LineString", "coordinates": coords}
    props = {"total_cost": path.total_cost, "delta": path.delta, "connectivity": path.connectivity,
             "cells": len(path.cells)}
    props.update(metadata or {})
    return {"type": "FeatureCollection",
            "features": [{"type": "Feature", "geometry": geom, "properties": props}]}


def import_path(doc, grid: ElevationGrid) -> tuple[tuple[int, int], ...]:
    """Cell sequence of an exported path (inverse of the centre mapping)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    geom = doc["features"][0]["geometry"]
    coords = [geom["coordinates"]] if geom["type"] == "Point" else geom["coordinates"]
    return tuple(grid.cell_at(lat, lon) for lon, lat in coords)
