"""Independent brute-force references used by the tests."""

import itertools
import math

import numpy as np


def up_right_paths(u, v):
    """Every up-right lattice path from u to v, as point lists."""
    dx, dy = v[0] - u[0], v[1] - u[1]
    for ups in itertools.combinations(range(dx + dy), dy):
        x, y = u
        pts = [(x, y)]
        ups = set(ups)
        for k in range(dx + dy):
            if k in ups:
                y += 1
            else:
                x += 1
            pts.append((x, y))
        yield pts


def brute_lpp(tau, u, v):
    """(best interior weight, list of maximising paths); tau is indexed tau[x][y] from (0, 0)."""
    best, arg = -math.inf, []
    for pts in up_right_paths(u, v):
        val = sum(tau[p[0]][p[1]] for p in pts[1:-1]) if len(pts) > 1 else 0.0
        if val > best:
            best, arg = val, [pts]
        elif val == best:
            arg.append(pts)
    return best, arg


def brute_terrain(heights, passable, src, dst, delta, connectivity):
    """Least cost over all simple paths, by exhaustive depth-first search."""
    nrows, ncols = heights.shape
    if connectivity == 4:
        steps = [(-1, 0), (1, 0), (0, -1), (0, 1)]
    else:
        steps = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
    best = math.inf
    seen = {src}

    def dfs(cell, cost):
        nonlocal best
        if cost >= best:
            return
        if cell == dst:
            best = cost
            return
        for dr, dc in steps:
            nxt = (cell[0] + dr, cell[1] + dc)
            if not (0 <= nxt[0] < nrows and 0 <= nxt[1] < ncols) or not passable[nxt] or nxt in seen:
                continue
            d = delta * math.sqrt(2) if dr and dc else delta
            seen.add(nxt)
            dfs(nxt, cost + math.hypot(d, heights[cell] - heights[nxt]))
            seen.remove(nxt)

    dfs(src, 0.0)
    return best


def segment_hits_disc(z, theta, ell, r):
    """Car at (z, 0) heading at angle theta from the direction to the origin; does the
    segment of length ell come within r of the origin?"""
    p = np.array([z, 0.0])
    heading = math.pi + theta
    d = np.array([math.cos(heading), math.sin(heading)])
    t = min(max(-p @ d, 0.0), ell)
    return float(np.linalg.norm(p + t * d)) <= r
