"""The random-direction car model and Monte Carlo estimators of its statistics.

Every vertex ``u`` launches a car in direction ``theta_u ~ U(eps, pi/2 - eps)``
along the finite-horizon surrogate of its semi-infinite geodesic, i.e. the
geodesic from ``u`` to ``u + round(R (cos theta_u, sin theta_u))``.  The car is
seen by an observer ``o`` when ``o`` lies on that path.

For a line ``L = {x + y = phi0}`` an up-right path crosses ``L`` at exactly one
vertex, and the path from ``u`` to ``t`` crosses at the ``z`` maximising

    G(u, z) + G(z, t) - tau(z)

with ``G`` the endpoint-inclusive passage time.  The kernel below runs one
backward and one forward DP per crossing candidate ``z`` and scores every car
against it, which is exact and far cheaper than one DP per car.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numba
import numpy as np

from .errors import DomainError, TieError, TruncationError
from .lattice import (
    DEFAULT_MAX_VERTICES,
    DIRECTION_STREAM,
    LatticePoint,
    Region,
    WeightField,
    as_point,
    sample_weight_field,
    vertex_uniforms,
)
from .stats import wilson_interval


@dataclass(frozen=True, eq=False)
class DirectionField:
    """Per-vertex car directions ``theta[x - lo.x, y - lo.y]`` in (eps, pi/2 - eps)."""

    region: Region
    epsilon: float
    seed: int | None
    theta: np.ndarray

    def __post_init__(self):
        if self.theta.shape != self.region.shape:
            raise DomainError("theta shape does not match region")
        self.theta.setflags(write=False)

    @classmethod
    def constant(cls, region: Region, theta: float, epsilon: float = 0.0) -> "DirectionField":
        """Every car heads in the same direction (deterministic fixtures)."""
        if not 0.0 < theta < math.pi / 2:
            raise DomainError("theta must lie in (0, pi/2)")
        return cls(region, epsilon, None, np.full(region.shape, float(theta)))

    def __getitem__(self, p) -> float:
        return float(self.theta[self.region.index(p)])


def sample_direction_field(region: Region, epsilon: float, seed: int,
                           max_vertices: int = DEFAULT_MAX_VERTICES) -> DirectionField:
    if not 0.0 < epsilon < math.pi / 4:
        raise DomainError(f"epsilon={epsilon} must lie in (0, pi/4)")
    u = vertex_uniforms(seed, DIRECTION_STREAM, region, max_vertices)
    theta = epsilon + (math.pi / 2 - 2 * epsilon) * u
    return DirectionField(region, epsilon, seed, theta)


@dataclass(frozen=True)
class TrafficConfig:
    """Scenario template: model parameters plus truncation and seeding."""

    epsilon: float = 0.2
    depth_max: int = 64
    width_factor: float = 8.0
    horizon_factor: float = 4.0
    window_const: float = 2.0
    scan_psi: int = 0
    ell0: float = 1.0
    master_seed: int = 0
    tie: str = "strict"

    def __post_init__(self):
        if not 0.0 < self.epsilon < math.pi / 4:
            raise DomainError("epsilon must lie in (0, pi/4)")
        if self.depth_max < 1:
            raise DomainError("depth_max must be positive")
        if self.width_factor < 8:
            raise DomainError("width_factor must be at least 8")
        if self.horizon_factor < 4:
            raise DomainError("horizon_factor must be at least 4")
        if self.scan_psi < 0 or self.scan_psi % 2:
            raise DomainError("scan_psi must be a nonnegative even integer")
        if self.ell0 <= 0:
            raise DomainError("ell0 must be positive")
        if self.tie not in ("strict", "up-first"):
            raise DomainError(f"unknown tie policy {self.tie!r}")

    @property
    def horizon(self) -> float:
        return self.horizon_factor * self.depth_max


def window_halfwidth(n, width_factor, window_const):
    """Half-width in psi of the crossing window for a car started ``n`` lines back."""
    return width_factor * n ** (2.0 / 3.0) + window_const


def required_region(phi0: int, psi_lo: int, psi_hi: int, depth_max: int, epsilon: float,
                    width_factor: float, horizon_factor: float, window_const: float = 2.0) -> Region:
    """Smallest rectangle holding every start the scenario may inspect and its target."""
    drift = math.tan(math.pi / 4 - epsilon)
    xs_lo, ys_lo, xs_hi, ys_hi = [], [], [], []
    for n in range(1, depth_max + 1):
        w = window_halfwidth(n, width_factor, window_const)
        phi = phi0 - n
        lo = math.floor(psi_lo - n * drift - w)
        hi = math.ceil(psi_hi + n * drift + w)
        xs_lo.append(math.floor((phi + lo) / 2))
        xs_hi.append(math.ceil((phi + hi) / 2))
        ys_lo.append(math.floor((phi - hi) / 2))
        ys_hi.append(math.ceil((phi - lo) / 2))
    reach = int(math.floor(horizon_factor * depth_max * math.cos(epsilon) + 0.5)) + 1
    return Region.from_bounds(min(xs_lo), min(ys_lo), max(xs_hi) + reach, max(ys_hi) + reach)


@dataclass(frozen=True, eq=False)
class TrafficScenario:
    weights: WeightField
    directions: DirectionField
    depth_max: int
    width_factor: float = 8.0
    horizon_factor: float = 4.0
    window_const: float = 2.0

    def __post_init__(self):
        if self.depth_max < 1:
            raise DomainError("depth_max must be positive")
        if self.width_factor < 8:
            raise DomainError("width_factor must be at least 8")
        if self.horizon_factor < 4:
            raise DomainError("horizon_factor must be at least 4")

    @property
    def horizon(self) -> float:
        return self.horizon_factor * self.depth_max

    @classmethod
    def sample(cls, config: TrafficConfig, weight_seed: int, direction_seed: int,
               phi0: int = 0, psi_lo: int = 0, psi_hi: int = 0) -> "TrafficScenario":
        region = required_region(phi0, psi_lo, psi_hi, config.depth_max, config.epsilon,
                                 config.width_factor, config.horizon_factor, config.window_const)
        return cls(
            sample_weight_field(region, weight_seed),
            sample_direction_field(region, config.epsilon, direction_seed),
            config.depth_max,
            config.width_factor,
            config.horizon_factor,
            config.window_const,
        )


@numba.njit(cache=True, nogil=True)
def _enumerate_cars(th, tx0, ty0, wx0, wy0, wnx, wny, phi0, psi_lo, psi_hi, depth_max,
                    drift, width_factor, window_const, horizon):
    tnx, tny = th.shape
    cap = 0
    for n in range(1, depth_max + 1):
        w = width_factor * n ** (2.0 / 3.0) + window_const
        cap += int((psi_hi - psi_lo + 2 * n * drift + 2 * w) / 2) + 2
    # columns: x, y, n, tx, ty ; pred psi kept separately
    cars = np.empty((cap, 5), dtype=np.int64)
    pred = np.empty(cap, dtype=np.float64)
    offend = np.empty((cap, 2), dtype=np.int64)
    nc = 0
    no = 0
    quarter = np.pi / 4
    for n in range(1, depth_max + 1):
        w = width_factor * n ** (2.0 / 3.0) + window_const
        phi = phi0 - n
        lo = int(np.floor(psi_lo - n * drift - w))
        hi = int(np.ceil(psi_hi + n * drift + w))
        if (lo - phi) % 2 != 0:
            lo += 1
        for psi in range(lo, hi + 1, 2):
            x = (phi + psi) // 2
            y = (phi - psi) // 2
            i = x - tx0
            j = y - ty0
            if i < 0 or j < 0 or i >= tnx or j >= tny:
                offend[no, 0] = x
                offend[no, 1] = y
                no += 1
                continue
            theta = th[i, j]
            p = psi + n * np.tan(quarter - theta)
            if p < psi_lo - w or p > psi_hi + w:
                continue
            tx = x + int(np.floor(horizon * np.cos(theta) + 0.5))
            ty = y + int(np.floor(horizon * np.sin(theta) + 0.5))
            if x < wx0 or y < wy0 or tx >= wx0 + wnx or ty >= wy0 + wny:
                offend[no, 0] = x
                offend[no, 1] = y
                no += 1
                continue
            cars[nc, 0] = x
            cars[nc, 1] = y
            cars[nc, 2] = n
            cars[nc, 3] = tx
            cars[nc, 4] = ty
            pred[nc] = p
            nc += 1
    return cars[:nc], pred[:nc], offend[:no]


@numba.njit(cache=True, nogil=True)
def _crossings(W, x0, y0, cars, pred, phi0, depth_max, width_factor, window_const):
    """Crossing psi on the line x + y = phi0 for each car.

    Returns (psi, flags) with flag bit 1 = argmax sits on a width-cut window
    edge (undecided) and bit 2 = exact tie between the two best crossings.
    """
    nc = cars.shape[0]
    klo = np.empty(nc, dtype=np.int64)
    khi = np.empty(nc, dtype=np.int64)
    cut_lo = np.zeros(nc, dtype=np.bool_)
    cut_hi = np.zeros(nc, dtype=np.bool_)
    best = np.full(nc, -np.inf)
    second = np.full(nc, -np.inf)
    arg = np.full(nc, -1, dtype=np.int64)
    # psi grid on the line: psi = zbase + 2k
    zbase = 0
    if phi0 % 2 != 0:
        zbase = 1
    kmin = 1 << 62
    kmax = -(1 << 62)
    for c in range(nc):
        x = cars[c, 0]
        y = cars[c, 1]
        n = cars[c, 2]
        tx = cars[c, 3]
        ty = cars[c, 4]
        psi_u = x - y
        w = width_factor * n ** (2.0 / 3.0) + window_const
        geo_lo = max(psi_u - n, phi0 - 2 * ty)
        geo_hi = min(psi_u + n, 2 * tx - phi0)
        lo_f = pred[c] - w
        hi_f = pred[c] + w
        lo = geo_lo
        if lo_f > geo_lo:
            lo = int(np.ceil(lo_f))
            cut_lo[c] = True
        hi = geo_hi
        if hi_f < geo_hi:
            hi = int(np.floor(hi_f))
            cut_hi[c] = True
        # snap to the parity of the line
        a = (lo - zbase + 1) // 2 if (lo - zbase) % 2 != 0 else (lo - zbase) // 2
        b = (hi - zbase) // 2
        klo[c] = a
        khi[c] = b
        if a < kmin:
            kmin = a
        if b > kmax:
            kmax = b
    if nc == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)

    nx, ny = W.shape
    back = np.empty((depth_max + 1, depth_max + 1), dtype=np.float64)
    ext_x = 0
    ext_y = 0
    for c in range(nc):
        ext_x = max(ext_x, cars[c, 3] - cars[c, 0])
        ext_y = max(ext_y, cars[c, 4] - cars[c, 1])
    fwd = np.empty((ext_x + 1, ext_y + 1), dtype=np.float64)
    env = np.empty(ext_x + 2, dtype=np.int64)

    for k in range(kmin, kmax + 1):
        psi_z = zbase + 2 * k
        zx = (phi0 + psi_z) // 2
        zy = (phi0 - psi_z) // 2
        # staircase envelope of targets and back extent of starts using z
        for i in range(ext_x + 2):
            env[i] = -1
        bx = 0
        by = 0
        used = 0
        for c in range(nc):
            if klo[c] <= k <= khi[c]:
                used += 1
                dx = cars[c, 3] - zx
                dy = cars[c, 4] - zy
                if dy > env[dx]:
                    env[dx] = dy
                bx = max(bx, zx - cars[c, 0])
                by = max(by, zy - cars[c, 1])
        if used == 0:
            continue
        for i in range(ext_x, -1, -1):
            if env[i + 1] > env[i]:
                env[i] = env[i + 1]
        tz = W[zx - x0, zy - y0]
        # backward: back[di, dj] = G(z - (di, dj) -> z), inclusive
        for di in range(bx + 1):
            for dj in range(by + 1):
                t = W[zx - di - x0, zy - dj - y0]
                if di == 0 and dj == 0:
                    back[0, 0] = t
                elif di == 0:
                    back[0, dj] = t + back[0, dj - 1]
                elif dj == 0:
                    back[di, 0] = t + back[di - 1, 0]
                else:
                    a1 = back[di - 1, dj]
                    b1 = back[di, dj - 1]
                    back[di, dj] = t + (a1 if a1 > b1 else b1)
        # forward: fwd[di, dj] = G(z -> z + (di, dj)), inclusive, on the staircase
        for di in range(ext_x + 1):
            h = env[di]
            if h < 0:
                break
            col = zx + di - x0
            for dj in range(h + 1):
                t = W[col, zy + dj - y0]
                if di == 0 and dj == 0:
                    fwd[0, 0] = t
                elif di == 0:
                    fwd[0, dj] = t + fwd[0, dj - 1]
                elif dj == 0:
                    fwd[di, 0] = t + fwd[di - 1, 0]
                else:
                    a1 = fwd[di - 1, dj]
                    b1 = fwd[di, dj - 1]
                    fwd[di, dj] = t + (a1 if a1 > b1 else b1)
        for c in range(nc):
            if klo[c] <= k <= khi[c]:
                f = back[zx - cars[c, 0], zy - cars[c, 1]] + fwd[cars[c, 3] - zx, cars[c, 4] - zy] - tz
                if f > best[c]:
                    second[c] = best[c]
                    best[c] = f
                    arg[c] = k
                elif f > second[c]:
                    second[c] = f

    psi_out = np.empty(nc, dtype=np.int64)
    flags = np.zeros(nc, dtype=np.int64)
    for c in range(nc):
        psi_out[c] = zbase + 2 * arg[c]
        if (arg[c] == klo[c] and cut_lo[c]) or (arg[c] == khi[c] and cut_hi[c]):
            flags[c] |= 1
        if best[c] == second[c]:
            flags[c] |= 2
    return psi_out, flags


@dataclass(frozen=True, eq=False)
class CarCrossings:
    """Where each candidate car crosses the observer line."""

    phi0: int
    starts: np.ndarray      # (m, 2) lattice starts
    depth: np.ndarray       # phi0 - phi(start)
    targets: np.ndarray     # (m, 2) horizon targets
    psi: np.ndarray         # crossing psi on the line
    undecided: np.ndarray   # argmax on a width-cut window edge
    tied: np.ndarray


def car_crossings(scenario: TrafficScenario, phi0: int, psi_lo: int, psi_hi: int,
                  tie: str = "strict") -> CarCrossings:
    """Crossing points on ``x + y = phi0`` of every car that may reach ``[psi_lo, psi_hi]``."""
    if psi_lo > psi_hi:
        raise DomainError("psi_lo must not exceed psi_hi")
    if (psi_lo - phi0) % 2 or (psi_hi - phi0) % 2:
        raise DomainError("observer psi range must match the parity of phi0")
    eps = scenario.directions.epsilon
    drift = math.tan(math.pi / 4 - eps) if eps > 0 else 1.0
    tr, wr = scenario.directions.region, scenario.weights.region
    cars, pred, offend = _enumerate_cars(
        scenario.directions.theta, tr.lo.x, tr.lo.y, wr.lo.x, wr.lo.y, wr.shape[0], wr.shape[1],
        phi0, psi_lo, psi_hi, scenario.depth_max, drift, scenario.width_factor,
        scenario.window_const, scenario.horizon,
    )
    if len(offend):
        starts = [LatticePoint(int(a), int(b)) for a, b in offend]
        raise TruncationError(
            f"simulation box too small: {len(starts)} candidate starts or targets fall outside",
            starts,
        )
    # z-window DPs reach back depth_max from each crossing; make sure it is covered
    psi, flags = _crossings(scenario.weights.weights, wr.lo.x, wr.lo.y, cars, pred, phi0,
                            scenario.depth_max, scenario.width_factor, scenario.window_const)
    tied = (flags & 2) != 0
    if tie == "strict" and tied.any():
        bad = cars[tied][:, :2]
        raise TieError(f"exact tie between crossing candidates for starts {bad.tolist()}")
    return CarCrossings(phi0, cars[:, :2].copy(), cars[:, 2].copy(), cars[:, 3:5].copy(),
                        psi, (flags & 1) != 0, tied)


@dataclass(frozen=True)
class CarFlowSample:
    """Cars through one observer, split by the line they started from."""

    observer: LatticePoint
    per_depth_counts: tuple[int, ...]
    truncated_flag: bool = False

    @property
    def total(self) -> int:
        return sum(self.per_depth_counts)

    @property
    def depth(self) -> int:
        for n in range(len(self.per_depth_counts), 0, -1):
            if self.per_depth_counts[n - 1] > 0:
                return n
        return 0

    def count_at(self, n: int) -> int:
        return self.per_depth_counts[n - 1]


@dataclass(frozen=True, eq=False)
class LineFlowSample:
    """Per-depth car counts for every observer of a segment of one line."""

    phi0: int
    psi: np.ndarray          # observer psi values
    counts: np.ndarray       # (observers, depth_max)
    truncated_flag: bool
    undecided: int = 0

    def observer(self, psi: int) -> CarFlowSample:
        k = int(np.searchsorted(self.psi, psi))
        if k >= len(self.psi) or self.psi[k] != psi:
            raise DomainError(f"psi={psi} not among the observers")
        x, y = (self.phi0 + psi) // 2, (self.phi0 - psi) // 2
        return CarFlowSample(LatticePoint(x, y), tuple(int(c) for c in self.counts[k]),
                             self.truncated_flag)

    @property
    def totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)


def line_flows(scenario: TrafficScenario, phi0: int, psi_lo: int, psi_hi: int,
               tie: str = "strict") -> LineFlowSample:
    cc = car_crossings(scenario, phi0, psi_lo, psi_hi, tie=tie)
    psis = np.arange(psi_lo, psi_hi + 1, 2)
    counts = np.zeros((len(psis), scenario.depth_max), dtype=np.int64)
    hit = (cc.psi >= psi_lo) & (cc.psi <= psi_hi)
    np.add.at(counts, ((cc.psi[hit] - psi_lo) // 2, cc.depth[hit] - 1), 1)
    return LineFlowSample(phi0, psis, counts, bool(cc.undecided.any()), int(cc.undecided.sum()))


def cars_through_point(scenario: TrafficScenario, observer, tie: str = "strict") -> CarFlowSample:
    """Count cars from the ``depth_max`` lines behind ``observer`` that pass through it."""
    o = as_point(observer)
    phi0, psi0 = o.x + o.y, o.x - o.y
    return line_flows(scenario, phi0, psi0, psi0, tie=tie).observer(psi0)


def trial_seeds(master_seed: int, trial: int) -> tuple[int, int]:
    """Independent (weight, direction) seeds for one trial."""
    state = np.random.SeedSequence([master_seed, trial]).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


def simulate_trial(config: TrafficConfig, trial: int) -> LineFlowSample:
    """One scenario observed on the segment ``|psi| <= scan_psi`` of the line x + y = 0."""
    ws, ds = trial_seeds(config.master_seed, trial)
    s = config.scan_psi
    scenario = TrafficScenario.sample(config, ws, ds, 0, -s, s)
    return line_flows(scenario, 0, -s, s, tie=config.tie)


class _TrialRunner:
    def __init__(self, config):
        self.config = config

    def __call__(self, trial):
        return simulate_trial(self.config, trial)


def simulate_trials(config: TrafficConfig, trials: int, pool=None, first_trial: int = 0):
    """Run trials ``first_trial .. first_trial + trials - 1``.

    ``pool`` is anything with an ordered ``map`` (a ThreadPoolExecutor from the
    CLI); the result list is in trial order regardless of scheduling.
    """
    if trials < 1:
        raise DomainError("trials must be positive")
    runner = _TrialRunner(config)
    indices = range(first_trial, first_trial + trials)
    mapper = pool.map if pool is not None else map
    return list(mapper(runner, indices))


@dataclass
class TailCurve:
    """Rows ``(n, hits, trials, p_hat, ci_low, ci_high)`` of one tail family."""

    rows: list[tuple[int, int, int, float, float, float]] = dc_field(default_factory=list)
    aborted: int = 0
    label: str = ""

    @classmethod
    def from_hits(cls, ns, hits, trials, z=1.96, aborted=0, label=""):
        rows = []
        for n, h in zip(ns, hits):
            lo, hi = wilson_interval(int(h), trials, z)
            rows.append((int(n), int(h), int(trials), h / trials, lo, hi))
        return cls(rows, aborted, label)

    @property
    def n(self):
        return [r[0] for r in self.rows]

    @property
    def p_hat(self):
        return [r[3] for r in self.rows]

    def is_monotone(self) -> bool:
        p = self.p_hat
        return all(a >= b for a, b in zip(p, p[1:]))

    def to_csv(self) -> str:
        lines = ["n,hits,trials,p_hat,ci_low,ci_high"]
        lines += [f"{n},{h},{t},{p!r},{lo!r},{hi!r}" for n, h, t, p, lo, hi in self.rows]
        return "\n".join(lines) + "\n"


def _accepted(samples):
    ok = [s for s in samples if not s.truncated_flag]
    return ok, len(samples) - len(ok)


def _origin_flows(samples) -> np.ndarray:
    rows = []
    for s in samples:
        k = int(np.searchsorted(s.psi, 0))
        rows.append(s.counts[k])
    return np.array(rows, dtype=np.int64).reshape(len(rows), -1)


def depth_values(samples) -> np.ndarray:
    """Truncated depth D at the origin for each sample."""
    flows = _origin_flows(samples)
    nz = flows > 0
    idx = flows.shape[1] - np.argmax(nz[:, ::-1], axis=1)
    return np.where(nz.any(axis=1), idx, 0)


def tail_D(samples, n_values, z=1.96) -> TailCurve:
    ok, aborted = _accepted(samples)
    if not ok:
        raise TruncationError("every trial was aborted")
    d = depth_values(ok)
    hits = [int(np.sum(d >= n)) for n in n_values]
    return TailCurve.from_hits(n_values, hits, len(ok), z, aborted, "P(D >= n)")


def tail_N(samples, n_values, z=1.96) -> TailCurve:
    ok, aborted = _accepted(samples)
    if not ok:
        raise TruncationError("every trial was aborted")
    tot = _origin_flows(ok).sum(axis=1)
    hits = [int(np.sum(tot >= n ** (4.0 / 3.0))) for n in n_values]
    return TailCurve.from_hits(n_values, hits, len(ok), z, aborted, "P(N >= n^(4/3))")


@dataclass
class MeanEstimate:
    n: int
    mean: float
    se: float
    trials: int

    @property
    def z_score(self) -> float:
        return (self.mean - 1.0) / self.se if self.se > 0 else 0.0


def mean_N_n(samples, n_values) -> list[MeanEstimate]:
    """Monte Carlo mean and standard error of ``N_n`` at the origin."""
    ok, _ = _accepted(samples)
    flows = _origin_flows(ok)
    out = []
    for n in n_values:
        x = flows[:, n - 1].astype(float)
        se = x.std(ddof=1) / math.sqrt(len(x)) if len(x) > 1 else float("nan")
        out.append(MeanEstimate(n, float(x.mean()), float(se), len(x)))
    return out


def _check_template(config: TrafficConfig, n_values):
    if any(n > config.depth_max for n in n_values):
        raise DomainError("n values must not exceed depth_max")


def estimate_tail_D(config: TrafficConfig, n_values, trials: int, pool=None) -> TailCurve:
    _check_template(config, n_values)
    return tail_D(simulate_trials(config, trials, pool), n_values)


def estimate_tail_N(config: TrafficConfig, n_values, trials: int, pool=None) -> TailCurve:
    return tail_N(simulate_trials(config, trials, pool), n_values)


@dataclass
class TnDistribution:
    """Empirical law of the distance ``T_n`` to the nearest busy vertex."""

    n: int
    threshold: float
    values: list          # psi distance per trial, None when censored
    aborted: int = 0
    z: float = 1.96

    @property
    def trials(self) -> int:
        return len(self.values)

    @property
    def censored(self) -> int:
        return sum(v is None for v in self.values)

    def cdf(self, t: float) -> float:
        return sum(v is not None and v <= t for v in self.values) / self.trials

    def prob_at_most(self, t: float):
        hits = sum(v is not None and v <= t for v in self.values)
        lo, hi = wilson_interval(hits, self.trials, self.z)
        return hits / self.trials, lo, hi

    def ecdf_rows(self):
        support = sorted({v for v in self.values if v is not None})
        return [(t, *self.prob_at_most(t)) for t in support]

    def to_csv(self) -> str:
        lines = ["t,cdf,ci_low,ci_high"]
        lines += [f"{t},{p!r},{lo!r},{hi!r}" for t, p, lo, hi in self.ecdf_rows()]
        lines.append(f"# censored={self.censored} trials={self.trials} aborted={self.aborted}")
        return "\n".join(lines) + "\n"


def busy_distance(sample: LineFlowSample, threshold: float):
    """Smallest ``|psi|`` of an observer carrying at least ``threshold`` cars."""
    tot = sample.totals
    busy = np.abs(sample.psi[tot >= threshold])
    return int(busy.min()) if len(busy) else None


def T_n_distribution(samples, n: int, ell0: float = 1.0, z: float = 1.96) -> TnDistribution:
    ok, aborted = _accepted(samples)
    thr = n ** (4.0 / 3.0) / ell0
    return TnDistribution(n, thr, [busy_distance(s, thr) for s in ok], aborted, z)


def estimate_T_n(config: TrafficConfig, n: int, trials: int, pool=None) -> TnDistribution:
    if config.scan_psi < 4 * n ** (1.0 / 3.0):
        raise DomainError("scan_psi must be at least 4 n^(1/3)")
    return T_n_distribution(simulate_trials(config, trials, pool), n, config.ell0)


def omitted_depth_mass(depth_max: int) -> float:
    """Order of the probability mass that truncation at ``depth_max`` hides, ``n^(-1/3)``."""
    return depth_max ** (-1.0 / 3.0)
