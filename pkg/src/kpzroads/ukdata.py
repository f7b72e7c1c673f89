"""Strip-method statistics on traffic count points.

From a start point we walk east, keep the count points inside a narrow strip
around the eastward line and record the running maximum of their flows.
Over many start points, the threshold ``k`` that half the running maxima
reach within distance ``d`` is compared against a ``C d^4`` law.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np
from shapely.geometry import Point, Polygon

from .errors import DomainError, SchemaError, ValidationError
from .stats import PowerLawFit, fit_power_law

KM_PER_DEGREE = 111.32

# Corners (lat, lon) of the default South-East region, in boundary order.
SOUTH_EAST_CORNERS = (
    (50.71, -2.44),  # Dorchester
    (50.85, 0.57),   # Hastings
    (53.74, -0.33),  # Hull
    (53.82, -3.05),  # Blackpool
)
DEFAULT_WIDTHS_KM = {"SE": 3.0, "NW": 10.0}
DEFAULT_THRESHOLDS = np.geomspace(1e3, 1e5, 1001)


@dataclass(frozen=True)
class CountPoint:
    lat: float
    lon: float
    flow: float
    road_id: str = ""

    def __post_init__(self):
        if not -90 <= self.lat <= 90:
            raise ValidationError(f"latitude {self.lat} outside [-90, 90]")
        if not -180 <= self.lon <= 180:
            raise ValidationError(f"longitude {self.lon} outside [-180, 180]")
        if not self.flow >= 0:
            raise ValidationError(f"flow {self.flow} is negative")


@dataclass
class CountPointTable:
    points: list[CountPoint]
    dropped: int = 0
    invalid: list[tuple[int, str]] = field(default_factory=list)


def _reader(source):
    if hasattr(source, "read"):
        return io.StringIO(source.read())
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, newline="", encoding="utf-8-sig") as fh:
            return io.StringIO(fh.read())
    if isinstance(source, str) and "\n" in source:
        return io.StringIO(source)
    raise FileNotFoundError(source)


def load_count_points(source, lat_col: str = "latitude", lon_col: str = "longitude",
                      flow_col: str = "flow", road_col: str | None = "road_name") -> CountPointTable:
    """Read count points from CSV.

    Rows with an empty coordinate or flow are dropped and counted; rows whose
    values violate the coordinate or flow ranges are kept out and listed in
    ``invalid`` with their 1-based line number.
    """
    reader = csv.DictReader(_reader(source))
    cols = reader.fieldnames or []
    missing = [c for c in (lat_col, lon_col, flow_col) if c not in cols]
    if missing:
        raise SchemaError(f"missing columns: {', '.join(missing)}")
    out = CountPointTable([])
    for row in reader:
        line = reader.line_num
        raw = [(row.get(c) or "").strip() for c in (lat_col, lon_col, flow_col)]
        if any(not v for v in raw):
            out.dropped += 1
            continue
        try:
            lat, lon, flow = (float(v) for v in raw)
            road = (row.get(road_col) or "").strip() if road_col else ""
            out.points.append(CountPoint(lat, lon, flow, road))
        except ValueError as exc:
            out.invalid.append((line, str(exc)))
    return out


@dataclass(frozen=True)
class StripObservation:
    distance_km: float
    flow: float
    road_id: str = ""
    north_km: float = 0.0

    def __post_init__(self):
        if self.distance_km < 0:
            raise DomainError("distance_km must be nonnegative")


def local_offsets(lat, lon, start) -> tuple[np.ndarray, np.ndarray]:
    """Equirectangular ``(east_km, north_km)`` of points relative to ``start = (lat0, lon0)``."""
    lat0, lon0 = start
    north = (np.asarray(lat, dtype=float) - lat0) * KM_PER_DEGREE
    east = (np.asarray(lon, dtype=float) - lon0) * KM_PER_DEGREE * math.cos(math.radians(lat0))
    return east, north


def strip_select(points, start, width_km: float, length_km: float,
                 eastward_only: bool = True) -> list[StripObservation]:
    """Observations inside the strip ``|north| <= width/2``, ``0 <= east <= length``.

    With ``eastward_only=False`` points up to ``length_km`` west are kept too
    (with their absolute distance).  Sorted by distance, then road id, then flow.
    """
    if width_km <= 0 or length_km <= 0:
        raise DomainError("width_km and length_km must be positive")
    if not points:
        return []
    lat = [p.lat for p in points]
    lon = [p.lon for p in points]
    east, north = local_offsets(lat, lon, start)
    lo = 0.0 if eastward_only else -length_km
    keep = (east >= lo) & (east <= length_km) & (np.abs(north) <= width_km / 2)
    obs = [StripObservation(abs(float(east[i])), points[i].flow, points[i].road_id, float(north[i]))
           for i in np.nonzero(keep)[0]]
    obs.sort(key=lambda o: (o.distance_km, o.road_id, o.flow))
    return obs


@dataclass(frozen=True, eq=False)
class RunningMaxCurve:
    """Distinct observation distances and the largest flow seen up to each."""

    distances: np.ndarray
    maxima: np.ndarray
    flows: np.ndarray = field(default=None)

    def __len__(self):
        return len(self.distances)

    def max_within(self, d_km: float) -> float:
        """Running maximum at distance ``d_km``; ``-inf`` before the first observation."""
        k = np.searchsorted(self.distances, d_km, side="right")
        return float(self.maxima[k - 1]) if k else -math.inf

    def to_csv(self) -> str:
        lines = ["distance_km,flow,running_max"]
        lines += [f"{d!r},{f!r},{m!r}" for d, f, m in zip(self.distances, self.flows, self.maxima)]
        return "\n".join(lines) + "\n"


def running_max(observations) -> RunningMaxCurve:
    """Cumulative maximum; observations at equal distance merge into their largest flow."""
    pairs = [(o.distance_km, o.flow) if isinstance(o, StripObservation) else (float(o[0]), float(o[1]))
             for o in observations]
    if any(a[0] > b[0] for a, b in zip(pairs, pairs[1:])):
        raise DomainError("observations must be sorted by distance")
    dist, flow = [], []
    for d, f in pairs:
        if dist and d == dist[-1]:
            flow[-1] = max(flow[-1], f)
        else:
            dist.append(d)
            flow.append(f)
    flows = np.array(flow, dtype=float)
    return RunningMaxCurve(np.array(dist, dtype=float), np.maximum.accumulate(flows) if len(flows) else flows,
                           flows)


def exceedance_frequency(curves, d_km: float, k: float) -> float:
    """Fraction of curves whose running maximum within ``d_km`` reaches ``k``."""
    if not curves:
        raise DomainError("need at least one curve")
    return sum(c.max_within(d_km) >= k for c in curves) / len(curves)


def exceedance_table(curves, d_values, thresholds=DEFAULT_THRESHOLDS) -> np.ndarray:
    """``freq[i, j]`` = exceedance frequency at ``d_values[i]`` and ``thresholds[j]``."""
    if not curves:
        raise DomainError("need at least one curve")
    thr = np.asarray(thresholds, dtype=float)
    out = np.empty((len(d_values), len(thr)))
    for i, d in enumerate(d_values):
        m = np.array([c.max_within(d) for c in curves])
        # count of maxima >= each threshold via sorting
        srt = np.sort(m)
        out[i] = (len(m) - np.searchsorted(srt, thr, side="left")) / len(m)
    return out


@dataclass
class ThresholdCurve:
    """Per distance, the thresholds whose exceedance frequency lies in the band."""

    rows: list[tuple[float, np.ndarray]]
    fit: PowerLawFit | None
    gaps: list[float]
    band: tuple[float, float]

    def band_edges(self):
        return [(d, float(ks.min()), float(ks.max())) for d, ks in self.rows if len(ks)]

    def to_csv(self) -> str:
        lines = ["d_km,k_low,k_high"]
        lines += [f"{d!r},{lo!r},{hi!r}" for d, lo, hi in self.band_edges()]
        return "\n".join(lines) + "\n"


def median_threshold_curve(curves, d_values, freq_band=(0.49, 0.51),
                           thresholds=DEFAULT_THRESHOLDS) -> ThresholdCurve:
    """Thresholds in the frequency band at each distance, and a log-log fit of ``k`` on ``d``.

    Each distance with a nonempty band contributes the geometric centre of its
    band to the fit; empty bands are recorded as gaps.
    """
    lo, hi = freq_band
    if not 0 <= lo <= hi <= 1:
        raise DomainError("freq_band must satisfy 0 <= low <= high <= 1")
    thr = np.asarray(thresholds, dtype=float)
    table = exceedance_table(curves, d_values, thr)
    rows, gaps, xs, ys = [], [], [], []
    for d, freq in zip(d_values, table):
        ks = thr[(freq >= lo) & (freq <= hi)]
        rows.append((float(d), ks))
        if len(ks):
            xs.append(float(d))
            ys.append(math.sqrt(ks.min() * ks.max()))
        else:
            gaps.append(float(d))
    fit = fit_power_law(xs, ys) if len(set(xs)) >= 2 else None
    return ThresholdCurve(rows, fit, gaps, (lo, hi))


def aggregate_csv(curves, d_values, thresholds=DEFAULT_THRESHOLDS) -> str:
    table = exceedance_table(curves, d_values, thresholds)
    lines = ["d_km,k,frequency"]
    for d, freq in zip(d_values, table):
        lines += [f"{float(d)!r},{float(k)!r},{float(f)!r}" for k, f in zip(thresholds, freq)]
    return "\n".join(lines) + "\n"


def region_polygon(corners=SOUTH_EAST_CORNERS) -> Polygon:
    """Polygon in (lon, lat) order from ``(lat, lon)`` corners."""
    return Polygon([(lon, lat) for lat, lon in corners])


def classify_region(lat: float, lon: float, polygon: Polygon | None = None) -> str:
    """``"SE"`` inside the South-East polygon (boundary included), else ``"NW"``."""
    poly = polygon if polygon is not None else region_polygon()
    return "SE" if poly.covers(Point(lon, lat)) else "NW"


@dataclass(frozen=True)
class StartPoint:
    lat: float
    lon: float
    region: str


def load_startpoints(source, polygon: Polygon | None = None) -> list[StartPoint]:
    """CSV ``lat,lon,region``; an empty region is filled from the polygon."""
    reader = csv.DictReader(_reader(source))
    missing = [c for c in ("lat", "lon") if c not in (reader.fieldnames or [])]
    if missing:
        raise SchemaError(f"missing columns: {', '.join(missing)}")
    out = []
    for row in reader:
        lat, lon = float(row["lat"]), float(row["lon"])
        region = (row.get("region") or "").strip() or classify_region(lat, lon, polygon)
        out.append(StartPoint(lat, lon, region))
    return out


def exclude_startpoints(startpoints, exclusions) -> list[StartPoint]:
    """Drop start points inside any of the exclusion polygons ((lat, lon) rings)."""
    polys = [region_polygon(ring) for ring in exclusions]
    return [s for s in startpoints if not any(p.covers(Point(s.lon, s.lat)) for p in polys)]


def analyze_strips(points, startpoints, length_km: float, widths=None,
                   eastward_only: bool = True) -> list[RunningMaxCurve]:
    """One running-maximum curve per start point, strip width chosen by its region."""
    widths = {**DEFAULT_WIDTHS_KM, **(widths or {})}
    return [running_max(strip_select(points, (s.lat, s.lon), widths[s.region], length_km, eastward_only))
            for s in startpoints]


def synthetic_power_law_curves(c: float, exponent: float, d_values, n_curves: int, seed: int,
                               spread: float = 0.5) -> list[RunningMaxCurve]:
    """Curves whose median running maximum is ``c d^exponent`` at every ``d``.

    Each curve scales the law by an independent log-normal factor whose median
    is 1, so the median of the curves follows the law exactly up to sampling.
    """
    rng = np.random.default_rng(seed)
    d = np.asarray(d_values, dtype=float)
    out = []
    for s in np.exp(spread * rng.standard_normal(n_curves)):
        flows = c * s * d**exponent
        out.append(RunningMaxCurve(d.copy(), np.maximum.accumulate(flows), flows))
    return out
