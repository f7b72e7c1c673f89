"""Command-line entry point: ``kpzroads <subcommand> [config.json] [--seed] [--threads] [--out]``.

Every run validates its whole configuration first, computes all outputs in
memory, then writes each file atomically and finishes with ``manifest.json``
(resolved config, seeds, package version and a sha256 per file).  The
thread count never enters the manifest, so manifests compare equal across
thread counts.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from . import fluctuation as fl
from . import poisson as po
from . import terrain as te
from . import traffic as tr
from . import ukdata as uk
from .errors import DomainError, KPZRoadsError, ParseError, SchemaError, ValidationError
from .lattice import Region, sample_weight_field
from .lpp import PassageProfile, horizon_target
from .stats import fit_power_law
from .svg import Series, geodesic_svg, plot_svg

OUT_ENV = "KPZROADS_OUT"

EXIT_OK, EXIT_VALIDATION, EXIT_RUNTIME, EXIT_CENSORED = 0, 2, 3, 4

_TRAFFIC_KEYS = {
    "epsilon": 0.2,
    "depth_max": 64,
    "width_factor": 8.0,
    "horizon_factor": 4.0,
    "trials": 200,
    "master_seed": 0,
}

SCHEMAS = {
    "traffic-tails": {**_TRAFFIC_KEYS, "n_values_D": [8, 16, 32, 64], "n_values_N": [4, 8, 16, 32]},
    "traffic-meanNn": {**_TRAFFIC_KEYS, "n_values": [4, 8, 16]},
    "traffic-Tn": {**_TRAFFIC_KEYS, "n_values": [8, 16, 32], "scan_psi": 24, "ell0": 1.0},
    "fluctuation": {"theta": math.pi / 4, "T_values": [64, 128, 256, 512], "seeds": 100,
                    "horizon_factor": 4.0, "master_seed": 0},
    "coalescence": {"n": 60, "k": 0, "segment_halfwidth": 15, "mesh": 4, "seeds": 100,
                    "ells": list(range(1, 11)), "master_seed": 0},
    "poisson": {"r": 1.0, "gamma": 1.0, "window_radius": None, "trials": 1000, "master_seed": 0},
    "terrain-path": {"grid": None, "src": None, "dst": None, "delta": None, "connectivity": 4},
    "ukdata-strips": {"dataset": None, "columns": {}, "startpoints": None, "length_km": 100.0,
                      "widths": {}, "region_polygon": None, "exclusions": [], "eastward_only": True},
    "ukdata-stats": {"dataset": None, "columns": {}, "startpoints": None, "length_km": 100.0,
                     "widths": {}, "region_polygon": None, "exclusions": [], "eastward_only": True,
                     "d_values": None, "freq_band": [0.49, 0.51], "thresholds": None, "synthetic": None},
    "simulate-geodesics": {"halfwidth": 40, "horizon": 200.0, "epsilon": 0.2, "master_seed": 0},
    "plot": {"input": None, "x": None, "y": None, "ci_low": None, "ci_high": None, "loglog": False,
             "title": "", "output": "plot.svg"},
}

_SEED_KEYS = ("master_seed",)


class RunFailure(KPZRoadsError):
    """Raised inside a run to select a specific exit code."""

    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def resolve_config(subcommand: str, raw: dict, seed: int | None = None) -> dict:
    """Merge ``raw`` over the schema defaults; unknown keys are an error."""
    schema = SCHEMAS[subcommand]
    if not isinstance(raw, dict):
        raise ValidationError("config must be a JSON object")
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(unknown)}")
    cfg = {**schema, **raw}
    if seed is not None:
        if "master_seed" not in schema:
            raise ValidationError(f"{subcommand} does not take a seed")
        cfg["master_seed"] = seed
    for key, default in schema.items():
        val = cfg[key]
        if isinstance(default, bool) and not isinstance(val, bool):
            raise ValidationError(f"{key} must be a boolean")
        if isinstance(default, int) and not isinstance(default, bool) and not (
                isinstance(val, int) and not isinstance(val, bool)):
            raise ValidationError(f"{key} must be an integer")
        if isinstance(default, float) and not (isinstance(val, (int, float)) and not isinstance(val, bool)):
            raise ValidationError(f"{key} must be a number")
    for key in ("trials", "seeds"):
        if key in cfg and cfg[key] < 1:
            raise ValidationError(f"{key} must be at least 1")
    for key in _SEED_KEYS:
        if key in cfg and not 0 <= cfg[key] < 1 << 63:
            raise ValidationError(f"{key} must be a nonnegative 63-bit integer")
    return cfg


def _int_list(cfg, key, lo=1):
    vals = cfg[key]
    if not isinstance(vals, list) or not vals or not all(isinstance(v, int) and v >= lo for v in vals):
        raise ValidationError(f"{key} must be a nonempty list of integers >= {lo}")
    return vals


def _traffic_config(cfg, **extra) -> tr.TrafficConfig:
    return tr.TrafficConfig(epsilon=cfg["epsilon"], depth_max=cfg["depth_max"],
                            width_factor=cfg["width_factor"], horizon_factor=cfg["horizon_factor"],
                            master_seed=cfg["master_seed"], **extra)


def _csv_rows(header, rows) -> str:
    return header + "\n" + "".join(",".join(_cell(v) for v in r) + "\n" for r in rows)


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fit_dict(fit):
    if fit is None:
        return None
    return {"slope": fit.slope, "intercept": fit.intercept, "r2": fit.r_squared,
            "n_points": fit.n_points, "n_excluded": fit.n_excluded}


# Each planner validates its config and returns ``job(pool) -> {filename: text}``.

def plan_traffic_tails(cfg):
    nd, nn = _int_list(cfg, "n_values_D"), _int_list(cfg, "n_values_N")
    tc = _traffic_config(cfg)
    if max(nd) > tc.depth_max:
        raise ValidationError("n_values_D must not exceed depth_max")

    def job(pool):
        samples = tr.simulate_trials(tc, cfg["trials"], pool)
        d, n = tr.tail_D(samples, nd), tr.tail_N(samples, nn)
        summary = {
            "aborted": d.aborted,
            "slope_D": _fit_dict(fit_power_law(d.n, d.p_hat, drop_zeros=True)) if len(nd) > 1 else None,
            "slope_N": _fit_dict(fit_power_law(n.n, n.p_hat, drop_zeros=True)) if len(nn) > 1 else None,
            "monotone_D": d.is_monotone(),
            "monotone_N": n.is_monotone(),
            "omitted_depth_mass_order": tr.omitted_depth_mass(tc.depth_max),
        }
        return {"tail_D.csv": d.to_csv(), "tail_N.csv": n.to_csv(), "summary.json": _json(summary)}

    return job


def plan_traffic_mean(cfg):
    ns = _int_list(cfg, "n_values")
    tc = _traffic_config(cfg)
    if max(ns) > tc.depth_max:
        raise ValidationError("n_values must not exceed depth_max")

    def job(pool):
        est = tr.mean_N_n(tr.simulate_trials(tc, cfg["trials"], pool), ns)
        rows = [(e.n, e.mean, e.se, e.trials, e.z_score) for e in est]
        return {"mean_Nn.csv": _csv_rows("n,mean,se,trials,z_score", rows)}

    return job


def plan_traffic_tn(cfg):
    ns = _int_list(cfg, "n_values")
    if cfg["scan_psi"] % 2 or cfg["scan_psi"] < 0:
        raise ValidationError("scan_psi must be a nonnegative even integer")
    if cfg["scan_psi"] < 4 * max(ns) ** (1 / 3):
        raise ValidationError("scan_psi must be at least 4 n^(1/3) for every n")
    tc = _traffic_config(cfg, scan_psi=cfg["scan_psi"], ell0=cfg["ell0"])

    def job(pool):
        samples = tr.simulate_trials(tc, cfg["trials"], pool)
        files, summary, all_censored = {}, {}, True
        for n in ns:
            dist = tr.T_n_distribution(samples, n, tc.ell0)
            files[f"Tn_{n}.csv"] = dist.to_csv()
            p, lo, hi = dist.prob_at_most(n ** (1 / 3))
            summary[str(n)] = {"p_le_n13": p, "ci": [lo, hi], "censored": dist.censored,
                               "trials": dist.trials}
            all_censored &= dist.censored == dist.trials
        files["summary.json"] = _json(summary)
        if all_censored:
            raise RunFailure("every T_n sample is censored", EXIT_CENSORED)
        return files

    return job


def plan_fluctuation(cfg):
    Ts = _int_list(cfg, "T_values")
    if not 0 < cfg["theta"] < math.pi / 2:
        raise ValidationError("theta must lie in (0, pi/2)")
    if cfg["horizon_factor"] < 1:
        raise ValidationError("horizon_factor must be at least 1")
    seeds = _derived_seeds(cfg["master_seed"], cfg["seeds"])

    def job(pool):
        chunks = list((pool.map if pool else map)(
            lambda s: fl.fluctuation_run([s], cfg["theta"], Ts, cfg["horizon_factor"]), seeds))
        order = {s: i for i, s in enumerate(seeds)}
        rows = sorted((r for c in chunks for r in c), key=lambda r: (r[1], order[r[2]]))
        med = [float(np.median([r[4] for r in rows if r[1] == T])) for T in Ts]
        fit = fit_power_law(Ts, med) if len(Ts) > 1 and min(med) > 0 else None
        summary = {"median_sup_dev": dict(zip(map(str, Ts), med)), "fit": _fit_dict(fit),
                   "max_dev_at_0": max(r[5] for r in rows)}
        return {"fluctuation.csv": _csv_rows("theta,T,seed,dev,sup_dev,dev_0", rows),
                "summary.json": _json(summary)}

    return job


def plan_coalescence(cfg):
    if cfg["n"] < 3:
        raise ValidationError("n must be at least 3")
    if cfg["mesh"] < 1 or cfg["segment_halfwidth"] < 0:
        raise ValidationError("mesh must be >= 1 and segment_halfwidth >= 0")
    ells = _int_list(cfg, "ells")
    seeds = _derived_seeds(cfg["master_seed"], cfg["seeds"])

    def job(pool):
        chunks = list((pool.map if pool else map)(
            lambda s: fl.coalescence_run([s], cfg["n"], cfg["k"], cfg["segment_halfwidth"],
                                         cfg["mesh"], verify=True), seeds))
        rows = [r for c in chunks for r in c]
        tail = fl.class_tail([r[3] for r in rows], ells)
        summary = {"tail": dict(zip(map(str, ells), tail)),
                   "nonincreasing": all(a >= b for a, b in zip(tail, tail[1:]))}
        return {"coalescence.csv": _csv_rows("n,k,seed,class_count", rows), "summary.json": _json(summary)}

    return job


def plan_poisson(cfg):
    try:
        pc = po.PoissonModelConfig(cfg["r"], cfg["gamma"], cfg["window_radius"], cfg["master_seed"],
                                   cfg["trials"])
    except DomainError as exc:
        raise ValidationError(str(exc)) from None

    def job(pool):
        counts = po.simulate_N_r(pc, pool)
        return {"counts.csv": po.counts_csv(counts), "summary.json": _json(json.loads(po.summarize(pc, counts).to_json()))}

    return job


def _latlon(v, key):
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(a, (int, float)) for a in v)):
        raise ValidationError(f"{key} must be [lat, lon]")
    return float(v[0]), float(v[1])


def _existing(path, key):
    if not isinstance(path, str) or not os.path.exists(path):
        raise ValidationError(f"{key}: file {path!r} not found")
    return path


def plan_terrain(cfg):
    if cfg["connectivity"] not in (4, 8):
        raise ValidationError("connectivity must be 4 or 8")
    grid = te.load_ascii_grid(_existing(cfg["grid"], "grid"))
    src = grid.cell_at(*_latlon(cfg["src"], "src"))
    dst = grid.cell_at(*_latlon(cfg["dst"], "dst"))
    delta = cfg["delta"] if cfg["delta"] is not None else te.default_delta(grid)
    if not isinstance(delta, (int, float)) or delta <= 0:
        raise ValidationError("delta must be positive")

    def job(pool):
        path = te.shortest_path(grid, src, dst, float(delta), cfg["connectivity"])
        meta = {"src_cell": list(src), "dst_cell": list(dst), "snapping": "containing cell"}
        return {"path.geojson": _json(te.export_path(path, grid, meta)), "path.csv": path.to_csv(grid)}

    return job


def _ukdata_inputs(cfg):
    cols = cfg["columns"]
    if not isinstance(cols, dict) or set(cols) - {"lat", "lon", "flow", "road"}:
        raise ValidationError("columns may only map lat, lon, flow, road")
    table = uk.load_count_points(_existing(cfg["dataset"], "dataset"), cols.get("lat", "latitude"),
                                 cols.get("lon", "longitude"), cols.get("flow", "flow"),
                                 cols.get("road", "road_name"))
    poly = uk.region_polygon(cfg["region_polygon"]) if cfg["region_polygon"] else None
    starts = uk.load_startpoints(_existing(cfg["startpoints"], "startpoints"), poly)
    starts = uk.exclude_startpoints(starts, cfg["exclusions"])
    widths = {**uk.DEFAULT_WIDTHS_KM, **cfg["widths"]}
    bad = sorted({s.region for s in starts} - set(widths))
    if bad:
        raise ValidationError(f"no strip width for regions {bad}")
    if cfg["length_km"] <= 0:
        raise ValidationError("length_km must be positive")
    return table, starts, widths


def _metadata(cfg, table, n_starts):
    return {"eastward_only": cfg["eastward_only"], "deduplication": "none", "dropped_rows": table.dropped,
            "invalid_rows": [list(x) for x in table.invalid], "startpoints": n_starts}


def plan_ukdata_strips(cfg):
    table, starts, widths = _ukdata_inputs(cfg)

    def job(pool):
        curves = uk.analyze_strips(table.points, starts, cfg["length_km"], widths, cfg["eastward_only"])
        files = {f"curve_{i:04d}.csv": c.to_csv() for i, c in enumerate(curves)}
        files["startpoints.csv"] = _csv_rows("index,lat,lon,region",
                                             [(i, s.lat, s.lon, s.region) for i, s in enumerate(starts)])
        files["metadata.json"] = _json(_metadata(cfg, table, len(starts)))
        return files

    return job


def plan_ukdata_stats(cfg):
    band = cfg["freq_band"]
    if not (isinstance(band, list) and len(band) == 2 and 0 <= band[0] <= band[1] <= 1):
        raise ValidationError("freq_band must be [low, high] within [0, 1]")
    thresholds = np.asarray(cfg["thresholds"], dtype=float) if cfg["thresholds"] else uk.DEFAULT_THRESHOLDS
    syn = cfg["synthetic"]
    if syn is not None:
        allowed = {"c", "exponent", "n_curves", "seed", "spread"}
        if not isinstance(syn, dict) or set(syn) - allowed:
            raise ValidationError(f"synthetic accepts only {sorted(allowed)}")
        d_values = cfg["d_values"] or list(np.linspace(3.0, 10.0, 15))
    else:
        table, starts, widths = _ukdata_inputs(cfg)
        d_values = cfg["d_values"] or list(np.linspace(1.0, cfg["length_km"], 50))
    if any(d <= 0 for d in d_values):
        raise ValidationError("d_values must be positive")

    def job(pool):
        if syn is not None:
            curves = uk.synthetic_power_law_curves(syn.get("c", 10.0), syn.get("exponent", 4.0), d_values,
                                                   syn.get("n_curves", 201), syn.get("seed", 0),
                                                   syn.get("spread", 0.5))
            meta = {"synthetic": syn}
        else:
            curves = uk.analyze_strips(table.points, starts, cfg["length_km"], widths, cfg["eastward_only"])
            meta = _metadata(cfg, table, len(starts))
        res = uk.median_threshold_curve(curves, d_values, tuple(band), thresholds)
        fit = _fit_dict(res.fit)
        summary = {"fit": fit, "gaps": res.gaps, "theory_slope": 4.0, **meta}
        svg = plot_svg([Series("k band centre", tuple(d for d, _, _ in res.band_edges()),
                               tuple(math.sqrt(a * b) for _, a, b in res.band_edges()),
                               tuple(a for _, a, _ in res.band_edges()),
                               tuple(b for _, _, b in res.band_edges()))],
                       loglog=True, title="median threshold", xlabel="d (km)", ylabel="k").text \
            if res.band_edges() else None
        files = {"aggregate.csv": uk.aggregate_csv(curves, d_values, thresholds),
                 "threshold_curve.csv": res.to_csv(), "fit.json": _json(summary)}
        if svg:
            files["threshold_curve.svg"] = svg
        return files

    return job


def _geodesic_edges(cfg):
    h, R, eps = cfg["halfwidth"], cfg["horizon"], cfg["epsilon"]
    ws, ds = tr.trial_seeds(cfg["master_seed"], 0)
    sources = [((p + 0) // 2, (0 - p) // 2) for p in range(-2 * h, 2 * h + 1, 2)]
    reach = int(math.floor(R + 0.5)) + 1
    region = Region.from_bounds(-h, -h, h + reach, h + reach)
    field = sample_weight_field(region, ws)
    dirs = tr.sample_direction_field(region, eps, ds)
    counts = {}
    for s in sources:
        t = horizon_target(s, dirs[s], R)
        path = PassageProfile(field, t).geodesic_from(s)
        for a, b in zip(path.points, path.points[1:]):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return [(a, b, c) for (a, b), c in sorted(counts.items())]


def plan_simulate_geodesics(cfg):
    if cfg["halfwidth"] < 1 or cfg["horizon"] < 1:
        raise ValidationError("halfwidth and horizon must be at least 1")
    if not 0 < cfg["epsilon"] < math.pi / 4:
        raise ValidationError("epsilon must lie in (0, pi/4)")

    def job(pool):
        edges = _geodesic_edges(cfg)
        return {"geodesics.svg": geodesic_svg(edges),
                "edges.csv": _csv_rows("x1,y1,x2,y2,count", [(*a, *b, c) for a, b, c in edges])}

    return job


def plan_plot(cfg):
    import csv

    path = _existing(cfg["input"], "input")
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.DictReader(line for line in fh if not line.startswith("#"))]
    if not rows:
        raise ValidationError("input has no rows")
    cols = rows[0].keys()
    x, y = cfg["x"] or list(cols)[0], cfg["y"] or list(cols)[1]
    for key in (x, y, cfg["ci_low"], cfg["ci_high"]):
        if key is not None and key not in cols:
            raise ValidationError(f"column {key!r} not in input")
    if not str(cfg["output"]).endswith(".svg") or os.sep in str(cfg["output"]):
        raise ValidationError("output must be a plain .svg file name")

    def col(k):
        return tuple(float(r[k]) for r in rows) if k else None

    def job(pool):
        res = plot_svg(Series(y, col(x), col(y), col(cfg["ci_low"]), col(cfg["ci_high"])),
                       loglog=cfg["loglog"], title=cfg["title"], xlabel=x, ylabel=y)
        return {cfg["output"]: res.text, "plot.json": _json({"dropped_points": res.dropped})}

    return job


PLANNERS = {
    "traffic-tails": plan_traffic_tails,
    "traffic-meanNn": plan_traffic_mean,
    "traffic-Tn": plan_traffic_tn,
    "fluctuation": plan_fluctuation,
    "coalescence": plan_coalescence,
    "poisson": plan_poisson,
    "terrain-path": plan_terrain,
    "ukdata-strips": plan_ukdata_strips,
    "ukdata-stats": plan_ukdata_stats,
    "simulate-geodesics": plan_simulate_geodesics,
    "plot": plan_plot,
}


def _derived_seeds(master: int, count: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(master).generate_state(count, dtype=np.uint64)]


def atomic_write(path: str, data: bytes) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def build_manifest(subcommand: str, cfg: dict, files: dict[str, bytes]) -> bytes:
    doc = {
        "subcommand": subcommand,
        "config": cfg,
        "seeds": {k: cfg[k] for k in _SEED_KEYS if k in cfg},
        "code_version": __version__,
        "files": {name: hashlib.sha256(data).hexdigest() for name, data in sorted(files.items())},
    }
    return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode()


def run(subcommand: str, raw_config: dict, out_dir: str, threads: int = 1, seed: int | None = None) -> int:
    """Run one subcommand; returns the process exit code.

    Validation problems return 2 and runtime failures 3, each with a JSON
    error object on standard error.  Nothing is written unless the whole run
    succeeds.
    """
    try:
        if subcommand not in PLANNERS:
            raise ValidationError(f"unknown subcommand {subcommand!r}")
        if threads < 1:
            raise ValidationError("threads must be at least 1")
        cfg = resolve_config(subcommand, raw_config, seed)
        try:
            job = PLANNERS[subcommand](cfg)
        except (DomainError, SchemaError, ParseError, FileNotFoundError) as exc:
            raise ValidationError(str(exc)) from None
    except KPZRoadsError as exc:
        _report("validation", exc)
        return EXIT_VALIDATION
    pool = ThreadPoolExecutor(threads) if threads > 1 else None
    try:
        outputs = job(pool)
    except RunFailure as exc:
        _report("censored" if exc.code == EXIT_CENSORED else "runtime", exc)
        return exc.code
    except (KPZRoadsError, ValueError, ArithmeticError) as exc:
        _report("runtime", exc)
        return EXIT_RUNTIME
    finally:
        if pool is not None:
            pool.shutdown()
    files = {name: text.encode() for name, text in outputs.items()}
    os.makedirs(out_dir, exist_ok=True)
    for name, data in sorted(files.items()):
        atomic_write(os.path.join(out_dir, name), data)
    atomic_write(os.path.join(out_dir, "manifest.json"), build_manifest(subcommand, cfg, files))
    print(f"{subcommand}: wrote {len(files) + 1} files to {out_dir}", file=sys.stderr)
    return EXIT_OK


def _report(kind: str, exc: BaseException) -> None:
    print(json.dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}, sort_keys=True),
          file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpzroads", description="LPP road-traffic experiments")
    sub = p.add_subparsers(dest="subcommand", required=True)
    for name in PLANNERS:
        sp = sub.add_parser(name)
        sp.add_argument("config", nargs="?", help="JSON config file (defaults when omitted)")
        sp.add_argument("--seed", type=int, default=None, help="override master_seed")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for trials")
        sp.add_argument("--out", default=None, help=f"output directory (default ${OUT_ENV} or ./runs/<subcommand>)")
        if name == "terrain-path":
            sp.add_argument("--delta", type=float, default=None, help="horizontal edge length in metres")
            sp.add_argument("--connectivity", type=int, choices=(4, 8), default=None)
            sp.add_argument("--src", type=_latlon_arg, default=None, help="source as lat,lon")
            sp.add_argument("--dst", type=_latlon_arg, default=None, help="destination as lat,lon")
    return p


def _latlon_arg(text: str) -> list[float]:
    try:
        lat, lon = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lat,lon, got {text!r}") from None
    return [lat, lon]


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    raw = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            _report("validation", exc)
            return EXIT_VALIDATION
    for key in ("delta", "connectivity", "src", "dst"):
        if getattr(args, key, None) is not None:
            raw[key] = getattr(args, key)
    out = args.out or os.path.join(os.environ.get(OUT_ENV, "runs"), args.subcommand)
    return run(args.subcommand, raw, out, args.threads, args.seed)


if __name__ == "__main__":
    sys.exit(main())
