"""Small, fast configurations for every CLI subcommand, with their input files."""

import json

import numpy as np

from kpzroads.terrain import ElevationGrid, dump_ascii_grid


def write_inputs(root):
    rng = np.random.default_rng(0)
    g = ElevationGrid(8, 8, -1.0, 51.0, 0.005, np.round(rng.uniform(0, 200, (8, 8)), 1), -9999.0)
    (root / "grid.asc").write_text(dump_ascii_grid(g))
    rows = ["latitude,longitude,flow,road_name"]
    for i in range(80):
        rows.append(f"{52 + rng.uniform(-0.02, 0.02):.5f},{-3 + rng.uniform(0, 0.3):.5f},"
                    f"{rng.integers(500, 50000)},R{i % 7}")
    rows.append("52.0,-2.9,,A9")
    (root / "counts.csv").write_text("\n".join(rows) + "\n")
    (root / "starts.csv").write_text("lat,lon,region\n52.0,-3.0,\n51.99,-3.01,SE\n52.01,-3.02,NW\n")
    (root / "series.csv").write_text("n,p_hat,ci_low,ci_high\n1,0.5,0.4,0.6\n2,0.3,0.2,0.4\n4,0.0,0.0,0.1\n")


def cases(root):
    return {
        "traffic-tails": {"depth_max": 16, "trials": 12, "n_values_D": [4, 8, 16], "n_values_N": [2, 4]},
        "traffic-meanNn": {"depth_max": 16, "trials": 12, "n_values": [4, 8]},
        "traffic-Tn": {"depth_max": 16, "trials": 12, "n_values": [8], "scan_psi": 8},
        "fluctuation": {"seeds": 4, "T_values": [16, 32]},
        "coalescence": {"seeds": 4, "n": 12, "segment_halfwidth": 4, "mesh": 2},
        "poisson": {"trials": 50},
        "terrain-path": {"grid": str(root / "grid.asc"), "src": [51.037, -0.998], "dst": [51.002, -0.962],
                         "connectivity": 8},
        "ukdata-strips": {"dataset": str(root / "counts.csv"), "startpoints": str(root / "starts.csv"),
                          "length_km": 20.0},
        "ukdata-stats": {"synthetic": {"c": 10.0, "n_curves": 51}},
        "simulate-geodesics": {"halfwidth": 6, "horizon": 30.0},
        "plot": {"input": str(root / "series.csv"), "x": "n", "y": "p_hat", "ci_low": "ci_low",
                 "ci_high": "ci_high", "loglog": True},
    }


def dump(root, name, cfg):
    path = root / f"{name}.json"
    path.write_text(json.dumps(cfg))
    return str(path)
