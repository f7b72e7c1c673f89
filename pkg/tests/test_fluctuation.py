import math

import numpy as np
import pytest

from kpzroads.errors import DomainError, HorizonError, ScaleError
from kpzroads.fluctuation import (
    CoalescenceCount,
    FluctuationSample,
    class_tail,
    classes_by_union_find,
    coalescence_classes,
    coalescence_run,
    coincide,
    count_classes,
    deviation_profile,
    fluctuation_region,
    intersection_size,
    is_equivalence,
    mesh_geodesics,
    mesh_region,
    relation_matrix,
    segment_meshes,
    straight_line_psi,
    transversal_fluctuation,
    window_lines,
)
from kpzroads.lattice import Region, sample_weight_field
from kpzroads.lpp import GeodesicPath, directed_geodesic, DirectedGeodesicSpec, geodesic


def test_straight_line_psi():
    assert straight_line_psi(math.pi / 4, 100) == pytest.approx(0.0, abs=1e-12)
    assert straight_line_psi(math.atan(1 / 3), 8) == pytest.approx(4.0)


@pytest.mark.parametrize("theta", [0.3, math.pi / 4, 1.2])
def test_deviation_zero_at_start(theta):
    for seed in range(20):
        f = sample_weight_field(fluctuation_region(theta, 80), seed)
        path = directed_geodesic(f, DirectedGeodesicSpec((0, 0), theta, 80))
        assert deviation_profile(path, theta, 40)[0] == 0


def test_diagonal_deviation_is_abs_psi():
    f = sample_weight_field(fluctuation_region(math.pi / 4, 200), 3)
    s = transversal_fluctuation(f, math.pi / 4, 50, 200)
    path = directed_geodesic(f, DirectedGeodesicSpec((0, 0), math.pi / 4, 200))
    p = path.at_time(50)
    assert s.deviation_at_T == pytest.approx(abs(p.x - p.y))
    assert s.deviation_at_T <= s.sup_deviation


def test_horizon_error():
    f = sample_weight_field(fluctuation_region(math.pi / 4, 20), 3)
    with pytest.raises(HorizonError):
        transversal_fluctuation(f, math.pi / 4, 40, 20)
    with pytest.raises(DomainError):
        FluctuationSample(4, 3.0, 2.0)


def test_window_lines():
    assert window_lines(60) == (20, 40)
    assert window_lines(10) == (4, 6)


def test_segment_meshes_geometry():
    src, dst = segment_meshes(60, 1, 15, 4)
    assert all(p.x + p.y == 0 for p in src) and all(p.x + p.y == 120 for p in dst)
    assert len(src) == len(dst) == 8
    centre = dst[len(dst) // 2 - 1]
    assert abs((centre.x - centre.y) - 2 * (60 - round(60 ** (2 / 3)) - 60)) <= 16
    with pytest.raises(ScaleError):
        segment_meshes(2, 0, 3)


def test_single_pair_has_one_class():
    f = sample_weight_field(Region.from_bounds(0, 0, 40, 40), 1)
    c = coalescence_classes(f, 20, 0, 0, mesh=1)
    assert c.class_count == 1 and c.pairs == 1


def test_neighbouring_targets_that_coalesce():
    # search seeds for a pair of targets v, v + (0, 1) whose geodesics share the window,
    # verified by direct comparison, and check they form a single class
    found = 0
    for seed in range(40):
        f = sample_weight_field(Region.from_bounds(0, 0, 31, 32), seed)
        a, b = geodesic(f, (0, 0), (30, 30)), geodesic(f, (0, 0), (30, 31))
        lo, hi = window_lines(30)
        same = all(a.at_time(t) == b.at_time(t) for t in range(lo, hi + 1))
        assert coincide(a, b, lo, hi) == same
        if same:
            assert count_classes([a, b], lo, hi) == 1
            found += 1
        else:
            assert count_classes([a, b], lo, hi) == 2
    assert found > 0


def test_equivalence_and_union_find_agree():
    src, dst = segment_meshes(30, 0, 8, 2)
    for seed in range(20):
        f = sample_weight_field(mesh_region(src, dst), seed)
        paths = mesh_geodesics(f, src, dst)
        lo, hi = window_lines(30)
        rel = relation_matrix(paths, lo, hi)
        assert is_equivalence(rel)
        k = count_classes(paths, lo, hi)
        assert k == classes_by_union_find(rel)
        assert 1 <= k <= len(paths)
        assert (k == len(paths)) == (rel.sum() == len(paths))


def test_is_equivalence_detects_violations():
    rel = np.array([[1, 1, 0], [1, 1, 1], [0, 1, 1]], dtype=bool)
    assert not is_equivalence(rel)
    assert not is_equivalence(np.array([[1, 1], [0, 1]], dtype=bool))


def test_coalescence_run_tail():
    rows = coalescence_run(range(30), 30, 0, 8, 2, verify=True)
    tail = class_tail([r[3] for r in rows], range(1, 11))
    assert tail[0] == 1.0
    assert all(a >= b for a, b in zip(tail, tail[1:]))
    with pytest.raises(DomainError):
        CoalescenceCount(10, 0, 5, pairs=4)


def _path(points):
    return GeodesicPath(tuple(points), 0.0)


def test_intersection_size():
    a = _path([(0, 0), (1, 0), (1, 1), (2, 1)])
    b = _path([(5, 5), (5, 6)])
    win = Region.from_bounds(0, 0, 1, 1)
    assert intersection_size(a, a, win) == 3
    assert intersection_size(a, b, win) == 0
    assert intersection_size(a, a) == 4


def test_intersection_equals_shared_suffix():
    f = sample_weight_field(Region.from_bounds(0, 0, 40, 40), 12)
    a, b = geodesic(f, (0, 1), (40, 40)), geodesic(f, (1, 0), (40, 40))
    win = Region.from_bounds(0, 0, 40, 40)
    common = set(a.points) & set(b.points)
    # planarity: once merged, geodesics to a common target stay together
    first = min(common, key=lambda p: p.x + p.y)
    suffix = [p for p in a.points if p.x + p.y >= first.x + first.y]
    assert suffix == [p for p in b.points if p.x + p.y >= first.x + first.y]
    assert intersection_size(a, b, win) == len(suffix)
