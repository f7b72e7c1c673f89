import numpy as np
import pytest
from hypothesis import given, strategies as st

from kpzroads.errors import BoundsError, CapacityError, DomainError
from kpzroads.lattice import (
    LatticePoint,
    Region,
    WeightField,
    line_points,
    rotate_coords,
    sample_weight_field,
    unrotate_coords,
)


@pytest.mark.parametrize("v, expected", [((3, 1), (4, 2)), ((0, 0), (0, 0)), ((-2, 5), (3, -7))])
def test_rotate_coords_examples(v, expected):
    assert rotate_coords(v) == expected


@given(st.integers(-10**6, 10**6), st.integers(-10**6, 10**6))
def test_rotation_round_trip(x, y):
    assert unrotate_coords(*rotate_coords((x, y))) == (x, y)


def test_unrotate_rejects_parity_mismatch():
    with pytest.raises(DomainError):
        unrotate_coords(1, 0)


def test_line_points_examples():
    assert line_points(0, -2, 2) == [(-1, 1), (0, 0), (1, -1)]
    assert line_points(1, -1, 1) == [(0, 1), (1, 0)]
    assert line_points(4, 0, 0) == [(2, 2)]
    assert line_points(1, 0, 0) == []
    with pytest.raises(DomainError):
        line_points(0, 2, -2)


@given(st.integers(-50, 50), st.integers(-40, 40), st.integers(0, 20))
def test_line_points_property(T, lo, span):
    pts = line_points(T, lo, lo + span)
    psis = [p.x - p.y for p in pts]
    assert all(p.x + p.y == T for p in pts)
    assert psis == sorted(psis)
    expected = [s for s in range(lo, lo + span + 1) if (s - T) % 2 == 0]
    assert psis == expected


def test_region_basics():
    r = Region.from_bounds(-1, 2, 3, 4)
    assert r.shape == (5, 3) and r.size == 15
    assert r.contains((0, 3)) and not r.contains((4, 3))
    assert r.index((-1, 2)) == (0, 0)
    with pytest.raises(BoundsError):
        r.index((9, 9))
    with pytest.raises(DomainError):
        Region.from_bounds(1, 0, 0, 0)
    assert r.intersect(Region.from_bounds(3, 4, 9, 9)) == Region.from_bounds(3, 4, 3, 4)
    assert r.intersect(Region.from_bounds(10, 10, 11, 11)) is None


def test_weight_field_mean_and_positivity():
    f = sample_weight_field(Region.from_bounds(0, 0, 999, 999), seed=12345)
    assert f.weights.size == 10**6
    assert np.all(f.weights > 0)
    assert abs(f.weights.mean() - 1.0) < 0.01


def test_weight_field_deterministic_and_region_independent():
    a = sample_weight_field(Region.from_bounds(0, 0, 63, 63), seed=7)
    b = sample_weight_field(Region.from_bounds(0, 0, 63, 63), seed=7)
    assert a.weights.tobytes() == b.weights.tobytes()
    c = sample_weight_field(Region.from_bounds(-20, 30, 10, 90), seed=7)
    for p in [(0, 30), (5, 63), (10, 40)]:
        assert a.tau(p) == c.tau(p)
    d = sample_weight_field(Region.from_bounds(0, 0, 63, 63), seed=8)
    assert not np.array_equal(a.weights, d.weights)


def test_weight_field_is_read_only():
    f = sample_weight_field(Region.from_bounds(0, 0, 3, 3), seed=1)
    with pytest.raises(ValueError):
        f.weights[0, 0] = 5.0


def test_capacity_error():
    with pytest.raises(CapacityError):
        sample_weight_field(Region.from_bounds(0, 0, 99, 99), seed=1, max_vertices=1000)


def test_exponential_law_ks():
    from scipy import stats

    f = sample_weight_field(Region.from_bounds(0, 0, 199, 199), seed=99)
    assert stats.kstest(f.weights.ravel(), "expon").pvalue > 1e-3


def test_csv_dump():
    f = WeightField.from_array([[1.0, 2.0], [3.0, 4.0]], lo=(5, 6))
    assert f.to_csv().splitlines() == ["x,y,weight", "5,6,1.0", "5,7,2.0", "6,6,3.0", "6,7,4.0"]
    assert f[LatticePoint(6, 7)] == 4.0
