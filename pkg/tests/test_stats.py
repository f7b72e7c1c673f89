import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.stats import norm
from statsmodels.stats.proportion import proportion_confint

from kpzroads.errors import DomainError
from kpzroads.stats import fit_power_law, wilson_interval


def test_wilson_examples():
    assert wilson_interval(0, 100, 1.96)[0] == 0.0
    lo, hi = wilson_interval(50, 100, 1.96)
    assert lo == pytest.approx(0.4038, abs=5e-4) and hi == pytest.approx(0.5962, abs=5e-4)
    assert wilson_interval(100, 100, 1.96)[1] == 1.0
    with pytest.raises(DomainError):
        wilson_interval(0, 0)
    with pytest.raises(DomainError):
        wilson_interval(5, 4)


@given(st.integers(1, 5000), st.data())
def test_wilson_matches_statsmodels(trials, data):
    hits = data.draw(st.integers(0, trials))
    lo, hi = wilson_interval(hits, trials, 1.96)
    # alpha chosen so that statsmodels uses z = 1.96 exactly
    ref_lo, ref_hi = proportion_confint(hits, trials, alpha=2 * norm.sf(1.96), method="wilson")
    assert lo == pytest.approx(ref_lo, abs=1e-12) and hi == pytest.approx(ref_hi, abs=1e-12)
    assert lo <= hits / trials <= hi


@given(st.integers(1, 50), st.integers(2, 20))
def test_wilson_width_shrinks(k, scale):
    lo1, hi1 = wilson_interval(k, 2 * k)
    lo2, hi2 = wilson_interval(k * scale, 2 * k * scale)
    assert hi2 - lo2 <= hi1 - lo1


def test_fit_examples():
    xs = np.array([8, 16, 32, 64.0])
    fit = fit_power_law(xs, xs ** (-1 / 3))
    assert fit.slope == pytest.approx(-1 / 3, abs=1e-12) and fit.r_squared == pytest.approx(1.0)
    assert abs(fit_power_law(xs, np.full(4, 7.0)).slope) < 1e-12
    fit = fit_power_law(xs, 2 * xs**4)
    assert fit.slope == pytest.approx(4) and fit.intercept == pytest.approx(math.log(2))
    assert fit.n_points == 4


def test_fit_errors_and_exclusion():
    with pytest.raises(DomainError):
        fit_power_law([1, 2], [0, 1])
    with pytest.raises(DomainError):
        fit_power_law([3, 3], [1, 2])
    fit = fit_power_law([1, 2, 4], [1, 0, 0.25], drop_zeros=True)
    assert fit.n_excluded == 1 and fit.slope == pytest.approx(-1)


@given(st.floats(0.01, 100))
def test_fit_scale_equivariance(c):
    xs = np.array([2.0, 3.0, 5.0, 9.0])
    ys = np.array([1.0, 0.7, 0.9, 0.3])
    a, b = fit_power_law(xs, ys), fit_power_law(xs, c * ys)
    assert b.slope == pytest.approx(a.slope, abs=1e-9)
    assert b.intercept - a.intercept == pytest.approx(math.log(c), abs=1e-9)
    assert 0 <= a.r_squared <= 1
