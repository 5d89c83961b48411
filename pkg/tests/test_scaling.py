import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from volset.errors import InvalidInputError
from volset.scaling import (
    box_counts,
    box_dimension,
    fit_power_law,
    fR_measure,
    fr_exhaustive,
    fr_fit,
    fr_scan,
    is_monotone,
    smallness_exhaustive,
    smallness_fit,
    smallness_scan,
    wedge_smallness,
)
from volset.setgen import (
    CantorSpec,
    CellMeasure,
    PointSet,
    annulus_filter,
    point_mass,
    product_cantor,
    sample_measure,
    segment_set,
    uniform_measure,
)
from volset.volumes import wedge_sample

DYADIC = [2.0**j for j in range(2, 10)]


def atoms(n, seed):
    # zero-side cells: the sampler returns the atoms themselves
    pts = np.random.default_rng(seed).random((n, 3))
    w = np.random.default_rng(seed + 1).random(n)
    return CellMeasure(0, [0.0] * 3, np.arange(n)[:, None].repeat(3, 1), w / w.sum(),
                       tuple(pts[:, a] for a in range(3)))


@settings(max_examples=50, deadline=None)
@given(st.floats(-3, 3), st.floats(-2, 2), st.integers(3, 12))
def test_fit_recovers_exact_power_law(slope, logc, n):
    x = 2.0 ** np.arange(n)
    fit = fit_power_law(x, math.exp(logc) * x**slope)
    assert fit.slope == pytest.approx(slope, abs=1e-9)
    assert fit.intercept == pytest.approx(logc, abs=1e-8)
    assert fit.max_residual < 1e-8


def test_fit_drops_zeros():
    fit = fit_power_law([1, 2, 4, 8, 16], [1, 0.5, 0.25, 0, 0])
    assert fit.dropped == [8.0, 16.0] and fit.slope == pytest.approx(-1)
    with pytest.raises(InvalidInputError):
        fit_power_law([1, 2, 4], [1, 0, 0])


def test_is_monotone():
    assert is_monotone([0.5, 0.4, 0.1], 10**4)
    assert not is_monotone([0.1, 0.5], 10**4)


def test_smallness_trivial_cases():
    shell = annulus_filter(uniform_measure(4), 0.5, 1.0)
    # recentred vectors have norm < 1, so every wedge is below 1
    assert wedge_smallness(shell, 1.0, 10_000, seed=1) == 1.0
    pm = point_mass([0.2, 0.4, 0.9])
    assert np.all(smallness_scan(pm, DYADIC, 1000, seed=1) == 1.0)
    fit = smallness_fit(pm, 0.0, DYADIC, 1000, seed=1)
    assert fit.slope == pytest.approx(0.0, abs=1e-12) and fit.notes["degenerate"]
    with pytest.raises(InvalidInputError):
        wedge_smallness(shell, 0.5, 10, seed=1)


def test_smallness_grid_rules():
    mu = uniform_measure(3)
    with pytest.raises(InvalidInputError):
        smallness_fit(mu, 3, [4, 8, 16], 100, 1)
    with pytest.raises(InvalidInputError):
        smallness_fit(mu, 3, [4, 8, 24, 48], 100, 1)


def test_smallness_sampler_matches_exhaustive():
    mu = atoms(40, 3)
    lambdas = [2.0, 4.0, 8.0, 16.0]
    n = 400_000
    exact = smallness_exhaustive(mu, lambdas)
    est = smallness_scan(mu, lambdas, n, seed=2)
    se = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(est - exact) <= 4 * se + 1e-12)


def test_smallness_uniform_annulus_slope():
    shell = annulus_filter(uniform_measure(5), 0.5, 1.0)
    fit = smallness_fit(shell, 3.0, DYADIC, 300_000, seed=5)
    assert fit.predicted_slope == -2.0
    assert -2.3 <= fit.slope <= -1.7
    est = fit.notes["estimates"]
    assert est == sorted(est, reverse=True) and fit.notes["monotone"]


def test_smallness_threads_bit_identical():
    mu = product_cantor(CantorSpec.with_dimension(0.9), 5)
    a = smallness_scan(mu, DYADIC, 700_000, seed=3)
    b = smallness_scan(mu, DYADIC, 700_000, seed=3, threads=4)
    assert np.array_equal(a, b)


def test_fr_trivial_cases():
    mu = uniform_measure(3)
    assert fR_measure(mu, 0.25, 5000, seed=1) == 1.0
    assert np.all(fr_scan(point_mass([0.1, 0.5, 0.3]), [1, 10, 1e6], 1000, 1) == 1.0)


def test_fr_sampler_matches_exhaustive():
    mu = atoms(30, 7)
    radii = [2.0, 4.0, 8.0]
    n = 400_000
    exact = fr_exhaustive(mu, radii)
    est = fr_scan(mu, radii, n, seed=4)
    se = np.sqrt(exact * (1 - exact) / n)
    assert np.all(np.abs(est - exact) <= 4 * se + 1e-12)


def test_fr_cantor_decays():
    mu = product_cantor(CantorSpec.with_dimension(0.9), 6)
    fit = fr_fit(mu, 2.7, [2.0**j for j in range(2, 8)], 500_000, seed=6)
    assert fit.predicted_slope == pytest.approx(9 - 4 * 2.7)
    assert fit.slope <= -1.4
    est = fit.notes["estimates"]
    assert est == sorted(est, reverse=True)


def test_box_counts_exact():
    # the 8 corners of a 2x2x2 lattice of 1/4-cells
    pts = np.array([[i, j, k] for i in (0.1, 0.6) for j in (0.1, 0.6) for k in (0.1, 0.6)])
    np.testing.assert_array_equal(box_counts(pts, [0, 1, 2, 3]), [1, 8, 8, 8])


def test_box_dimension_segment():
    fit = box_dimension(segment_set(200_000, [0.1, 0.2, 0.3], [0.9, 0.7, 0.4], seed=1))
    assert fit.slope == pytest.approx(1.0, abs=0.15)


def test_box_dimension_cube():
    fit = box_dimension(sample_measure(uniform_measure(0), 1_000_000, seed=2))
    assert fit.slope == pytest.approx(3.0, abs=0.2)
    assert fit.slope <= 3.1
    # N_k <= n/10 stops the fit at level 5 (8**6 > 10**5)
    assert fit.notes["level_cap"] == 6 and max(fit.notes["levels"]) == 5


def test_box_dimension_errors():
    with pytest.raises(InvalidInputError):
        box_dimension(PointSet(np.random.default_rng(0).random((50, 3))))
    with pytest.raises(InvalidInputError):
        box_dimension(PointSet(np.full((2000, 3), 0.3)))


def test_wedge_set_box_dimension():
    mu = product_cantor(CantorSpec.with_dimension(0.9), 7)
    fit = box_dimension(wedge_sample(mu, 300_000, seed=5))
    assert 1.4 <= fit.slope <= 3.1
