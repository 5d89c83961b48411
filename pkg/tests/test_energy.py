import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial.distance import pdist

from volset.energy import discrete_energy, energy_unordered, is_adaptable, thicken
from volset.errors import InvalidInputError, ResourceError, SingularInputError
from volset.setgen import PointSet, homogeneous_set


def energy_oracle(pts, s):
    # unordered pair distances from scipy, doubled for ordered pairs
    return 2.0 * math.fsum(pdist(pts) ** (-s)) / len(pts) ** 2


@pytest.mark.parametrize("s", [0.3, 1.0, 2.6, 3.0, 5.0])
def test_two_points_unit_distance(s):
    assert discrete_energy(np.array([[0.0, 0, 0], [1.0, 0, 0]]), s) == 0.5


def test_two_points_half_distance():
    assert discrete_energy(np.array([[0.0, 0], [0.5, 0]]), 1) == 1.0


def test_four_points_on_segment():
    pts = np.array([[t, 0.0] for t in (0, 1 / 3, 2 / 3, 1)])
    hand = (1 / 16) * 2 * (3 * 3**0.5 + 2 * 1.5**0.5 + 1)
    assert discrete_energy(pts, 0.5) == pytest.approx(hand, rel=1e-14)
    assert hand == pytest.approx(1.0807, abs=1e-4)


def test_matches_pdist_oracle():
    pts = np.random.default_rng(1).random((700, 3))
    for s in (0.5, 1.7, 2.6):
        assert discrete_energy(pts, s) == pytest.approx(energy_oracle(pts, s), rel=1e-12)


def test_ordered_equals_twice_unordered():
    pts = np.random.default_rng(2).random((300, 3))
    assert abs(discrete_energy(pts, 2.6) - energy_unordered(pts, 2.6)) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.floats(0.2, 3.0), st.integers(0, 2**32 - 1))
def test_scaling_law(n, s, seed):
    pts = np.random.default_rng(seed).random((n, 3))
    ratio = discrete_energy(pts / 2, s) / discrete_energy(pts, s)
    assert ratio == pytest.approx(2**s, rel=1e-12)


def test_duplicates_rejected():
    with pytest.raises(SingularInputError):
        discrete_energy(np.array([[0.1, 0.2], [0.1, 0.2], [0.5, 0.5]]), 1.0)
    with pytest.raises(InvalidInputError):
        discrete_energy(np.eye(2), 0)


def test_adaptability_examples():
    assert is_adaptable(np.array([[0.0, 0, 0], [1.0, 0, 0]]), 13 / 5, C=1).adaptable
    pts = np.zeros((100, 3))
    pts[:99, 0] = np.arange(99)
    pts[99] = [1e-9, 0, 0]
    rep = is_adaptable(pts, 13 / 5, C=1e6)
    assert rep.value >= 1e-4 * 1e9**2.6
    assert not rep.adaptable


def test_homogeneous_512_energy_value():
    P = homogeneous_set(512, 0.3, seed=71)
    value = discrete_energy(P, 13 / 5)
    assert value == pytest.approx(energy_oracle(P.points, 13 / 5), rel=1e-12)
    # frozen regression value; the unjittered lattice gives about 9.67
    assert value == pytest.approx(10.2465, abs=1e-3)


def test_homogeneous_512_adaptable_with_C10():
    # Left red on purpose: the frozen energy above is about 10.25 > 10.
    rep = is_adaptable(homogeneous_set(512, 0.3, seed=71), 13 / 5, C=10)
    assert rep.adaptable, f"energy {rep.value:.4f} exceeds C = 10"


def test_thicken_single_point():
    mu = thicken(PointSet(np.array([[0.3, 0.6, 0.5]])), 2.0)
    assert mu.n_cells == 1 and mu.weights[0] == 1.0
    np.testing.assert_array_equal(mu.side, 1.0)


def test_thicken_mass_and_support():
    P = homogeneous_set(64, 0.2, seed=3)
    mu = thicken(P, 2.6)
    assert mu.total_mass() == pytest.approx(1.0, abs=1e-6)
    radius = 64 ** (-1 / 2.6)
    dist = np.min(np.linalg.norm(mu.centers()[:, None] - P.points[None], axis=2), axis=1)
    assert np.all(dist <= radius + math.sqrt(3) * mu.side[0])


def ball_fractions(p, radius, k, grid):
    # fraction of each cell's 4x4x4 probe points inside the ball, renormalized
    side = 2.0**-k
    probe = (np.arange(4) + 0.5) / 4
    out = {}
    for idx in np.ndindex(*(grid,) * 3):
        pts = (np.array(idx) + np.stack(np.meshgrid(probe, probe, probe), -1).reshape(-1, 3)) * side
        frac = np.mean(np.linalg.norm(pts - p, axis=1) <= radius)
        if frac > 0:
            out[idx] = frac
    total = sum(out.values())
    return {k_: v / total for k_, v in out.items()}


def test_thicken_overlapping_balls_add():
    pts = np.array([[0.40, 0.45, 0.5], [0.43, 0.45, 0.5]])
    s = 0.5  # radius 2**-2 = 0.25, level 2
    mu = thicken(PointSet(pts), s)
    assert mu.level == 2 and mu.meta["radius"] == pytest.approx(0.25)
    expect = {}
    for p in pts:
        for idx, w in ball_fractions(p, 0.25, 2, 4).items():
            expect[idx] = expect.get(idx, 0.0) + w / 2
    got = dict(zip(map(tuple, mu.index.tolist()), mu.weights))
    assert got.keys() == expect.keys()
    for idx in got:
        assert got[idx] == pytest.approx(expect[idx], rel=1e-12)
    assert mu.total_mass() == pytest.approx(1.0, abs=1e-6)


def test_thicken_budget():
    with pytest.raises(ResourceError):
        thicken(homogeneous_set(4096), 1.0, budget=10**6)
