import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from volset.algebra import as_tuple, cofactor_det3, decomposition_value, det, wedge_star
from volset.errors import InvalidInputError, SingularInputError

finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def tuples(d, m):
    return arrays(np.float64, (m, d), elements=finite)


def wedge_oracle(x):
    # component i = det(x^1, ..., x^(d-1), e_i), straight from the defining property
    d = x.shape[-1]
    return np.array([np.linalg.det(np.vstack([x, np.eye(d)[i]])) for i in range(d)])


def test_det_examples():
    assert det(np.eye(3)) == 1.0
    v, w = [0.3, -1.2, 2.0], [5.0, 1.0, 0.5]
    assert det([v, v, w]) == pytest.approx(0.0, abs=1e-12)
    # middle column is the mean of the outer two
    assert det([[1, 2, 3], [1, 1, 1], [4, 5, 6]]) == pytest.approx(0.0, abs=1e-12)


def test_wedge_examples():
    np.testing.assert_array_equal(wedge_star([[1, 0, 0], [0, 1, 0]]), [0, 0, 1])
    v = np.array([0.2, 0.7, -0.4])
    np.testing.assert_array_equal(wedge_star([v, 2 * v]), 0.0)
    np.testing.assert_allclose(wedge_star([[1, 2, 3], [4, 5, 6]]), [-3, 6, -3])


def test_dimension_mismatch():
    with pytest.raises(InvalidInputError):
        det(np.ones((2, 3)))
    with pytest.raises(InvalidInputError):
        wedge_star(np.ones((3, 3)))
    with pytest.raises(InvalidInputError):
        as_tuple(np.ones(3))
    with pytest.raises(InvalidInputError):
        cofactor_det3([1, 2], [1, 2, 3], [1, 2, 3])


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_det_matches_numpy(d):
    x = np.random.default_rng(d).standard_normal((500, d, d))
    np.testing.assert_allclose(det(x), np.linalg.det(x), rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_wedge_matches_defining_property(d):
    x = np.random.default_rng(10 + d).standard_normal((20, d - 1, d))
    for t in x:
        np.testing.assert_allclose(wedge_star(t), wedge_oracle(t), atol=1e-10)


@settings(max_examples=200, deadline=None)
@given(tuples(3, 3))
def test_det_equals_wedge_dot_last(t):
    scale = 1 + np.abs(t).max() ** 3
    assert abs(det(t) - wedge_star(t[:2]) @ t[2]) <= 1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(tuples(4, 3), st.permutations(range(3)))
def test_wedge_alternating(t, perm):
    sign = np.linalg.det(np.eye(3)[list(perm)])
    scale = 1 + np.abs(t).max() ** 3
    np.testing.assert_allclose(wedge_star(t[list(perm)]), sign * wedge_star(t),
                               atol=1e-12 * scale)


@settings(max_examples=100, deadline=None)
@given(tuples(3, 3))
def test_det_row_swap_flips_sign(t):
    scale = 1 + np.abs(t).max() ** 3
    assert det(t[[1, 0, 2]]) == pytest.approx(-det(t), abs=1e-12 * scale)


def test_cofactor_examples():
    assert cofactor_det3([1, 0, 0], [0, 1, 0], [0, 0, 1]) == 1.0
    assert cofactor_det3([1, 2, 3], [1, 1, 1], [4, 5, 6]) == 0.0
    x = [0.3, 0.9, -1.1]
    assert cofactor_det3(x, [2.0, 0.5, 7.0], x) == 0.0


def test_cofactor_matches_det_on_batch():
    a = np.random.default_rng(5).standard_normal((10_000, 3, 3))
    got = cofactor_det3(a[:, 0], a[:, 1], a[:, 2])
    ref = np.linalg.det(a)
    assert np.max(np.abs(got - ref) / np.maximum(1, np.abs(ref))) < 1e-12


def test_cofactor_sign_matters():
    # swapping the sign of x1 z2 in the last cofactor breaks the identity
    x, y, z = np.array([1.0, 2, 3]), np.array([0.0, 0, 1]), np.array([4.0, 5, 6])
    wrong = y[2] * (-x[0] * z[1] - x[1] * z[0])
    assert wrong != pytest.approx(det([x, y, z]))
    assert cofactor_det3(x, y, z) == pytest.approx(det([x, y, z]))


def test_decomposition_examples():
    # det(x, (y1, y2, 1), z) = 3 y1 - 6 y2 + 3 for these x, z
    x, z = [1, 2, 3], [4, 5, 6]
    for y1, y2 in itertools.product([-1.0, 0.0, 1.0, 2.5], repeat=2):
        assert decomposition_value(x, [y1, y2], z) == pytest.approx(3 * y1 - 6 * y2 + 3,
                                                                    abs=1e-12)
    assert decomposition_value([0, 0, 1], [0, 0], [1, 0, 0]) == 0.0
    x = [0.4, -0.2, 0.8]
    assert decomposition_value(x, [0.1, 0.9], x) == 0.0


def test_decomposition_singular():
    with pytest.raises(SingularInputError):
        decomposition_value([1, 2, 0], [0, 0], [1, 1, 1])


def test_decomposition_batch_identity():
    rng = np.random.default_rng(8)
    x = rng.uniform(-1, 1, (20_000, 3))
    x = x[np.abs(x[:, 2]) > 1e-3]
    n = len(x)
    y12, z = rng.uniform(-1, 1, (n, 2)), rng.uniform(-1, 1, (n, 3))
    y = np.column_stack([y12, np.ones(n)])
    ref = np.linalg.det(np.stack([x, y, z], axis=1))
    assert np.max(np.abs(decomposition_value(x, y12, z) - ref)) < 1e-12
