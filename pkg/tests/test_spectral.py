import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from volset.errors import InvalidInputError
from volset.setgen import (
    CantorSpec,
    CellMeasure,
    annulus_filter,
    cantor_iterate,
    point_mass,
    product_cantor,
    sphere_measure,
    uniform_measure,
)
from volset.spectral import decay_profile, mu_hat, mu_hat_direct, salem_gap, sphere_transform

freq = st.lists(st.floats(-40, 40, allow_nan=False), min_size=3, max_size=3)


@pytest.fixture(scope="module")
def blob():
    # a non-product measure so the blocked kernel is exercised
    return annulus_filter(uniform_measure(4), 0.3, 0.6)


def test_zero_frequency_is_total_mass(blob):
    for mu in (blob, sphere_measure(4), product_cantor(CantorSpec.middle_thirds(), 3)):
        assert mu_hat(mu, [0.0, 0.0, 0.0]) == pytest.approx(1.0, abs=1e-12)


def test_point_mass_unit_modulus():
    mu = point_mass([0.0, 0.0, 0.0])
    xi = np.random.default_rng(0).normal(size=(20, 3)) * 50
    np.testing.assert_allclose(np.abs(mu_hat(mu, xi)), 1.0)


def test_two_cells_at_half():
    mu = CellMeasure(0, [0.0] * 3, [[0, 0, 0], [1, 0, 0]], [0.5, 0.5],
                     (np.array([-0.5, 0.5]), np.array([0.0]), np.array([0.0])))
    assert mu_hat(mu, [1.0, 0.0, 0.0]) == pytest.approx(-1.0, abs=1e-15)


@settings(max_examples=40, deadline=None)
@given(freq)
def test_kernel_matches_direct_sum(xi):
    mu = annulus_filter(uniform_measure(3), 0.2, 0.7)
    assert mu_hat(mu, xi) == pytest.approx(mu_hat_direct(mu, xi), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(freq)
def test_modulus_bounded_and_conjugate_symmetric(xi):
    mu = product_cantor(CantorSpec.with_dimension(0.7), 3)
    a, b = mu_hat(mu, xi), mu_hat(mu, -np.asarray(xi))
    assert abs(a) <= 1 + 1e-12
    assert b == pytest.approx(np.conj(a), abs=1e-12)


def test_separable_path_matches_product_oracle():
    spec = CantorSpec.with_dimension(0.8)
    mu = product_cantor(spec, 4)
    line = cantor_iterate(spec, 4)
    c = line.centers()[:, 0]
    xi = np.random.default_rng(3).normal(size=(64, 3)) * 20
    oracle = np.prod([np.exp(-2j * np.pi * np.outer(xi[:, a], c)) @ line.weights
                      for a in range(3)], axis=0)
    np.testing.assert_allclose(mu_hat(mu, xi), oracle, atol=1e-13)
    np.testing.assert_allclose(mu_hat(mu, xi), mu_hat_direct(mu, xi), atol=1e-13)


def test_sphere_closed_form_at_low_frequency():
    mu = sphere_measure(7)
    xi = np.random.default_rng(4).normal(size=(200, 3))
    xi *= (np.random.default_rng(5).uniform(1, 8, 200) / np.linalg.norm(xi, axis=1))[:, None]
    np.testing.assert_allclose(mu_hat(mu, xi), sphere_transform(xi), atol=5e-3)


def test_sphere_transform_values():
    assert sphere_transform([0.0, 0.0, 0.0])[0] == 1.0
    # radial part sin(pi |xi|)/(pi |xi|) vanishes at |xi| = 1
    assert abs(sphere_transform([1.0, 0.0, 0.0], center=(0, 0, 0))[0]) < 1e-15


def test_aliasing_guard():
    with pytest.raises(InvalidInputError):
        decay_profile(uniform_measure(4), 4, 16)
    with pytest.raises(InvalidInputError):
        decay_profile(uniform_measure(6), 3, 16)  # too few fitted annuli


def test_point_mass_profile_flat():
    mu = point_mass([0.3, 0.2, 0.1])
    prof = decay_profile(mu, 6, 64)
    assert prof.fit.slope == pytest.approx(0.0, abs=1e-12)
    assert salem_gap(mu, 1.5, prof) == pytest.approx(-1.5)


def test_lebesgue_decays():
    prof = decay_profile(uniform_measure(8), 7, 512, seed=1)
    assert prof.fit.slope <= -1.0
    assert prof.max_modulus == sorted(prof.max_modulus, reverse=True)


def test_sphere_salem_gap_small():
    mu = sphere_measure(7)
    prof = decay_profile(mu, 6, 1024, seed=1)
    assert salem_gap(mu, 2.0, prof) == pytest.approx(0.0, abs=0.3)


def test_middle_thirds_no_decay_on_triadic_frequencies():
    spec = CantorSpec.middle_thirds()
    mu = product_cantor(spec, 6)
    prof = decay_profile(mu, 5, base=3.0, directions=[[1.0, 0.0, 0.0]])
    # |mu_hat(3^j e1)| stays bounded away from zero: no decay at all
    assert min(prof.max_modulus) > 0.3
    assert salem_gap(mu, 3 * spec.dimension, prof) < -1.5


def test_profile_deterministic():
    mu = sphere_measure(5)
    a = decay_profile(mu, 4, 128, seed=3, fit_from=1)
    b = decay_profile(mu, 4, 128, seed=3, fit_from=1)
    assert a.max_modulus == b.max_modulus


def test_salem_gap_rejects_foreign_profile():
    prof = decay_profile(uniform_measure(6), 5, 64)
    with pytest.raises(InvalidInputError):
        salem_gap(uniform_measure(7), 3, prof)
