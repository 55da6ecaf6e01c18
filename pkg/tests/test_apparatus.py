import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pointer_entropy import (DomainError, MeasurementSetup, NoiseTerms,
                             is_minimal_product, noise_product, noise_terms)

log_range = st.floats(min_value=-2.0, max_value=2.0)


def test_symmetric_unit_setup():
    noise = noise_terms(MeasurementSetup(1.0, 1.0, 1.0, 1.0, 1.0))
    expected = math.sqrt(17.0) / 4.0
    assert noise.delta_x == pytest.approx(expected, abs=1e-15)
    assert noise.delta_p == pytest.approx(expected, abs=1e-15)


def test_equality_condition_gives_half():
    noise = noise_terms(MeasurementSetup(1.0, 1.0, 1.0, 0.25, 0.25))
    assert noise.delta_x == pytest.approx(2**-0.5, abs=1e-15)
    assert noise_product(noise) == pytest.approx(0.5, abs=1e-12)


def test_invalid_setups():
    with pytest.raises(DomainError):
        MeasurementSetup(1.0, 1.0, 0.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        MeasurementSetup(0.0, 1.0, 1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        MeasurementSetup(1.0, 1.0, 1.0, -1.0, 1.0)


def test_negative_couplings_allowed():
    plus = noise_terms(MeasurementSetup(1.0, 2.0, 1.0, 1.0, 1.0))
    minus = noise_terms(MeasurementSetup(-1.0, -2.0, 1.0, 1.0, 1.0))
    assert plus == minus


def test_noise_product_values():
    assert noise_product(NoiseTerms(2**-0.5, 2**-0.5)) == pytest.approx(0.5, abs=1e-15)
    assert noise_product(NoiseTerms(1.0, 1.0)) == 1.0
    assert noise_product(NoiseTerms(2.0, 0.5)) == 1.0


def test_direct_construction_flags_subminimal():
    assert NoiseTerms(0.5, 0.5).is_subminimal
    assert not NoiseTerms(1.0, 0.5).is_subminimal
    with pytest.raises(DomainError):
        NoiseTerms(-1.0, 1.0)


def test_is_minimal_product():
    assert is_minimal_product(MeasurementSetup(1, 1, 1, 0.25, 0.25), 1e-9)
    assert not is_minimal_product(MeasurementSetup(1, 1, 1, 1.0, 1.0), 1e-9)
    assert is_minimal_product(MeasurementSetup(1, 1, 1, 1.0, 1.0), 1e300)
    with pytest.raises(DomainError):
        is_minimal_product(MeasurementSetup(1, 1, 1, 1, 1), 0.0)


def test_depends_only_on_coupling_time_products():
    a = noise_terms(MeasurementSetup(2.0, 5.0, 3.0, 0.7, 1.3))
    b = noise_terms(MeasurementSetup(6.0, 15.0, 1.0, 0.7, 1.3))
    assert a.delta_x == pytest.approx(b.delta_x, rel=1e-14)
    assert a.delta_p == pytest.approx(b.delta_p, rel=1e-14)


def test_product_floor_bulk():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        k1, k2, t, s1, s2 = 10.0 ** rng.uniform(-2.0, 2.0, size=5)
        setup = MeasurementSetup(k1, k2, t, s1, s2)
        assert noise_product(noise_terms(setup)) >= 0.5 - 1e-12


@given(log_range, log_range, log_range, log_range, log_range)
@settings(max_examples=200, deadline=None)
def test_product_floor_property(lk1, lk2, lt, ls1, ls2):
    setup = MeasurementSetup(10.0**lk1, 10.0**lk2, 10.0**lt, 10.0**ls1, 10.0**ls2)
    assert noise_product(noise_terms(setup)) >= 0.5 - 1e-12


@given(log_range, log_range)
@settings(max_examples=100, deadline=None)
def test_equality_manifold_property(lkt1, lkt2):
    # sigma1^2 sigma2^2 = (k1 k2 T^2)^2/16 forces the product onto the floor
    c1, c2 = 10.0**lkt1, 10.0**lkt2
    s1 = 0.7 * c1
    s2 = c1 * c2 / (16.0 * s1) * 4.0
    setup = MeasurementSetup(c1, c2, 1.0, s1, s2)
    assert is_minimal_product(setup, 1e-9)
    assert noise_product(noise_terms(setup)) == pytest.approx(0.5, abs=1e-12)
