import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expblaschke.blaschke import BlaschkeProduct
from expblaschke.logmean import (
    ContourProximityError,
    annulus_deficit,
    contour_distance,
    dyadic_increments,
    t_exact,
    t_quadrature,
)
from expblaschke.zeroseq import ZeroSequence, generate_geometric, generate_power


def half():
    return BlaschkeProduct(ZeroSequence([0.5], [0.0]))


def geo20():
    return BlaschkeProduct(generate_geometric(1.0, 0.5, 20, seed=20))


def test_t_exact_single_zero():
    assert t_exact(half(), 0.25) == pytest.approx(0.5, abs=1e-15)
    assert t_exact(half(), 0.75) == 1.0


def test_t_exact_on_a_zero_is_continuous():
    B = half()
    on = t_exact(B, 0.5)
    assert on == 1.0
    assert t_exact(B, 0.5 - 1e-12) == pytest.approx(on, abs=1e-10)


def test_t_exact_argument_checks():
    with pytest.raises(ValueError):
        t_exact(half(), 1.0)
    with pytest.raises(ValueError):
        t_exact(half(), 0.0)
    with pytest.raises(TypeError):
        t_exact(half(), 0.5, gap=0.5)


def test_t_quadrature_single_zero():
    assert t_quadrature(half(), 0.25) == pytest.approx(0.5, abs=1e-8)


def test_t_quadrature_empty():
    B = BlaschkeProduct.empty()
    for r in (0.1, 0.5, 0.999):
        assert t_quadrature(B, r) == 0.0


def test_contour_collision_rejected():
    B = geo20()
    # the tenth zero sits exactly on |z| = 1 - 2**-10
    assert contour_distance(B, gap=2.0**-10) == 0.0
    with pytest.raises(ContourProximityError):
        t_quadrature(B, gap=2.0**-10)


def test_geometric_quadrature_agrees():
    B = geo20()
    g = 3 * 2.0**-11
    assert t_quadrature(B, gap=g) == pytest.approx(t_exact(B, gap=g), abs=1e-6)


def test_deep_contour_agrees():
    B = geo20()
    for g in (3 * 2.0**-30, 2.0**-18 * 1.5, 0.3):
        assert t_quadrature(B, gap=g) == pytest.approx(t_exact(B, gap=g), abs=1e-6)


def test_saturation():
    B = BlaschkeProduct(ZeroSequence([0.5, 0.2, 0.1, 2.0**-5], [0.0, 1.0, 2.0, 3.0]))
    curve = dyadic_increments(B, 20)
    assert np.all(curve.increments[curve.levels >= 6] == 0.0)
    assert curve.t_exact[-1] == 4.0


def test_geometric_increments_bounded():
    B = BlaschkeProduct(generate_geometric(1.0, 0.5, 40, seed=0))
    curve = dyadic_increments(B, 35)
    assert curve.levels.tolist() == list(range(1, 36))
    assert curve.M_observed <= 4
    # regression constant from the first run; increments settle near 1
    assert curve.M_observed == pytest.approx(1.11614407594881, rel=1e-12)
    assert abs(curve.increments[-10:] - 1).max() < 0.04


def test_power_increments_grow():
    B = BlaschkeProduct(generate_power(2.0, 2000, seed=0))
    curve = dyadic_increments(B, 18)
    assert curve.increment(16) >= 2 * curve.increment(10)


def test_increment_oracle_direct():
    B = BlaschkeProduct(generate_power(1.5, 300, seed=1))
    curve = dyadic_increments(B, 12)
    eps = B.zeros.eps
    for N in (3, 7, 12):
        # log-mean from the raw definition, written independently
        def T(g):
            inside = eps >= g
            return inside.sum() + np.sum(np.log(1 - eps[~inside])) / np.log(1 - g)
        expect = abs(T(2.0 ** -(N + 1)) - T(2.0**-N))
        assert curve.increment(N) == pytest.approx(expect, rel=1e-9)


def test_dyadic_limits():
    with pytest.raises(ValueError):
        dyadic_increments(half(), 52)
    with pytest.raises(ValueError):
        dyadic_increments(half(), 0)


def test_curve_csv():
    curve = dyadic_increments(geo20(), 12, with_quadrature=True)
    rows = curve.curve_csv().splitlines()
    assert rows[0] == "r,t_exact,t_quad"
    assert len(rows) == 14
    # r = 1 - 2**-10 collides with a zero, so its quadrature cell is empty
    assert rows[10].endswith(",")
    assert curve.increments_csv().splitlines()[0] == "N,increment"
    finite = np.isfinite(curve.t_quad)
    assert np.allclose(curve.t_quad[finite], curve.t_exact[finite], atol=1e-6, rtol=0)


def test_annulus_deficit_nonnegative():
    B = BlaschkeProduct(generate_power(2.0, 500, seed=3))
    for N in range(1, 18):
        assert annulus_deficit(B, gap=2.0**-N) >= 0


def test_t_exact_near_one_counts_zeros():
    B = geo20()
    assert t_exact(B, 1 - 1e-12) == pytest.approx(20.0, abs=1e-6)


@st.composite
def products(draw):
    n = draw(st.integers(1, 20))
    rng = np.random.default_rng(draw(st.integers(0, 2**31)))
    eps = np.sort(10 ** rng.uniform(-8, -0.05, n))[::-1]
    return BlaschkeProduct(ZeroSequence(eps, rng.uniform(0, 2 * np.pi, n)))


@settings(max_examples=60, deadline=None)
@given(products(), st.floats(-9, -0.05))
def test_property_jensen_consistency(B, log_gap):
    g = 10.0**log_gap
    if contour_distance(B, gap=g) < 1e-9:
        with pytest.raises(ContourProximityError):
            t_quadrature(B, gap=g)
        return
    assert abs(t_exact(B, gap=g) - t_quadrature(B, gap=g)) <= 1e-6


@settings(max_examples=60)
@given(products())
def test_property_t_exact_monotone(B):
    gaps = 2.0 ** -np.linspace(0.1, 40, 300)
    t = np.array([t_exact(B, gap=g) for g in gaps])
    assert np.all(t >= 0)
    assert np.all(np.diff(t) >= -1e-12)
    assert t[-1] <= len(B)


@settings(max_examples=60)
@given(products(), st.floats(-12, -0.1))
def test_property_annulus_deficit(B, log_gap):
    assert annulus_deficit(B, gap=10.0**log_gap) >= -1e-12
    assert math.isfinite(annulus_deficit(B, gap=10.0**log_gap))
