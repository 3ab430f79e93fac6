"""Jet arithmetic against hand values and finite differences."""

import numpy as np
import pytest

from vortexknots.jets import (
    ComplexJet,
    Event,
    constant_jet,
    coordinate_jets,
    jet_add,
    jet_div,
    jet_mul,
    jet_pow_int,
)

from fdtools import fd_partials


def test_square_of_coordinate():
    # x = 3: value 9, dx = 6
    _, x, _, _ = coordinate_jets(Event(0.0, 3.0, 0.0, 0.0))
    sq = jet_mul(x, x)
    assert sq.value == 9.0
    assert sq.d == (0.0, 6.0, 0.0, 0.0)


def test_constant_times_coordinate():
    t, _, _, _ = coordinate_jets(Event(2.0, 0.0, 0.0, 0.0))
    prod = jet_mul(constant_jet(5.0), t)
    assert prod.value == 10.0
    assert prod.d == (5.0, 0.0, 0.0, 0.0)


def test_constant_reciprocal():
    c = constant_jet(1 + 2j)
    inv = jet_div(constant_jet(1.0), c)
    assert inv.value == pytest.approx((1 - 2j) / 5)
    assert all(g == 0 for g in inv.d)


def test_division_by_zero_value_is_domain_error():
    with pytest.raises(ZeroDivisionError):
        jet_div(constant_jet(1.0), constant_jet(0.0))
    arr = ComplexJet(np.array([1.0, 0.0, 2.0]))
    with pytest.raises(ZeroDivisionError, match="index 1"):
        jet_div(constant_jet(1.0), arr)


def test_pow_int_rules():
    _, x, _, _ = coordinate_jets(Event(0.0, 2.0, 0.0, 0.0))
    assert jet_pow_int(x, 0).value == 1.0
    p5 = jet_pow_int(x, 5)
    assert p5.value == 32.0
    assert p5.d[1] == pytest.approx(5 * 2.0**4)
    with pytest.raises(ValueError):
        jet_pow_int(x, -1)


def test_coordinate_jets_unit_partials():
    jets = coordinate_jets(Event(1.0, 2.0, 3.0, 4.0))
    values = [1.0, 2.0, 3.0, 4.0]
    for i, (jet, val) in enumerate(zip(jets, values)):
        assert jet.value == val
        assert jet.d == tuple(1.0 if k == i else 0.0 for k in range(4))


def test_r_squared_composite():
    e = Event(0.0, 1.0, 0.0, 0.0)
    _, x, y, z = coordinate_jets(e)
    r2 = x * x + y * y + z * z
    assert r2.value == 1.0
    assert r2.d == (0.0, 2.0, 0.0, 0.0)


def test_event_requires_finite_coordinates():
    with pytest.raises(ValueError):
        Event(np.inf, 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        Event(0.0, np.nan, 0.0, 0.0)


def _rational_expression(t, x, y, z):
    """A deep composite resembling the field expressions (denominator >= 1)."""
    r2 = x * x + y * y + z * z
    den = r2 - (t - 1j) ** 2
    a = (r2 - t * t - 1 + 2j * z) / den
    b = 2 * (x - 1j * y) / den
    return (a * a * a - 2.0 * b * b) / den + a * b


def test_partials_match_finite_differences():
    # 1000 random events in [-5, 5]^4, relative tolerance 1e-6 at step 1e-5
    rng = np.random.default_rng(42)
    ev = rng.uniform(-5.0, 5.0, (1000, 4))

    def jet_version(e):
        t, x, y, z = coordinate_jets(e)
        return _rational_expression(t, x, y, z)

    jets = jet_version(Event(ev[:, 0], ev[:, 1], ev[:, 2], ev[:, 3]))
    fd = fd_partials(_rational_expression, ev[:, 0], ev[:, 1], ev[:, 2], ev[:, 3])
    scale = np.abs(np.asarray(jets.d)).max(axis=0) + 1.0
    for jet_d, fd_d in zip(jets.d, fd):
        np.testing.assert_allclose(jet_d / scale, fd_d / scale, atol=1e-6)


def test_value_arithmetic_commutes_and_associates():
    rng = np.random.default_rng(3)
    a = ComplexJet(complex(*rng.normal(size=2)), tuple(rng.normal(size=4)))
    b = ComplexJet(complex(*rng.normal(size=2)), tuple(rng.normal(size=4)))
    c = ComplexJet(complex(*rng.normal(size=2)), tuple(rng.normal(size=4)))
    ab = jet_mul(a, b)
    ba = jet_mul(b, a)
    assert ab.value == pytest.approx(ba.value)
    lhs = jet_add(jet_add(a, b), c)
    rhs = jet_add(a, jet_add(b, c))
    assert lhs.value == pytest.approx(rhs.value)
    np.testing.assert_allclose(np.asarray(lhs.d, dtype=complex),
                               np.asarray(rhs.d, dtype=complex), rtol=1e-12)
