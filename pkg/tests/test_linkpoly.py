"""Link polynomials: construction, presets, evaluation, calculus, parsing."""

import math

import numpy as np
import pytest

from vortexknots.linkpoly import (
    BivariatePolynomial,
    NewtonPair,
    PolynomialError,
    antiderivative_v,
    d_dv,
    d_dw,
    eval_poly,
    parse_poly_file,
    preset,
    torus_polynomial,
)

from fdtools import naive_poly_eval

SQRT2 = math.sqrt(2.0)


def test_torus_polynomial_2_3():
    h = torus_polynomial(NewtonPair(2, 3))
    assert h.terms == {(3, 0): pytest.approx(2 * SQRT2), (0, 2): pytest.approx(-2.0)}


def test_torus_polynomial_1_1_unknot():
    h = torus_polynomial(NewtonPair(1, 1))
    assert h.terms == {(1, 0): pytest.approx(SQRT2), (0, 1): pytest.approx(-SQRT2)}


def test_non_coprime_pair_rejected():
    with pytest.raises(PolynomialError, match="coprime"):
        NewtonPair(2, 2)


def test_presets():
    h1, info = preset("hopf-link")
    assert h1.terms == {(2, 0): 1.0, (0, 2): 1.0}
    assert "Hopf" in info.description

    h2, _ = preset("cable-2-3-3-2")
    assert h2.terms == {
        (0, 6): 1.0, (3, 4): -3.0, (6, 2): 3.0, (8, 2): -6.0,
        (9, 0): -1.0, (11, 0): -2.0, (13, 0): -1.0,
    }
    assert len(h2) == 7

    hc, _ = preset("unknot-circle")
    assert hc.terms == {(1, 0): 1.0}

    trefoil, _ = preset("trefoil")
    assert trefoil == torus_polynomial(NewtonPair(2, 3))

    t34, _ = preset("torus-3-4")
    assert t34 == torus_polynomial(NewtonPair(3, 4))

    with pytest.raises(PolynomialError, match="available"):
        preset("granny-knot")
    with pytest.raises(PolynomialError, match="coprime"):
        preset("torus-2-4")


def test_eval_simple_values():
    h1, _ = preset("hopf-link")
    assert eval_poly(h1, 1j, 1.0) == pytest.approx(0.0)
    h2, _ = preset("cable-2-3-3-2")
    assert eval_poly(h2, 0.0, 1.0) == pytest.approx(1.0)


def test_eval_matches_naive_oracle():
    rng = np.random.default_rng(11)
    for name in ("hopf-link", "cable-2-3-3-2", "trefoil", "torus-4-5"):
        h, _ = preset(name)
        for _ in range(50):
            v = complex(*rng.uniform(-1, 1, 2))
            w = complex(*rng.uniform(-1, 1, 2))
            got = eval_poly(h, v, w)
            want = naive_poly_eval(h.terms, v, w)
            assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


def test_derivatives():
    h1, _ = preset("hopf-link")
    assert d_dv(h1).terms == {(1, 0): 2.0}
    assert d_dw(h1).terms == {(0, 1): 2.0}
    h2, _ = preset("cable-2-3-3-2")
    assert d_dv(h2).terms[(8, 0)] == -9.0  # from -v^9


def test_antiderivative():
    h1, _ = preset("hopf-link")
    f = antiderivative_v(h1)
    assert f.terms == {(3, 0): pytest.approx(1 / 3), (1, 2): 1.0}
    hw = BivariatePolynomial({(0, 1): 1.0})
    assert antiderivative_v(hw).terms == {(1, 1): 1.0}


def test_antiderivative_roundtrip_exact():
    # d/dv of the v-antiderivative returns the original coefficients exactly
    for name in ("hopf-link", "cable-2-3-3-2", "trefoil", "unknot-circle",
                  "unknot-line", "torus-3-4", "torus-4-5"):
        h, _ = preset(name)
        assert d_dv(antiderivative_v(h)).terms == h.terms


def test_torus_zero_set_parametrization():
    # The curve v = e^{i p theta}/sqrt(2), w = e^{i q theta}/sqrt(2) lies on
    # the unit 3-sphere and annihilates the torus polynomial. (This is the
    # continuous solution branch w proportional to v^{q/p}; its prefactor is
    # sqrt(2)^{(q-p)/p}, which reduces to the Clifford-torus form.)
    theta = np.linspace(0.0, 2.0 * np.pi, 1000, endpoint=False)
    for p, q in [(2, 3), (3, 4), (1, 2), (4, 5)]:
        h = torus_polynomial(NewtonPair(p, q))
        v = np.exp(1j * p * theta) / SQRT2
        w = SQRT2 ** ((q - p) / p) * np.exp(1j * q * theta) / SQRT2 ** (q / p)
        np.testing.assert_allclose(np.abs(v) ** 2 + np.abs(w) ** 2, 1.0, atol=1e-14)
        vals = eval_poly(h, v, w)
        assert np.abs(vals).max() < 1e-10


def test_parse_poly_file():
    h = parse_poly_file("2 0 1 0\n0 2 1 0\n")
    assert h.terms == {(2, 0): 1.0, (0, 2): 1.0}

    # comments and duplicate merging
    h = parse_poly_file("# hopf\n2 0 0.5 0\n2 0 0.5 0\n0 2 1 0\n")
    assert h.terms == {(2, 0): 1.0, (0, 2): 1.0}


def test_parse_rejects_constant_term():
    with pytest.raises(PolynomialError, match="constant term"):
        parse_poly_file("0 0 1 0\n")
    # explicit flag allows it
    h = parse_poly_file("0 0 1 0\n", allow_constant=True)
    assert h.terms == {(0, 0): 1.0}


def test_parse_rejects_zero_polynomial():
    with pytest.raises(PolynomialError, match="zero polynomial"):
        parse_poly_file("2 0 1 0\n2 0 -1 0\n")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(PolynomialError, match="line 2"):
        parse_poly_file("2 0 1 0\n2 0 1\n")
    with pytest.raises(PolynomialError, match="line 1"):
        parse_poly_file("a 0 1 0\n")
