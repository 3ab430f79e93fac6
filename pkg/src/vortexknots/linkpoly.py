"""Bivariate complex polynomials whose zero sets define algebraic links.

A link polynomial h(v, w) must have a vanishing constant term; intersecting
its zero set with a small 3-sphere produces a disjoint union of knotted
circles. The module ships verified presets (unknots, torus knots, the Hopf
link, one cable knot) and a plain text input format for user polynomials.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .jets import ComplexJet

__all__ = [
    "NewtonPair",
    "BivariatePolynomial",
    "PolynomialError",
    "PresetInfo",
    "torus_polynomial",
    "preset",
    "preset_names",
    "eval_poly",
    "d_dv",
    "d_dw",
    "antiderivative_v",
    "parse_poly_file",
]


class PolynomialError(ValueError):
    """Invalid polynomial construction or parse failure."""


@dataclass(frozen=True)
class NewtonPair:
    """A coprime pair of positive integers (p, q) defining a torus knot."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 1 or self.q < 1:
            raise PolynomialError(f"Newton pair must be positive, got ({self.p}, {self.q})")
        if math.gcd(self.p, self.q) != 1:
            raise PolynomialError(
                f"Newton pair ({self.p}, {self.q}) is not coprime (gcd = {math.gcd(self.p, self.q)})")


class BivariatePolynomial:
    """Sparse polynomial in (v, w): a map from exponent pairs to coefficients.

    Terms with zero coefficient are never stored. Evaluation accepts plain
    complex numbers, numpy arrays, or ComplexJet operands.
    """

    def __init__(self, terms):
        cleaned = {}
        for (j, k), c in dict(terms).items():
            j, k = int(j), int(k)
            if j < 0 or k < 0:
                raise PolynomialError(f"negative exponent in term v^{j} w^{k}")
            c = complex(c)
            if c != 0:
                cleaned[(j, k)] = c
        self.terms = cleaned

    def __eq__(self, other):
        return isinstance(other, BivariatePolynomial) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    @property
    def is_zero(self):
        return not self.terms

    @property
    def has_constant_term(self):
        return (0, 0) in self.terms

    def require_link_polynomial(self):
        """Raise unless this is a valid link polynomial (nonzero, h(0,0) = 0)."""
        if self.is_zero:
            raise PolynomialError("zero polynomial cannot define a link")
        if self.has_constant_term:
            raise PolynomialError(
                "link polynomial must have vanishing constant term, "
                f"found constant {self.terms[(0, 0)]}")

    def eval(self, v, w):
        """Evaluate by nested Horner accumulation over sorted terms.

        Outer recursion runs over descending powers of v, inner over
        descending powers of w; the summation order is fixed, so repeated
        evaluation is bit-reproducible.
        """
        if self.is_zero:
            return ComplexJet(0j) if isinstance(v, ComplexJet) else 0j
        by_j = {}
        for (j, k), c in self.terms.items():
            by_j.setdefault(j, {})[k] = c
        acc = None
        prev_j = None
        for j in sorted(by_j, reverse=True):
            inner = _horner_w(by_j[j], w)
            if acc is None:
                acc = inner
            else:
                acc = acc * _ipow(v, prev_j - j) + inner
            prev_j = j
        if prev_j > 0:
            acc = acc * _ipow(v, prev_j)
        return acc

    def d_dv(self):
        return BivariatePolynomial(
            {(j - 1, k): c * j for (j, k), c in self.terms.items() if j > 0})

    def d_dw(self):
        return BivariatePolynomial(
            {(j, k - 1): c * k for (j, k), c in self.terms.items() if k > 0})

    def antiderivative_v(self):
        """Formal v-antiderivative with integration constant zero."""
        return BivariatePolynomial(
            {(j + 1, k): c / (j + 1) for (j, k), c in self.terms.items()})

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for (j, k) in sorted(self.terms, key=lambda jk: (-(jk[0] + jk[1]), -jk[0])):
            c = self.terms[(j, k)]
            mono = " ".join(s for s in (f"v^{j}" if j else "", f"w^{k}" if k else "") if s)
            coeff = _fmt_coeff(c)
            if mono and coeff == "1":
                parts.append(mono)
            elif mono and coeff == "-1":
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}{' ' + mono if mono else ''}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out


def _ipow(x, n):
    """x**n for jets or numbers with positive integer n."""
    if isinstance(x, ComplexJet):
        return x ** n
    return x ** int(n)


def _horner_w(coeffs_by_k, w):
    acc = None
    prev_k = None
    for k in sorted(coeffs_by_k, reverse=True):
        c = coeffs_by_k[k]
        if acc is None:
            acc = ComplexJet(c) if isinstance(w, ComplexJet) else c
        else:
            acc = acc * _ipow(w, prev_k - k) + c
        prev_k = k
    if prev_k > 0:
        acc = acc * _ipow(w, prev_k)
    return acc


def _fmt_coeff(c):
    if c.imag == 0:
        r = c.real
        if r == int(r) and abs(r) < 1e15:
            return str(int(r))
        return f"{r:.12g}"
    return f"({c.real:.12g}{c.imag:+.12g}i)"


# -- construction ------------------------------------------------------------

def torus_polynomial(pair: NewtonPair) -> BivariatePolynomial:
    """Polynomial sqrt(2)^q v^q - sqrt(2)^p w^p for a (p, q) torus knot.

    Its zero set meets the unit 3-sphere in the Clifford-torus curve
    v = exp(i p theta)/sqrt(2), w = exp(i q theta)/sqrt(2).
    """
    s = math.sqrt(2.0)
    return BivariatePolynomial({(pair.q, 0): s ** pair.q, (0, pair.p): -(s ** pair.p)})


@dataclass(frozen=True)
class PresetInfo:
    name: str
    description: str
    polynomial: str = field(default="")


_TORUS_NAME = re.compile(r"^torus-(\d+)-(\d+)$")

_FIXED_PRESETS = {
    "unknot-circle": (
        lambda: BivariatePolynomial({(1, 0): 1.0}),
        "single unknotted circle (unit circle in the z = 0 plane at t = 0)"),
    "unknot-line": (
        lambda: BivariatePolynomial({(0, 1): 1.0}),
        "straight vortex line along the z axis (unknot through the projection point)"),
    "trefoil": (
        lambda: torus_polynomial(NewtonPair(2, 3)),
        "(2,3) torus knot"),
    "hopf-link": (
        lambda: BivariatePolynomial({(2, 0): 1.0, (0, 2): 1.0}),
        "Hopf link: two circles with linking number one (v^2 + w^2)"),
    "cable-2-3-3-2": (
        lambda: BivariatePolynomial({
            (0, 6): 1.0,
            (3, 4): -3.0,
            (6, 2): 3.0,
            (8, 2): -6.0,
            (9, 0): -1.0,
            (11, 0): -2.0,
            (13, 0): -1.0,
        }),
        "cable knot with Newton pairs (2,3) and (3,2)"),
}


def preset_names():
    return sorted(_FIXED_PRESETS) + ["torus-P-Q (coprime integers, e.g. torus-3-4)"]


def preset(name: str):
    """Look up a preset by name; returns (polynomial, PresetInfo)."""
    if name in _FIXED_PRESETS:
        build, desc = _FIXED_PRESETS[name]
        poly = build()
        return poly, PresetInfo(name, desc, str(poly))
    m = _TORUS_NAME.match(name)
    if m:
        pair = NewtonPair(int(m.group(1)), int(m.group(2)))
        poly = torus_polynomial(pair)
        return poly, PresetInfo(name, f"({pair.p},{pair.q}) torus knot", str(poly))
    raise PolynomialError(
        f"unknown preset {name!r}; available: {', '.join(preset_names())}")


# -- spec'd functional surface ------------------------------------------------

def eval_poly(h: BivariatePolynomial, v, w):
    return h.eval(v, w)


def d_dv(h: BivariatePolynomial) -> BivariatePolynomial:
    return h.d_dv()


def d_dw(h: BivariatePolynomial) -> BivariatePolynomial:
    return h.d_dw()


def antiderivative_v(h: BivariatePolynomial) -> BivariatePolynomial:
    return h.antiderivative_v()


# -- file format ---------------------------------------------------------------
#
# UTF-8 text; '#' begins a comment line; data lines are
#     j k re im
# with j, k nonnegative integers and re, im decimal floats. Duplicate (j, k)
# lines are summed and zero results dropped.

def parse_poly_file(text: str, allow_constant: bool = False) -> BivariatePolynomial:
    terms = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            raise PolynomialError(
                f"line {lineno}: expected 4 fields 'j k re im', got {len(fields)}")
        try:
            j, k = int(fields[0]), int(fields[1])
            re_, im_ = float(fields[2]), float(fields[3])
        except ValueError as exc:
            raise PolynomialError(f"line {lineno}: {exc}") from None
        if j < 0 or k < 0:
            raise PolynomialError(f"line {lineno}: negative exponent ({j}, {k})")
        terms[(j, k)] = terms.get((j, k), 0j) + complex(re_, im_)
    poly = BivariatePolynomial(terms)
    if poly.is_zero:
        raise PolynomialError("polynomial file reduces to the zero polynomial")
    if not allow_constant and poly.has_constant_term:
        raise PolynomialError(
            "link polynomial must have vanishing constant term "
            "(pass allow_constant=True for non-link use)")
    return poly
