"""First-order complex jets: a value carried together with its four partials.

Partial derivatives are ordered (dt, dx, dy, dz) everywhere in this package,
including file outputs. Jet components may be plain python/numpy complex
scalars or numpy arrays of a common broadcastable shape, so the same
arithmetic serves pointwise evaluation and vectorized grid sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Event",
    "ComplexJet",
    "constant_jet",
    "coordinate_jets",
    "jet_add",
    "jet_sub",
    "jet_mul",
    "jet_div",
    "jet_pow_int",
]

_ZERO4 = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class Event:
    """A spacetime point (t, x, y, z) in natural units (c = 1).

    Coordinates may be scalars or numpy arrays of a common broadcastable
    shape (a batch of events). All coordinates must be finite.
    """

    t: object
    x: object
    y: object
    z: object

    def __post_init__(self):
        for name in ("t", "x", "y", "z"):
            v = getattr(self, name)
            if not np.all(np.isfinite(v)):
                raise ValueError(f"Event coordinate {name!r} is not finite")

    @property
    def r2(self):
        """Squared spatial radius x^2 + y^2 + z^2."""
        return self.x * self.x + self.y * self.y + self.z * self.z


class ComplexJet:
    """A complex value plus its four partial derivatives (dt, dx, dy, dz)."""

    __slots__ = ("value", "d")

    def __init__(self, value, d=_ZERO4):
        self.value = value
        self.d = (d[0], d[1], d[2], d[3])

    @property
    def dt(self):
        return self.d[0]

    @property
    def grad(self):
        """Spatial partials (dx, dy, dz)."""
        return self.d[1:]

    def __repr__(self):
        return f"ComplexJet({self.value!r}, d={self.d!r})"

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self):
        return ComplexJet(-self.value, tuple(-g for g in self.d))

    def __add__(self, other):
        o = _lift(other)
        return ComplexJet(self.value + o.value,
                          tuple(a + b for a, b in zip(self.d, o.d)))

    __radd__ = __add__

    def __sub__(self, other):
        o = _lift(other)
        return ComplexJet(self.value - o.value,
                          tuple(a - b for a, b in zip(self.d, o.d)))

    def __rsub__(self, other):
        return _lift(other).__sub__(self)

    def __mul__(self, other):
        o = _lift(other)
        return ComplexJet(self.value * o.value,
                          tuple(da * o.value + self.value * db
                                for da, db in zip(self.d, o.d)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return jet_div(self, _lift(other))

    def __rtruediv__(self, other):
        return jet_div(_lift(other), self)

    def __pow__(self, n):
        return jet_pow_int(self, n)


def _lift(x):
    """Treat a bare number/array as a constant jet (zero partials)."""
    if isinstance(x, ComplexJet):
        return x
    return ComplexJet(x)


def constant_jet(value):
    """Jet of a constant: all four partials are zero."""
    return ComplexJet(value)


def jet_add(a, b):
    return _lift(a) + _lift(b)


def jet_sub(a, b):
    return _lift(a) - _lift(b)


def jet_mul(a, b):
    return _lift(a) * _lift(b)


def jet_div(a, b):
    """Quotient of jets. The denominator value must be nonzero everywhere."""
    a = _lift(a)
    b = _lift(b)
    bad = b.value == 0
    if np.any(bad):
        where = ""
        if np.ndim(bad) > 0:
            where = f" at flat index {int(np.argmax(np.ravel(bad)))}"
        raise ZeroDivisionError(f"jet division by zero value{where}")
    q = a.value / b.value
    return ComplexJet(q, tuple((da - q * db) / b.value
                               for da, db in zip(a.d, b.d)))


def jet_pow_int(a, n):
    """Nonnegative integer power by binary exponentiation."""
    a = _lift(a)
    n = int(n)
    if n < 0:
        raise ValueError(f"jet_pow_int requires exponent >= 0, got {n}")
    result = ComplexJet(complex(1.0))
    base = a
    while n:
        if n & 1:
            result = result * base
        base = base * base if n > 1 else base
        n >>= 1
    return result


def coordinate_jets(e: Event):
    """Jets of the four coordinate functions at an event.

    Each returned jet has the coordinate's value and a single unit partial,
    in the fixed (dt, dx, dy, dz) order.
    """
    return (
        ComplexJet(e.t, (1.0, 0.0, 0.0, 0.0)),
        ComplexJet(e.x, (0.0, 1.0, 0.0, 0.0)),
        ComplexJet(e.y, (0.0, 0.0, 1.0, 0.0)),
        ComplexJet(e.z, (0.0, 0.0, 0.0, 1.0)),
    )
