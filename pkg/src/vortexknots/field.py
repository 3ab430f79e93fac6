"""Knotted null fields built from a link polynomial and the Bateman pair.

Given a link polynomial h and a scale epsilon > 0, the field

    F_L = psi * grad(alpha_eps) x grad(beta_eps),   psi = h(alpha_eps, beta_eps)

with alpha_eps = eps*alpha, beta_eps = eps*beta is an exact null solution of
Maxwell's equations whose zero-intensity lines at any fixed time realize the
algebraic link of h. Scaling by eps maps a fixed time slice onto the 3-sphere
of radius eps, since |alpha|^2 + |beta|^2 = 1 identically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linkpoly
from .bateman import bateman_values, cross3, eval_bateman, vec3
from .jets import Event
from .linkpoly import BivariatePolynomial

__all__ = [
    "BASE_FIELD_PRESET",
    "KnottedFieldSpec",
    "FieldSample",
    "knotted_field",
    "vortex_scalar",
    "psi_values",
    "energy_ratio",
    "poynting_alignment",
    "vector_potential",
    "helicity_densities",
]

# Zero guard for relative residuals evaluated at vortex points.
RESIDUAL_FLOOR = 1e-300


BASE_FIELD_PRESET = "hopf-base"


@dataclass(frozen=True)
class KnottedFieldSpec:
    """A link polynomial plus the sphere radius epsilon (default 1).

    Torus knots realize their link already at epsilon = 1; polynomials with
    several Newton pairs may need a smaller epsilon (see
    validate.epsilon_scan). With `link=False` the polynomial may be the
    constant 1, which reproduces the plain base field (psi identically one,
    no vortices); that variant exists for energy, slice, and verification
    runs on the unmodified Hopf field.
    """

    h: BivariatePolynomial
    epsilon: float = 1.0
    name: str = ""
    link: bool = True

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.link:
            self.h.require_link_polynomial()
        elif self.h.is_zero:
            raise ValueError("field polynomial must be nonzero")

    @classmethod
    def from_preset(cls, name: str, epsilon: float = 1.0) -> "KnottedFieldSpec":
        if name == BASE_FIELD_PRESET:
            return cls(BivariatePolynomial({(0, 0): 1.0}), epsilon,
                       BASE_FIELD_PRESET, link=False)
        poly, info = linkpoly.preset(name)
        return cls(poly, epsilon, info.name)

    def label(self) -> str:
        return self.name or str(self.h)


@dataclass(frozen=True)
class FieldSample:
    """All pointwise observables of a knotted field at one event (or batch).

    Vector quantities carry the 3 components on the leading axis. S is the
    Poynting vector E x B; u the energy density |E|^2 + |B|^2; psi the complex
    vortex scalar h(alpha_eps, beta_eps) and grad_psi its spatial gradient.
    """

    F: np.ndarray
    E: np.ndarray
    B: np.ndarray
    S: np.ndarray
    u: np.ndarray
    psi: np.ndarray
    grad_psi: np.ndarray


def _scaled_jets(spec: KnottedFieldSpec, e: Event):
    bj = eval_bateman(e)
    return bj.alpha * spec.epsilon, bj.beta * spec.epsilon


def knotted_field(spec: KnottedFieldSpec, e: Event) -> FieldSample:
    """Evaluate F_L and its derived observables at an event."""
    ae, be = _scaled_jets(spec, e)
    psi_jet = spec.h.eval(ae, be)
    base = cross3(ae.grad, be.grad)
    F = vec3(*(psi_jet.value * g for g in base))
    E = F.real
    B = F.imag
    S = vec3(*cross3(E, B))
    u = np.sum(E * E + B * B, axis=0)
    grad_psi = vec3(*psi_jet.grad)
    return FieldSample(F, E, B, S, u, np.asarray(psi_jet.value), grad_psi)


def vortex_scalar(spec: KnottedFieldSpec, e: Event):
    """psi and grad(psi) only; the lean path used by curve tracing."""
    ae, be = _scaled_jets(spec, e)
    psi_jet = spec.h.eval(ae, be)
    return psi_jet.value, np.asarray(psi_jet.grad, dtype=complex)


def psi_values(spec: KnottedFieldSpec, t, x, y, z):
    """Values of psi on arrays of coordinates (no derivatives).

    Large grids are evaluated slab by slab along the first axis to bound
    the temporary memory of the polynomial power tables.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    z = np.asarray(z, dtype=float)
    shape = np.broadcast_shapes(x.shape, y.shape, z.shape)
    if len(shape) >= 2 and shape[0] > 1 and np.prod(shape) > 2_000_000:
        xb, yb, zb = (np.broadcast_to(c, shape) for c in (x, y, z))
        out = np.empty(shape, dtype=complex)
        for i in range(shape[0]):
            a, b = bateman_values(t, xb[i], yb[i], zb[i])
            out[i] = spec.h.eval(spec.epsilon * a, spec.epsilon * b)
        return out
    a, b = bateman_values(t, x, y, z)
    return spec.h.eval(spec.epsilon * a, spec.epsilon * b)


def _scaled_hopf_su(spec: KnottedFieldSpec, e: Event):
    """(S, u) of the eps-scaled base field grad(alpha_eps) x grad(beta_eps)."""
    bj = eval_bateman(e)
    F = vec3(*cross3(bj.alpha.grad, bj.beta.grad)) * spec.epsilon**2
    E, B = F.real, F.imag
    return vec3(*cross3(E, B)), np.sum(E * E + B * B, axis=0)


def energy_ratio(spec: KnottedFieldSpec, e: Event):
    """Relative residual of u_L = |psi|^2 u_H (the energy factorization).

    u_H here is the energy density of the eps-scaled base field, matching
    the field F_L = psi * grad(alpha_eps) x grad(beta_eps) exactly.
    """
    sample = knotted_field(spec, e)
    _, u_h = _scaled_hopf_su(spec, e)
    expected = np.abs(sample.psi) ** 2 * u_h
    return np.abs(sample.u - expected) / np.maximum(expected, RESIDUAL_FLOOR)


def poynting_alignment(spec: KnottedFieldSpec, e: Event):
    """Relative residual of S_L = |psi|^2 S_H (the Poynting factorization)."""
    sample = knotted_field(spec, e)
    s_h, _ = _scaled_hopf_su(spec, e)
    expected = np.abs(sample.psi) ** 2 * s_h
    num = np.sqrt(np.sum((sample.S - expected) ** 2, axis=0))
    den = np.sqrt(np.sum(expected**2, axis=0))
    return num / np.maximum(den, RESIDUAL_FLOOR)


def vector_potential(spec: KnottedFieldSpec, e: Event):
    """Complex potential V = f(alpha_eps, beta_eps) grad(beta_eps), V = C + iA.

    f is the formal v-antiderivative of h with integration constant zero
    (any constant shifts V without changing the field). curl(C) = E and
    curl(A) = B.
    """
    ae, be = _scaled_jets(spec, e)
    f_val = spec.h.antiderivative_v().eval(ae.value, be.value)
    V = vec3(*(f_val * g for g in be.grad))
    return V, V.real, V.imag


def helicity_densities(spec: KnottedFieldSpec, e: Event):
    """Pointwise magnetic and electric helicity densities (A.B, C.E)."""
    ae, be = _scaled_jets(spec, e)
    psi_val = spec.h.eval(ae.value, be.value)
    F = vec3(*(psi_val * g for g in cross3(ae.grad, be.grad)))
    f_val = spec.h.antiderivative_v().eval(ae.value, be.value)
    V = vec3(*(f_val * g for g in be.grad))
    hm = np.sum(V.imag * F.imag, axis=0)
    he = np.sum(V.real * F.real, axis=0)
    return hm, he
