"""Global numerical verification of the constructed fields.

Everything here checks properties of exact analytic evaluations; finite
differences act directly on pointwise field values, so no interpolation
error enters the Maxwell residuals. Quadratures use the midpoint rule over
box cells, summed slab by slab in a fixed order for reproducibility.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import KnottedFieldSpec, helicity_densities, knotted_field
from .jets import Event
from .linkpoly import BivariatePolynomial
from .topology import TopologyReport, reports_equivalent, topology_report
from .vortex import GridSpec, TraceParams, extract_vortices

__all__ = [
    "ResidualReport",
    "QuadratureResult",
    "EpsilonScanResult",
    "maxwell_residuals",
    "total_energy",
    "helicity",
    "epsilon_scan",
]

# The tail model assumes an energy falloff like C / r^6 outside the box; the
# exponent is measured before use and the estimate flagged when it disagrees.
TAIL_MODEL_EXPONENT = -6.0
TAIL_EXPONENT_SLACK = 0.5


@dataclass(frozen=True)
class ResidualReport:
    """Max Maxwell residuals over the sampled events, at the given step."""

    div_e: float
    div_b: float
    faraday: float
    ampere: float
    step: float

    def worst(self) -> float:
        return max(self.div_e, self.div_b, self.faraday, self.ampere)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    box_radius: float
    resolution: int
    tail_estimate: float
    decay_exponent: float
    tail_trusted: bool


@dataclass(frozen=True)
class EpsilonScanResult:
    entries: list            # [(epsilon, TopologyReport), ...]
    stabilized_epsilon: float  # None when no consecutive pair agrees


def _field_eb(spec, t, x, y, z):
    s = knotted_field(spec, Event(t, x, y, z))
    return s.E, s.B


def maxwell_residuals(spec: KnottedFieldSpec, events, step: float) -> ResidualReport:
    """Central-difference div/curl residuals of E and B at the given events.

    Each residual is a cancellation of finite-difference derivatives, so it
    is normalized by the local magnitude of the cancelling terms (gradient
    norm for the divergences, |dt X| + |curl X| for the two curl equations).
    That local field-derivative scale keeps the numbers dimensionless and
    meaningful for fields of any polynomial degree. Reported values are
    maxima over the batch; for the exact solutions all four shrink like
    step^2.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    ev = np.asarray(events, dtype=float)
    if ev.ndim == 1:
        ev = ev[None, :]
    t, x, y, z = ev[:, 0], ev[:, 1], ev[:, 2], ev[:, 3]

    dE = []
    dB = []
    for axis in range(3):
        off = [np.zeros_like(x)] * 3
        off[axis] = np.full_like(x, step)
        ep, bp = _field_eb(spec, t, x + off[0], y + off[1], z + off[2])
        em, bm = _field_eb(spec, t, x - off[0], y - off[1], z - off[2])
        dE.append((ep - em) / (2 * step))
        dB.append((bp - bm) / (2 * step))
    ep, bp = _field_eb(spec, t + step, x, y, z)
    em, bm = _field_eb(spec, t - step, x, y, z)
    dtE = (ep - em) / (2 * step)
    dtB = (bp - bm) / (2 * step)

    def curl(d):
        return np.stack([d[1][2] - d[2][1], d[2][0] - d[0][2], d[0][1] - d[1][0]])

    def grad_norm(d):
        return np.sqrt(sum(np.sum(c * c, axis=0) for c in d))

    div_e = np.abs(dE[0][0] + dE[1][1] + dE[2][2]) / grad_norm(dE)
    div_b = np.abs(dB[0][0] + dB[1][1] + dB[2][2]) / grad_norm(dB)
    curl_e = curl(dE)
    curl_b = curl(dB)
    faraday = (np.linalg.norm(dtB + curl_e, axis=0)
               / (np.linalg.norm(dtB, axis=0) + np.linalg.norm(curl_e, axis=0)))
    ampere = (np.linalg.norm(dtE - curl_b, axis=0)
              / (np.linalg.norm(dtE, axis=0) + np.linalg.norm(curl_b, axis=0)))

    return ResidualReport(
        float(div_e.max()),
        float(div_b.max()),
        float(faraday.max()),
        float(ampere.max()),
        step,
    )


def _midpoint_sum(grid: GridSpec, t, integrand, slab: int = 32):
    """Midpoint-rule integral over the box, accumulated slab by slab.

    `integrand(t, X, Y, Z)` must return one array (or a tuple of arrays) per
    evaluation; slabs run along x in index order and their partial sums are
    combined with pairwise accumulation for run-to-run reproducibility.
    """
    xs, ys, zs = grid.axes()
    cx = 0.5 * (xs[:-1] + xs[1:])
    cy = 0.5 * (ys[:-1] + ys[1:])
    cz = 0.5 * (zs[:-1] + zs[1:])
    vol = (xs[1] - xs[0]) * (ys[1] - ys[0]) * (zs[1] - zs[0])
    partials = []
    for lo in range(0, len(cx), slab):
        X = cx[lo:lo + slab][:, None, None]
        Y = cy[None, :, None]
        Z = cz[None, None, :]
        vals = integrand(t, X, Y, Z)
        if not isinstance(vals, tuple):
            vals = (vals,)
        partials.append([float(np.sum(v)) for v in vals])
    sums = [vol * _pairwise(col) for col in zip(*partials)]
    return sums[0] if len(sums) == 1 else tuple(sums)


def _pairwise(values):
    vals = list(values)
    while len(vals) > 1:
        vals = [vals[i] + vals[i + 1] if i + 1 < len(vals) else vals[i]
                for i in range(0, len(vals), 2)]
    return vals[0] if vals else 0.0


def _fibonacci_sphere(n: int):
    idx = np.arange(n) + 0.5
    phi = np.arccos(1.0 - 2.0 * idx / n)
    theta = np.pi * (1.0 + np.sqrt(5.0)) * idx
    return (np.sin(phi) * np.cos(theta), np.sin(phi) * np.sin(theta), np.cos(phi))


def _shell_max_u(spec, t, radius, n=600):
    ux, uy, uz = _fibonacci_sphere(n)
    s = knotted_field(spec, Event(t, radius * ux, radius * uy, radius * uz))
    return float(s.u.max())


def total_energy(spec: KnottedFieldSpec, grid: GridSpec, t: float) -> QuadratureResult:
    """Midpoint integral of the energy density u over the box.

    The exterior tail is estimated from the boundary-shell maximum of u and
    the C / r^6 falloff model; the decay exponent is measured from shell
    maxima first, and the estimate is marked untrusted when the measured
    exponent misses the model by more than the allowed slack.
    """
    def integrand(tt, X, Y, Z):
        return knotted_field(spec, Event(tt, X, Y, Z)).u

    value = _midpoint_sum(grid, t, integrand)

    radius = min(min(abs(lo), abs(hi)) for lo, hi in grid.bounds)
    radii = radius * np.array([0.6, 0.7, 0.8, 0.9, 1.0])
    maxima = np.array([_shell_max_u(spec, t, r) for r in radii])
    exponent = float(np.polyfit(np.log(radii), np.log(maxima), 1)[0])
    trusted = abs(exponent - TAIL_MODEL_EXPONENT) <= TAIL_EXPONENT_SLACK
    # integral of (u_max R^6 / r^6) over the sphere exterior
    tail = 4.0 * np.pi * maxima[-1] * radius**3 / 3.0
    return QuadratureResult(value, radius, grid.resolution, tail, exponent, trusted)


def helicity(spec: KnottedFieldSpec, grid: GridSpec, t: float):
    """Magnetic and electric helicities (integrals of A.B and C.E)."""
    def integrand(tt, X, Y, Z):
        return helicity_densities(spec, Event(tt, X, Y, Z))

    hm, he = _midpoint_sum(grid, t, integrand)
    return hm, he


def epsilon_scan(h: BivariatePolynomial, epsilons, grid: GridSpec, t: float,
                 params: TraceParams = TraceParams(),
                 name: str = "") -> EpsilonScanResult:
    """Extract and classify the vortex topology across a descending eps list.

    The link realized by the vortex set is guaranteed only for sufficiently
    small eps; the scan reports the first eps at which consecutive entries
    produce equivalent topology reports.
    """
    eps_list = list(epsilons)
    if not eps_list:
        raise ValueError("epsilon list must be nonempty")
    if any(b >= a for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("epsilon list must be strictly descending")
    entries = []
    for eps in eps_list:
        spec = KnottedFieldSpec(h, eps, name)
        vs = extract_vortices(spec, grid, t, params)
        entries.append((eps, topology_report(spec, vs)))
    stabilized = None
    for (e1, r1), (e2, r2) in zip(entries, entries[1:]):
        if reports_equivalent(r1, r2):
            stabilized = e1
            break
    return EpsilonScanResult(entries, stabilized)
