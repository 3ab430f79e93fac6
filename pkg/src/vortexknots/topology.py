"""Topological invariants of extracted vortex sets.

Three cheap, polyline-robust observables certify the link type: the number
of closed components, the pairwise Gauss linking matrix, and the winding of
arg(alpha_eps) and arg(beta_eps) along each component. For a (p, q) torus
knot the windings recover (p, q) directly; for the Hopf link each component
winds (1, 1) and the two components link once.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .bateman import bateman_values
from .field import KnottedFieldSpec
from .vortex import VortexCurve, VortexSet

__all__ = [
    "Winding",
    "TopologyReport",
    "linking_number",
    "phase_windings",
    "topology_report",
    "reports_equivalent",
]

# Accept a rounded integer only when the raw value sits this close to it:
# far above numerical error, far below the 0.5 gap between integers.
INTEGER_TOLERANCE = 0.05

MIN_CURVE_SEPARATION = 1e-6


@dataclass(frozen=True)
class Winding:
    """Integer phase windings of (alpha_eps, beta_eps) with raw residuals."""

    w_alpha: int
    w_beta: int
    residual_alpha: float
    residual_beta: float


@dataclass
class TopologyReport:
    """Invariants of one extracted vortex set.

    linking_matrix holds the raw Gauss integrals for closed components with
    NaN on the (unset) diagonal; linking_rounded is its integer companion.
    Windings are None for components whose phases are undefined (alpha or
    beta vanishes on the curve, e.g. the unknot presets).
    """

    component_count: int
    open_curve_count: int
    linking_matrix: np.ndarray
    linking_rounded: np.ndarray
    windings: list
    time: float
    epsilon: float
    warnings: list = field(default_factory=list)


def _segments(curve: VortexCurve):
    v = curve.vertices
    return v, np.roll(v, -1, axis=0)


def linking_number(a: VortexCurve, b: VortexCurve, block: int = 1024) -> float:
    """Gauss linking number of two disjoint closed polylines.

    Each segment pair contributes its exact signed solid angle (the spherical
    quadrilateral formula of Klenin & Langowski), so the result is the exact
    invariant of the polylines up to roundoff rather than a quadrature
    estimate. Near-integer output is a consistency signal, not enforced here.
    """
    for c in (a, b):
        if not c.closed:
            raise ValueError("linking number requires closed curves")
    amin = _min_distance(a.vertices, b.vertices)
    if amin <= MIN_CURVE_SEPARATION:
        raise ValueError(f"curves are not disjoint (min distance {amin:.2e})")
    if amin < 20 * MIN_CURVE_SEPARATION:
        warnings.warn("curves nearly touch; linking integral may be ill-conditioned")

    p1, p2 = _segments(a)
    total = 0.0
    # Blocked loop over segments of `a` bounds the (n_block x m) temporaries.
    for lo in range(0, len(p1), block):
        total += _solid_angle_sum(p1[lo:lo + block], p2[lo:lo + block],
                                  *_segments(b))
    return total / (4.0 * np.pi)


def _min_distance(va, vb, block: int = 2048):
    best = np.inf
    for lo in range(0, len(va), block):
        d2 = np.sum((va[lo:lo + block, None, :] - vb[None, :, :]) ** 2, axis=2)
        best = min(best, float(d2.min()))
    return np.sqrt(best)


def _solid_angle_sum(p1, p2, p3, p4):
    """Sum of signed solid angles over all segment pairs (vectorized)."""
    r12 = (p2 - p1)[:, None, :]
    r34 = (p4 - p3)[None, :, :]
    r13 = p3[None, :, :] - p1[:, None, :]
    r14 = p4[None, :, :] - p1[:, None, :]
    r23 = p3[None, :, :] - p2[:, None, :]
    r24 = p4[None, :, :] - p2[:, None, :]

    n1 = _unit(np.cross(r13, r14))
    n2 = _unit(np.cross(r14, r24))
    n3 = _unit(np.cross(r24, r23))
    n4 = _unit(np.cross(r23, r13))

    omega = (_asin_dot(n1, n2) + _asin_dot(n2, n3)
             + _asin_dot(n3, n4) + _asin_dot(n4, n1))
    sign = np.sign(np.sum(np.cross(r34, r12) * r13, axis=2))
    return float(np.sum(omega * sign))


def _unit(v):
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    # Degenerate (collinear) pairs contribute zero solid angle.
    return np.where(n > 0, v / np.where(n > 0, n, 1.0), 0.0)


def _asin_dot(u, v):
    return np.arcsin(np.clip(np.sum(u * v, axis=-1), -1.0, 1.0))


class PhaseUndefinedError(ValueError):
    """alpha_eps or beta_eps vanishes on the curve; its phase has no winding."""


class CurveTooCoarseError(ValueError):
    """Consecutive vertices jump more than pi in phase; re-trace more finely."""


def phase_windings(spec: KnottedFieldSpec, curve: VortexCurve) -> Winding:
    """Windings of arg(alpha_eps) and arg(beta_eps) along a closed curve.

    Unwrapped phase increments are accumulated around the polyline (closing
    segment included) and divided by 2 pi. The rounded integers come with
    their pre-rounding residuals.
    """
    if not curve.closed:
        raise ValueError("phase windings are defined for closed curves only")
    v = curve.vertices
    a, b = bateman_values(curve.time, v[:, 0], v[:, 1], v[:, 2])
    a = spec.epsilon * a
    b = spec.epsilon * b
    if np.abs(a).min() <= 1e-9 or np.abs(b).min() <= 1e-9:
        raise PhaseUndefinedError(
            "alpha_eps or beta_eps vanishes on this curve; windings undefined")
    totals = []
    residuals = []
    for vals in (a, b):
        ang = np.angle(vals)
        d = np.diff(np.concatenate([ang, ang[:1]]))
        d -= 2.0 * np.pi * np.round(d / (2.0 * np.pi))
        if np.abs(d).max() > 0.9 * np.pi:
            raise CurveTooCoarseError(
                "phase jump near pi between consecutive vertices; "
                "re-trace with a smaller step")
        w = d.sum() / (2.0 * np.pi)
        totals.append(int(np.round(w)))
        residuals.append(float(abs(w - np.round(w))))
    return Winding(totals[0], totals[1], residuals[0], residuals[1])


def topology_report(spec: KnottedFieldSpec, vs: VortexSet) -> TopologyReport:
    """Assemble count, pairwise linkings, and windings for a vortex set.

    Open curves are counted separately and excluded from the invariants.
    """
    closed = vs.closed_curves
    n = len(closed)
    warn = list(vs.diagnostics)
    if vs.open_curves:
        warn.append(f"{len(vs.open_curves)} open curve(s) excluded from invariants")

    link = np.full((n, n), np.nan)
    for i in range(n):
        for j in range(i + 1, n):
            try:
                lk = linking_number(closed[i], closed[j])
            except ValueError as exc:
                warn.append(f"linking ({i},{j}): {exc}")
                lk = np.nan
            link[i, j] = link[j, i] = lk
    rounded = np.where(np.isnan(link), 0, np.round(np.nan_to_num(link))).astype(int)

    windings = []
    for i, c in enumerate(closed):
        try:
            windings.append(phase_windings(spec, c))
        except (PhaseUndefinedError, CurveTooCoarseError) as exc:
            warn.append(f"windings component {i}: {exc}")
            windings.append(None)

    return TopologyReport(n, len(vs.open_curves), link, rounded, windings,
                          vs.time, spec.epsilon, warn)


def reports_equivalent(a: TopologyReport, b: TopologyReport) -> bool:
    """Structural equality of two reports, blind to orientation and order.

    Compares component counts, the multisets of |windings| pairs, and the
    multisets of |linking| integers. Orientations of traced curves are
    arbitrary, so only magnitudes are meaningful across runs.
    """
    if a.component_count != b.component_count:
        return False

    def wkey(ws):
        return sorted((-1, -1) if w is None else (abs(w.w_alpha), abs(w.w_beta))
                      for w in ws)

    def lkey(m):
        n = m.shape[0]
        return sorted(abs(int(m[i, j])) for i in range(n) for j in range(i + 1, n))

    return (wkey(a.windings) == wkey(b.windings)
            and lkey(a.linking_rounded) == lkey(b.linking_rounded))
