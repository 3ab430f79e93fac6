"""Locate and trace the curves where psi = h(alpha_eps, beta_eps) vanishes.

At a fixed time the vortex set is the transversal intersection of the two
surfaces Re(psi) = 0 and Im(psi) = 0, generically a disjoint union of closed
curves (open only when a curve leaves the requested box, e.g. a vortex line
through the projection point at infinity). Extraction runs in three stages:

  1. scan a vertex grid for cells whose corners change sign in both Re(psi)
     and Im(psi),
  2. refine each candidate onto the zero set with Gauss-Newton iterations,
  3. march along the curve with a tangent predictor and a plane-constrained
     Newton corrector until it closes or exits the box.

Predictor-corrector tracing is used instead of marching-cubes-style surface
intersection because vortex lines are codimension two: interpolating two
isosurfaces on cell edges is noisy, while tracing yields smooth ordered
polylines that feed directly into linking integrals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .field import KnottedFieldSpec, psi_values, vortex_scalar
from .jets import Event

__all__ = [
    "GridSpec",
    "TraceParams",
    "VortexCurve",
    "VortexSet",
    "DegenerateTangentError",
    "scan_cells",
    "refine_seed",
    "trace_curve",
    "extract_vortices",
]


@dataclass(frozen=True)
class GridSpec:
    """An axis-aligned box with a number of vertices per axis (>= 8)."""

    bounds: tuple  # ((xmin, xmax), (ymin, ymax), (zmin, zmax))
    resolution: int = 81

    def __post_init__(self):
        if len(self.bounds) != 3:
            raise ValueError("bounds must hold three (min, max) pairs")
        for lo, hi in self.bounds:
            if not lo < hi:
                raise ValueError(f"degenerate axis bounds ({lo}, {hi})")
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")

    @classmethod
    def cube(cls, half_width: float, resolution: int = 81) -> "GridSpec":
        b = (-half_width, half_width)
        return cls((b, b, b), resolution)

    def axes(self):
        return tuple(np.linspace(lo, hi, self.resolution)
                     for lo, hi in self.bounds)

    def cell_diagonal(self) -> float:
        return float(np.sqrt(sum(((hi - lo) / (self.resolution - 1)) ** 2
                                 for lo, hi in self.bounds)))

    def contains(self, p) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(p, self.bounds))


@dataclass(frozen=True)
class TraceParams:
    """Tunables for seeding and tracing; defaults match the preset runs."""

    step: float = 0.02          # nominal arc-length step of the tracer
    tol_seed: float = 1e-10     # |psi| convergence target of refinement
    tol_curve: float = 1e-8     # every emitted vertex satisfies |psi| < this
    max_iterations: int = 50    # Gauss-Newton iteration cap per seed
    max_vertices: int = 200_000
    dedupe_factor: float = 2.0  # dedupe radius = factor * step

    def __post_init__(self):
        for name in ("step", "tol_seed", "tol_curve", "dedupe_factor"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class VortexCurve:
    """An ordered polyline on the vortex set.

    Closed curves end within one trace step of their start (the first vertex
    is not repeated); open curves terminate at the box boundary.
    """

    vertices: np.ndarray
    closed: bool
    arc_length: float
    time: float = 0.0
    failure: str = None

    def __len__(self):
        return len(self.vertices)


@dataclass
class VortexSet:
    """All curves extracted from one time slice, plus run metadata."""

    curves: list
    time: float
    spec: KnottedFieldSpec
    grid: GridSpec
    params: TraceParams
    diagnostics: list = field(default_factory=list)

    @property
    def closed_curves(self):
        return [c for c in self.curves if c.closed]

    @property
    def open_curves(self):
        return [c for c in self.curves if not c.closed]


class DegenerateTangentError(RuntimeError):
    """Re(psi) = 0 and Im(psi) = 0 meet non-transversally at a trace point."""


def scan_cells(spec: KnottedFieldSpec, grid: GridSpec, t: float):
    """Cell centers whose 8 corners change sign in both Re(psi) and Im(psi).

    Returns (flat_indices, centers) ordered lexicographically by cell index,
    which fixes the seed order for the whole extraction.
    """
    xs, ys, zs = grid.axes()
    psi = psi_values(spec, t, xs[:, None, None], ys[None, :, None], zs[None, None, :])

    def straddles(comp):
        corners = [comp[sl] for sl in _corner_slices()]
        mn = np.minimum.reduce(corners)
        mx = np.maximum.reduce(corners)
        return (mn <= 0.0) & (mx >= 0.0)

    mask = straddles(psi.real) & straddles(psi.imag)
    idx = np.argwhere(mask)
    if idx.size == 0:
        return np.empty(0, dtype=int), np.empty((0, 3))
    flat = np.ravel_multi_index(idx.T, mask.shape)
    order = np.argsort(flat)
    idx = idx[order]
    centers = np.column_stack([
        0.5 * (axis[idx[:, dim]] + axis[idx[:, dim] + 1])
        for dim, axis in enumerate((xs, ys, zs))
    ])
    return flat[order], centers


def _corner_slices():
    for ix in (slice(None, -1), slice(1, None)):
        for iy in (slice(None, -1), slice(1, None)):
            for iz in (slice(None, -1), slice(1, None)):
                yield (ix, iy, iz)


def _eval(spec, t, p):
    val, grad = vortex_scalar(spec, Event(t, float(p[0]), float(p[1]), float(p[2])))
    return complex(val), grad


def refine_seed(spec: KnottedFieldSpec, point, t: float,
                params: TraceParams = TraceParams()):
    """Project a nearby point onto the vortex curve with Gauss-Newton steps.

    Solves the two real equations (Re psi, Im psi) = 0 by minimum-norm
    updates, which move only within the plane spanned by the two gradients.
    Returns the refined point, or None when the iteration fails to reach
    |psi| < tol_seed within the iteration budget.
    """
    p = np.asarray(point, dtype=float).copy()
    for _ in range(params.max_iterations):
        val, grad = _eval(spec, t, p)
        if abs(val) < params.tol_seed:
            return p
        jac = np.stack([grad.real, grad.imag])        # 2 x 3
        rhs = -np.array([val.real, val.imag])
        gram = jac @ jac.T
        try:
            delta = jac.T @ np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)) or np.linalg.norm(delta) > 1.0:
            return None
        p += delta
    return None


def _tangent(grad, params):
    """Unit tangent grad(Re psi) x grad(Im psi); raises when degenerate."""
    gr, gi = grad.real, grad.imag
    tau = np.cross(gr, gi)
    norm = np.linalg.norm(tau)
    if norm < 1e-12 * np.linalg.norm(gr) * np.linalg.norm(gi):
        raise DegenerateTangentError(
            "zero surfaces of Re(psi) and Im(psi) are tangent here; "
            "refine epsilon or the grid")
    return tau / norm


def _correct(spec, t, p, tau, tol, max_iter=12):
    """Newton-correct a predicted point back onto the curve.

    The update solves the 3x3 system [grad Re; grad Im; tau] delta =
    (-Re, -Im, 0), keeping the iterate in the plane through the predictor
    normal to the tangent. Returns (point, grad, iterations) or None.
    """
    p = p.copy()
    for it in range(1, max_iter + 1):
        val, grad = _eval(spec, t, p)
        if abs(val) < tol:
            return p, grad, it - 1
        mat = np.stack([grad.real, grad.imag, tau])
        rhs = np.array([-val.real, -val.imag, 0.0])
        try:
            delta = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError:
            return None
        if not np.all(np.isfinite(delta)):
            return None
        p += delta
    return None


def _march(spec, t, start, tau0, orient, params, grid):
    """March from `start` along tau0 until closure, box exit, or failure.

    `orient` is +-1, the sign relating the march direction to the canonical
    tangent grad(Re psi) x grad(Im psi); it is constant along a regular
    curve. Returns (vertices after start, closed, failure reason or None).
    The step halves whenever the corrector struggles (> 5 iterations),
    fails, or the tangent turns sharply, and relaxes back toward the
    nominal step after clean steps.
    """
    step_req = params.step
    min_step = step_req / 64.0
    vertices = []
    p, tau = start, tau0
    arc = 0.0
    s = step_req
    while len(vertices) < params.max_vertices:
        predict = p + s * tau
        result = _correct(spec, t, predict, tau, params.tol_seed)
        accept = False
        if result is not None:
            p_new, grad_new, iters = result
            try:
                tau_new = orient * _tangent(grad_new, params)
            except DegenerateTangentError as exc:
                return vertices, False, str(exc)
            hop = np.linalg.norm(p_new - p)
            # Reject corrector results that slid along the curve or turned
            # sharply; both indicate the predictor overstepped the curvature.
            if iters <= 5 and hop <= 2.0 * s and float(tau_new @ tau) > 0.2:
                accept = True
        if not accept:
            s *= 0.5
            if s < min_step:
                return vertices, False, "trace step collapsed below step/64"
            continue
        if not grid.contains(p_new):
            return vertices, False, None
        vertices.append(p_new)
        arc += hop
        p, tau = p_new, tau_new
        if arc > 3.0 * step_req and np.linalg.norm(p_new - start) < step_req \
                and float(tau_new @ tau0) > 0.5:
            return vertices, True, None
        if s < step_req:
            s = min(step_req, 1.4 * s)
    return vertices, False, "vertex budget exhausted"


def trace_curve(spec: KnottedFieldSpec, seed, t: float,
                params: TraceParams = TraceParams(),
                grid: GridSpec = None) -> VortexCurve:
    """Trace the full vortex curve through a refined seed point.

    The forward march closes the curve when it returns to within one nominal
    step of the seed; otherwise a backward march extends the polyline to the
    opposite box exit and the curve is reported open.
    """
    if grid is None:
        grid = GridSpec.cube(3.0)
    seed = np.asarray(seed, dtype=float)
    val, grad = _eval(spec, t, seed)
    if abs(val) >= params.tol_seed * 10:
        raise ValueError(f"seed is not on the curve (|psi| = {abs(val):.2e})")
    tau0 = _tangent(grad, params)

    forward, closed, fail_fwd = _march(spec, t, seed, tau0, +1, params, grid)
    if closed:
        verts = np.vstack([seed[None, :]] + [v[None, :] for v in forward])
        return VortexCurve(verts, True, _poly_arc_length(verts, True), time=t)

    backward, _, fail_bwd = _march(spec, t, seed, -tau0, -1, params, grid)
    chain = [v[None, :] for v in reversed(backward)] + [seed[None, :]] \
        + [v[None, :] for v in forward]
    verts = np.vstack(chain)
    return VortexCurve(verts, False, _poly_arc_length(verts, False), time=t,
                       failure=fail_fwd or fail_bwd)


def _poly_arc_length(verts, closed):
    if len(verts) < 2:
        return 0.0
    seg = np.linalg.norm(np.diff(verts, axis=0), axis=1).sum()
    if closed:
        seg += np.linalg.norm(verts[0] - verts[-1])
    return float(seg)


def extract_vortices(spec: KnottedFieldSpec, grid: GridSpec, t: float,
                     params: TraceParams = TraceParams()) -> VortexSet:
    """Scan, refine, and trace every vortex curve in the box at time t.

    Seeds are processed in lexicographic cell order; a refined seed landing
    within the dedupe radius of an already-traced curve is skipped, so each
    curve is traced exactly once. An empty result is valid.
    """
    flat_idx, centers = scan_cells(spec, grid, t)
    dedupe = params.dedupe_factor * params.step
    curves = []
    diagnostics = []
    traced_points = None

    for cell, center in zip(flat_idx, centers):
        if traced_points is not None:
            d2 = np.sum((traced_points - center) ** 2, axis=1)
            # Coarse skip: a center already this close to a traced curve
            # cannot refine onto a different component.
            if d2.min() < dedupe**2:
                continue
        p = refine_seed(spec, center, t, params)
        if p is None:
            diagnostics.append(
                f"cell {int(cell)}: seed at {center.round(3).tolist()} did not converge")
            continue
        if traced_points is not None:
            d2 = np.sum((traced_points - p) ** 2, axis=1)
            if d2.min() < dedupe**2:
                continue
        try:
            curve = trace_curve(spec, p, t, params, grid)
        except DegenerateTangentError as exc:
            diagnostics.append(f"cell {int(cell)}: {exc}")
            continue
        if curve.failure:
            diagnostics.append(f"cell {int(cell)}: {curve.failure}")
        if len(curve) < 4:
            diagnostics.append(
                f"cell {int(cell)}: discarded stub trace of {len(curve)} vertices")
            continue
        curves.append(curve)
        traced_points = (curve.vertices if traced_points is None
                         else np.vstack([traced_points, curve.vertices]))
    return VortexSet(curves, t, spec, grid, params, diagnostics)
