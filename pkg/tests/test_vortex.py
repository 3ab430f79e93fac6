"""Vortex curve scanning, refinement, and tracing."""

import numpy as np
import pytest

from vortexknots.field import KnottedFieldSpec, psi_values
from vortexknots.vortex import (
    GridSpec,
    TraceParams,
    extract_vortices,
    refine_seed,
    scan_cells,
    trace_curve,
    _eval,
    _march,
    _tangent,
)

CIRCLE = KnottedFieldSpec.from_preset("unknot-circle")
LINE = KnottedFieldSpec.from_preset("unknot-line")
HOPF = KnottedFieldSpec.from_preset("hopf-link")


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(((1.0, 1.0), (-1, 1), (-1, 1)), 16)
    with pytest.raises(ValueError):
        GridSpec(((-1, 1), (-1, 1), (-1, 1)), 4)


def test_scan_cells_ring():
    grid = GridSpec.cube(2.0, 41)
    _, centers = scan_cells(CIRCLE, grid, 0.0)
    assert len(centers) > 0
    r = np.linalg.norm(centers[:, :2], axis=1)
    # candidates hug the unit circle in the z = 0 plane
    assert np.all(np.abs(r - 1.0) < grid.cell_diagonal())
    assert np.all(np.abs(centers[:, 2]) < grid.cell_diagonal())
    # and cover the full ring
    ang = np.sort(np.arctan2(centers[:, 1], centers[:, 0]))
    gaps = np.diff(np.concatenate([ang, ang[:1] + 2 * np.pi]))
    assert gaps.max() < 0.5


def test_scan_cells_line_preset():
    grid = GridSpec.cube(2.0, 41)
    _, centers = scan_cells(LINE, grid, 0.0)
    assert len(centers) > 0
    assert np.all(np.linalg.norm(centers[:, :2], axis=1) < grid.cell_diagonal())


def test_scan_cells_empty_region():
    grid = GridSpec(((3.0, 5.0), (3.0, 5.0), (3.0, 5.0)), 9)
    _, centers = scan_cells(CIRCLE, grid, 0.0)
    assert len(centers) == 0


def test_refine_seed_converges_to_circle():
    p = refine_seed(CIRCLE, [1.01, 0.0, 0.01], 0.0)
    assert p is not None
    assert abs(np.hypot(p[0], p[1]) - 1.0) < 1e-8
    assert abs(p[2]) < 1e-8


def test_refine_seed_noop_on_curve():
    params = TraceParams()
    p = refine_seed(CIRCLE, [1.0, 0.0, 0.0], 0.0, params)
    np.testing.assert_allclose(p, [1.0, 0.0, 0.0], atol=1e-14)


def test_refine_seed_discards_far_points():
    # far from the zero set of alpha: no root to find
    assert refine_seed(CIRCLE, [4.0, 4.0, 4.0], 0.0) is None


def test_trace_circle():
    params = TraceParams(step=0.02)
    grid = GridSpec.cube(2.0, 41)
    p = refine_seed(CIRCLE, [1.01, 0.0, 0.01], 0.0, params)
    curve = trace_curve(CIRCLE, p, 0.0, params, grid)
    assert curve.closed
    assert curve.arc_length == pytest.approx(2 * np.pi, rel=0.01)
    r = np.linalg.norm(curve.vertices[:, :2], axis=1)
    assert np.max(np.abs(r - 1.0) + np.abs(curve.vertices[:, 2])) < 1e-6
    # consecutive spacing within 2x the nominal step, closure within one step
    seg = np.linalg.norm(np.diff(curve.vertices, axis=0), axis=1)
    assert seg.max() <= 2 * params.step
    assert np.linalg.norm(curve.vertices[0] - curve.vertices[-1]) < params.step


def test_trace_requires_on_curve_seed():
    with pytest.raises(ValueError, match="not on the curve"):
        trace_curve(CIRCLE, [1.3, 0.0, 0.0], 0.0)


def test_vertices_satisfy_curve_tolerance():
    params = TraceParams()
    grid = GridSpec.cube(3.0, 81)
    vs = extract_vortices(HOPF, grid, 0.0, params)
    for curve in vs.curves:
        vals = np.abs(psi_values(HOPF, 0.0, curve.vertices[:, 0],
                                 curve.vertices[:, 1], curve.vertices[:, 2]))
        assert vals.max() < params.tol_curve


def test_extract_unknot_line_single_open_curve():
    grid = GridSpec.cube(2.0, 41)
    vs = extract_vortices(LINE, grid, 0.0)
    assert len(vs.curves) == 1
    curve = vs.curves[0]
    assert not curve.closed
    z = curve.vertices[:, 2]
    assert z.min() < -1.9 and z.max() > 1.9
    assert np.abs(curve.vertices[:, :2]).max() < 1e-8


def test_extract_hopf_link_two_closed_curves():
    vs = extract_vortices(HOPF, GridSpec.cube(3.0, 81), 0.0)
    assert len(vs.curves) == 2
    assert all(c.closed for c in vs.curves)
    # no duplicated component: curves are far apart
    d = np.min([np.linalg.norm(a - b) for a in vs.curves[0].vertices[::25]
                for b in vs.curves[1].vertices[::25]])
    assert d > 0.3


def test_extraction_deterministic():
    a = extract_vortices(HOPF, GridSpec.cube(3.0, 81), 0.0)
    b = extract_vortices(HOPF, GridSpec.cube(3.0, 81), 0.0)
    assert len(a.curves) == len(b.curves)
    for ca, cb in zip(a.curves, b.curves):
        np.testing.assert_array_equal(ca.vertices, cb.vertices)


def test_reversed_trace_gives_same_vertex_set():
    params = TraceParams()
    grid = GridSpec.cube(2.0, 41)
    seed = refine_seed(CIRCLE, [1.01, 0.0, 0.01], 0.0, params)
    _, grad = _eval(CIRCLE, 0.0, seed)
    tau = _tangent(grad, params)
    fwd, closed_f, _ = _march(CIRCLE, 0.0, seed, tau, +1, params, grid)
    bwd, closed_b, _ = _march(CIRCLE, 0.0, seed, -tau, -1, params, grid)
    assert closed_f and closed_b
    fwd = np.array(fwd)
    bwd = np.array(bwd)
    d = np.sqrt(((fwd[:, None, :] - bwd[None, :, :]) ** 2).sum(axis=2))
    # one-sided set distances below the trace step
    assert d.min(axis=1).max() < params.step
    assert d.min(axis=0).max() < params.step


def test_empty_extraction_is_valid():
    grid = GridSpec(((3.0, 5.0), (3.0, 5.0), (3.0, 5.0)), 9)
    vs = extract_vortices(CIRCLE, grid, 0.0)
    assert vs.curves == []


def test_extraction_stable_under_grid_refinement():
    # doubled resolution and halved step give the same component structure
    # and the same pairwise linking
    from vortexknots.topology import linking_number

    coarse = extract_vortices(HOPF, GridSpec.cube(3.0, 41), 0.0,
                              TraceParams(step=0.04))
    fine = extract_vortices(HOPF, GridSpec.cube(3.0, 81), 0.0,
                            TraceParams(step=0.02))
    assert len(coarse.curves) == len(fine.curves) == 2
    assert all(c.closed for c in coarse.curves + fine.curves)
    lk_coarse = linking_number(coarse.curves[0], coarse.curves[1])
    lk_fine = linking_number(fine.curves[0], fine.curves[1])
    assert abs(abs(lk_coarse) - abs(lk_fine)) < 0.01
