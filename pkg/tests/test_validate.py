"""Maxwell residuals, quadratures, and the epsilon scan."""

import numpy as np
import pytest

from vortexknots.field import BASE_FIELD_PRESET, KnottedFieldSpec
from vortexknots.linkpoly import preset
from vortexknots.validate import (
    epsilon_scan,
    helicity,
    maxwell_residuals,
    total_energy,
)
from vortexknots.vortex import GridSpec, TraceParams


def events(n, half_width, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(-half_width, half_width, (n, 4))


@pytest.mark.parametrize("name", [BASE_FIELD_PRESET, "hopf-link"])
def test_maxwell_residuals_small(name):
    spec = KnottedFieldSpec.from_preset(name)
    rep = maxwell_residuals(spec, events(200, 2.0, seed=50), 1e-3)
    assert rep.worst() < 1e-4


def test_maxwell_residuals_second_order():
    spec = KnottedFieldSpec.from_preset("hopf-link")
    ev = events(200, 2.0, seed=51)
    r1 = maxwell_residuals(spec, ev, 1e-3)
    r2 = maxwell_residuals(spec, ev, 5e-4)
    assert r1.worst() / r2.worst() == pytest.approx(4.0, rel=0.3)


def test_maxwell_rejects_bad_step():
    spec = KnottedFieldSpec.from_preset("hopf-link")
    with pytest.raises(ValueError):
        maxwell_residuals(spec, events(5, 1.0, seed=0), 0.0)


def test_energy_quadrature_positive_and_converging():
    spec = KnottedFieldSpec.from_preset(BASE_FIELD_PRESET)
    q10 = total_energy(spec, GridSpec.cube(10.0, 81), 0.0)
    q20 = total_energy(spec, GridSpec.cube(20.0, 161), 0.0)
    assert q10.value > 0
    assert abs(q20.value - q10.value) / q10.value < 0.01
    # independent oracle: the base field energy is 4 pi^2 in these units
    assert q10.value == pytest.approx(4 * np.pi**2, rel=1e-3)
    assert q10.tail_estimate >= 0


def test_energy_tail_exponent_is_measured():
    # the base field decays like r^-8 at fixed time, so the r^-6 tail model
    # must be flagged as untrusted
    spec = KnottedFieldSpec.from_preset(BASE_FIELD_PRESET)
    q = total_energy(spec, GridSpec.cube(10.0, 41), 0.0)
    assert q.decay_exponent == pytest.approx(-8.0, abs=0.5)
    assert not q.tail_trusted


def test_energy_factorization_bound():
    # u_L <= max|psi|^2 u_H pointwise implies the same for the integrals
    spec = KnottedFieldSpec.from_preset("hopf-link")
    base = KnottedFieldSpec.from_preset(BASE_FIELD_PRESET)
    grid = GridSpec.cube(6.0, 61)
    e_link = total_energy(spec, grid, 0.0).value
    e_base = total_energy(base, grid, 0.0).value
    # |psi| = |v^2 + w^2| <= |v|^2 + |w|^2 = 1 on the unit sphere
    assert e_link <= 1.0 * e_base + 1e-9


def test_helicity_conservation_and_grid_stability():
    spec = KnottedFieldSpec.from_preset("hopf-link")
    grid = GridSpec.cube(10.0, 101)
    hm0, he0 = helicity(spec, grid, 0.0)
    hm3, he3 = helicity(spec, grid, 3.0)
    assert abs(hm3 - hm0) / abs(hm0) < 0.02
    assert abs(he3 - he0) / abs(he0) < 0.02
    fine = GridSpec.cube(10.0, 201)
    hm0f, he0f = helicity(spec, fine, 0.0)
    assert abs(hm0f - hm0) / abs(hm0) < 0.005
    assert abs(he0f - he0) / abs(he0) < 0.005


def test_epsilon_scan_hopf_link_stable():
    h1, _ = preset("hopf-link")
    res = epsilon_scan(h1, [1.0, 0.5], GridSpec.cube(3.0, 61), 0.0,
                       TraceParams(step=0.02))
    assert res.stabilized_epsilon == 1.0
    for _, rep in res.entries:
        assert rep.component_count == 2
        assert abs(rep.linking_rounded[0, 1]) == 1


def test_epsilon_scan_validates_input():
    h1, _ = preset("hopf-link")
    with pytest.raises(ValueError, match="descending"):
        epsilon_scan(h1, [0.5, 1.0], GridSpec.cube(3.0, 61), 0.0)
    with pytest.raises(ValueError, match="nonempty"):
        epsilon_scan(h1, [], GridSpec.cube(3.0, 61), 0.0)
