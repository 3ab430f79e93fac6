"""Null electromagnetic fields with knotted optical vortices.

The package constructs exact finite-energy solutions of Maxwell's equations
whose lines of zero intensity form a prescribed algebraic link, extracts
those vortex curves at any time slice, and verifies the field identities and
the vortex topology numerically.
"""

from .jets import ComplexJet, Event, coordinate_jets
from .linkpoly import (
    BivariatePolynomial,
    NewtonPair,
    PolynomialError,
    parse_poly_file,
    preset,
    preset_names,
    torus_polynomial,
)
from .bateman import (
    bateman_condition_residual,
    bateman_sign,
    eval_bateman,
    hopf_field,
)
from .field import FieldSample, KnottedFieldSpec, knotted_field
from .vortex import GridSpec, TraceParams, VortexCurve, VortexSet, extract_vortices
from .topology import TopologyReport, linking_number, phase_windings, topology_report
from .validate import epsilon_scan, helicity, maxwell_residuals, total_energy

__version__ = "0.1.0"

__all__ = [
    "BivariatePolynomial",
    "ComplexJet",
    "Event",
    "FieldSample",
    "GridSpec",
    "KnottedFieldSpec",
    "NewtonPair",
    "PolynomialError",
    "TopologyReport",
    "TraceParams",
    "VortexCurve",
    "VortexSet",
    "bateman_condition_residual",
    "bateman_sign",
    "coordinate_jets",
    "epsilon_scan",
    "eval_bateman",
    "extract_vortices",
    "helicity",
    "hopf_field",
    "knotted_field",
    "linking_number",
    "maxwell_residuals",
    "parse_poly_file",
    "phase_windings",
    "preset",
    "preset_names",
    "topology_report",
    "torus_polynomial",
    "total_energy",
]
