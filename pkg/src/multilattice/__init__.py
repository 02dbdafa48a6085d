"""Exact exponents and lattice structure of rank-2 multiarrangements.

The package computes, in exact arithmetic, the exponents and bases of the
derivation module of a 2-multiarrangement, maps the exponent gap over
finite windows of the multiplicity lattice, and mechanically verifies the
structural facts the gap obeys (unit covering steps, ball-shaped
components with unique centers, generator transport along chains,
independence across components, and the certification criteria built on
them), with special support for the rank-2 Coxeter arrangements.
"""

from .cache import ResultCache
from .coxeter import (
    GroupElement,
    act,
    check_delta_invariance,
    coxeter_arrangement,
    group_closure,
    near_constant_exponents,
    standard_generators,
    symmetric_peak_certificate,
)
from .dermod import (
    ExponentResult,
    SaitoVerdict,
    delta,
    exponents,
    full_basis,
    graded_dimension,
    in_module,
    min_derivation,
    verify_saito,
)
from .errors import MultilatticeError
from .explorer import Component, PointResult, ScanResult, centers, components, scan
from .field import FieldSpec, ModInt, QuadElem
from .lattice import (
    ball,
    box_points,
    distance,
    is_balanced,
    meet_join,
    parse_multiplicity,
    saturated_chain,
)
from .poly import (
    Arrangement,
    Derivation,
    HomogPoly,
    LinearForm,
    defining_polynomial,
    saito_determinant,
)
from .theorems import (
    CandidateMap,
    ThetaOracle,
    Verdict,
    basis_for,
    certify_centers,
    certify_support,
    check_ball_structure,
    check_basis_step_and_path,
    check_covering_steps,
    check_independency,
    check_singleton_gaps,
    construct_basis_between,
    reconstruct_components,
)

__version__ = "1.0.0"

__all__ = [
    "Arrangement", "CandidateMap", "Component", "Derivation", "ExponentResult",
    "FieldSpec", "GroupElement", "HomogPoly", "LinearForm", "ModInt",
    "MultilatticeError", "PointResult", "QuadElem", "ResultCache",
    "SaitoVerdict", "ScanResult", "ThetaOracle", "Verdict", "act", "ball",
    "basis_for", "box_points", "centers", "certify_centers", "certify_support",
    "check_ball_structure", "check_basis_step_and_path",
    "check_covering_steps", "check_delta_invariance", "check_independency",
    "check_singleton_gaps", "components", "construct_basis_between",
    "coxeter_arrangement", "defining_polynomial", "delta", "distance",
    "exponents", "full_basis", "graded_dimension", "group_closure",
    "in_module", "is_balanced", "meet_join", "min_derivation",
    "near_constant_exponents", "parse_multiplicity", "reconstruct_components",
    "saito_determinant", "saturated_chain", "scan", "standard_generators",
    "symmetric_peak_certificate", "verify_saito",
]
