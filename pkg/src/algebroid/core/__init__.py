"""Lie-Rinehart algebras, connections, forms and their differentials."""

from .algebra import BaseAlgebra, Derivation, RModule
from .catalog import abelian, affine_line, heisenberg, sl2, sl2_plus_line
from .forms import (
    Cochain,
    Connection,
    ConnectionMismatch,
    DegreeOutOfRange,
    EndCochain,
    FormSpace,
    NotFlat,
    betti_numbers,
    bianchi_residual,
    ce_apply,
    ce_differential,
    cohomology,
    cup_curvature,
    curvature,
    form_space,
    graded_bracket,
    trivial_coefficients,
)
from .lierinehart import LieRinehart, ValidationFailure, validate_lie_rinehart
from .subobjects import CanonicalSubobjects, NotTotallyIntransitive, canonical_subobjects, center_basis

__all__ = [
    "BaseAlgebra", "CanonicalSubobjects", "Cochain", "Connection", "ConnectionMismatch",
    "DegreeOutOfRange", "Derivation", "EndCochain", "FormSpace", "LieRinehart", "NotFlat",
    "NotTotallyIntransitive", "RModule", "ValidationFailure", "abelian", "affine_line",
    "betti_numbers", "bianchi_residual", "canonical_subobjects", "ce_apply", "ce_differential",
    "center_basis", "cohomology", "cup_curvature", "curvature", "form_space", "graded_bracket",
    "heisenberg", "sl2", "sl2_plus_line", "trivial_coefficients", "validate_lie_rinehart",
]
