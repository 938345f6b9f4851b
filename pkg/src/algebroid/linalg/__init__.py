"""Exact linear algebra over the rationals."""

from .complexes import CochainComplex, connecting_map, induced_map, les_exactness
from .matrix import (
    ONE,
    ZERO,
    MatrixQ,
    Q,
    Rational,
    annihilator,
    block_matrix,
    coordinates,
    image_basis,
    in_span,
    intersect,
    is_zero_vec,
    kernel_basis,
    lincomb,
    preimage,
    rank,
    row_space_basis,
    rref,
    solve_linear,
    span_rank,
    unit_vec,
    vadd,
    vec,
    vscale,
    vsub,
    zero_vec,
)
from .subquotient import BoundaryNotInCycles, NotACycle, Subquotient, subquotient

__all__ = [
    "BoundaryNotInCycles", "CochainComplex", "MatrixQ", "NotACycle", "ONE", "Q",
    "Rational", "Subquotient", "ZERO", "annihilator", "block_matrix",
    "connecting_map", "coordinates", "image_basis", "in_span", "induced_map",
    "intersect", "is_zero_vec", "kernel_basis", "les_exactness", "lincomb",
    "preimage", "rank", "row_space_basis", "rref", "solve_linear", "span_rank",
    "subquotient", "unit_vec", "vadd", "vec", "vscale", "vsub", "zero_vec",
]
