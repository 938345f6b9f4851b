"""The Atiyah algebroid of O(n) on the projective line, in a truncated two-chart model."""

from .checks import (
    Pieces,
    chern_class,
    cup_with_phi,
    d1_decomposition_residual,
    d1_well_defined_residual,
    degeneration_check,
    dims_report,
    filtered_complex,
    glue_check,
    hypercohomology_atiyah,
    les_connecting,
    lifting_report,
    pinned_generators,
    random_d0_cocycle,
    random_family,
    sheaf_dims,
    truncation_certificate,
    twist_check,
)
from .laurent import Laurent
from .model import (
    AtiyahExtensionData,
    OutsideWindow,
    P1Model,
    TruncationUnstable,
    atiyah_data,
    build_p1_model,
    line_bundle_cohomology,
    line_bundle_sheaf,
    operator_in_chart0,
    total_dT,
    transition,
)

__all__ = [
    "AtiyahExtensionData", "Laurent", "OutsideWindow", "P1Model", "Pieces", "TruncationUnstable",
    "atiyah_data", "build_p1_model", "chern_class", "cup_with_phi", "d1_decomposition_residual",
    "d1_well_defined_residual", "degeneration_check", "dims_report", "filtered_complex", "glue_check",
    "hypercohomology_atiyah", "les_connecting", "lifting_report", "line_bundle_cohomology",
    "line_bundle_sheaf", "operator_in_chart0", "pinned_generators", "random_d0_cocycle",
    "random_family", "sheaf_dims", "total_dT", "transition", "truncation_certificate", "twist_check",
]
