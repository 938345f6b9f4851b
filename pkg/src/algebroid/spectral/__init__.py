"""The spectral sequence of the filtration by L-degree, and its split description."""

from .analysis import (
    D1Result,
    D2Result,
    NotACocycle,
    NotInZ2,
    d1_evaluate,
    d1_well_defined_check,
    d2_evaluate,
    e1_isomorphism_check,
    random_d0_cocycle,
    random_splitting_family,
)
from .pages import (
    FilteredComplex,
    NotWellDefined,
    SpectralPage,
    SpectralSequence,
    convergence_check,
    d_squared_zero,
    page_homology_dims,
    run_spectral_sequence,
    spectral_page,
)
from .split import ExtensionComplex, SplitSpace, SplittingFamily, det, evaluate_split

__all__ = [
    "D1Result", "D2Result", "ExtensionComplex", "FilteredComplex", "NotACocycle", "NotInZ2",
    "NotWellDefined", "SpectralPage", "SpectralSequence", "SplitSpace", "SplittingFamily",
    "convergence_check", "d1_evaluate", "d1_well_defined_check", "d2_evaluate", "d_squared_zero",
    "det", "e1_isomorphism_check", "evaluate_split", "page_homology_dims", "random_d0_cocycle", "random_splitting_family", "run_spectral_sequence",
    "spectral_page",
]
