"""Čech machinery over finite nerves: double complexes, lifting triples, gluing."""

from .double import DoubleComplex, TotalComplex, constant_form_complex, les_crosscheck, truncate_total_complex
from .lifting import (
    GlobalObstruction,
    GluedExtension,
    LiftingTriple,
    NoPhiSolution,
    ObstructionTriple,
    TrivializationInvalid,
    build_lifting_triple,
    cocycle_is_zero,
    global_difference,
    global_obstruction_class,
    glue_extension,
    obstruction_triple,
    perturb_triple,
    shift_triple,
    torsor_action_global,
    total_complex,
    triple_vector,
    trivialization,
    verify_cocycle,
)
from .nerve import MissingRestriction, Nerve, NotFaceClosed, SheafData, cech_cohomology, cech_complex, cech_differential, faces

__all__ = [
    "DoubleComplex", "GlobalObstruction", "GluedExtension", "LiftingTriple", "MissingRestriction",
    "Nerve", "NoPhiSolution", "NotFaceClosed", "ObstructionTriple", "SheafData", "TotalComplex",
    "TrivializationInvalid", "build_lifting_triple", "cech_cohomology", "cech_complex",
    "cech_differential", "cocycle_is_zero", "constant_form_complex", "faces", "global_difference",
    "global_obstruction_class", "glue_extension", "les_crosscheck", "obstruction_triple",
    "perturb_triple", "shift_triple", "torsor_action_global", "total_complex", "triple_vector",
    "trivialization", "truncate_total_complex", "verify_cocycle",
]
