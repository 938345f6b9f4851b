"""Local extension theory: couplings, lifting pairs, obstructions and the H^2 torsor."""

from .engine import (
    CenterData,
    CenterEscape,
    Coupling,
    CouplingMismatch,
    DifferenceClass,
    EquivalenceWitness,
    ExtensionStructure,
    InvalidCoupling,
    JacobiFailure,
    LiftingPair,
    NoRhoSolution,
    NotASection,
    NotClosed,
    ObstructionClass,
    build_extension,
    change_lifting_pair,
    difference_class,
    differential_shift_check,
    extension_algebra,
    extensions_equivalent,
    is_bracket_morphism,
    lift_coupling,
    obstruction_class,
    obstruction_cochain,
    pair_from_data,
    section_from_columns,
    solve_ad,
    splitting_to_pair,
    torsor_action,
    trivial_coupling,
)

__all__ = [
    "CenterData", "CenterEscape", "Coupling", "CouplingMismatch", "DifferenceClass",
    "EquivalenceWitness", "ExtensionStructure", "InvalidCoupling", "JacobiFailure", "LiftingPair",
    "NoRhoSolution", "NotASection", "NotClosed", "ObstructionClass", "build_extension",
    "change_lifting_pair", "difference_class", "differential_shift_check", "extension_algebra",
    "extensions_equivalent", "is_bracket_morphism", "lift_coupling", "obstruction_class",
    "obstruction_cochain", "pair_from_data", "section_from_columns", "solve_ad", "splitting_to_pair",
    "torsor_action", "trivial_coupling",
]
