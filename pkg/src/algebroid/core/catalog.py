"""Small Lie algebras and Lie-Rinehart algebras used as fixtures and examples."""

from __future__ import annotations

from ..linalg import MatrixQ
from .algebra import BaseAlgebra, Derivation
from .lierinehart import LieRinehart, direct_sum_lie_algebras


def abelian(n: int, name: str | None = None) -> LieRinehart:
    return LieRinehart.lie_algebra({}, n, [f"e{i + 1}" for i in range(n)], name or f"Q^{n}")


def heisenberg() -> LieRinehart:
    """[e1, e2] = e3."""
    return LieRinehart.lie_algebra({(0, 1): (0, 0, 1)}, 3, ["e1", "e2", "e3"], "heis3")


def sl2() -> LieRinehart:
    """Basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    return LieRinehart.lie_algebra({(0, 1): (0, 2, 0), (0, 2): (0, 0, -2), (1, 2): (1, 0, 0)},
                                   3, ["h", "e", "f"], "sl2")


def affine_line() -> LieRinehart:
    """The 2-dimensional nonabelian Lie algebra [e1, e2] = e2."""
    return LieRinehart.lie_algebra({(0, 1): (0, 1)}, 2, ["e1", "e2"], "aff1")


def sl2_plus_line() -> LieRinehart:
    return direct_sum_lie_algebras(sl2(), abelian(1), "sl2+Q")


def dual_numbers_tangent() -> LieRinehart:
    """Rank one over R = Q[x]/(x^2), spanned by the Euler field x d/dx.

    A transitive example with a nontrivial base algebra.
    """
    R = BaseAlgebra.truncated_polynomials(2)
    euler = Derivation(MatrixQ(2, 2, {(1, 1): 1}))
    return LieRinehart.from_basis_data(R, 1, {}, [euler], ["E"], "euler")


def lie_algebra_over(base: BaseAlgebra, g: LieRinehart, name: str = "") -> LieRinehart:
    """The constant bundle R ⊗ g of Lie algebras (zero anchor)."""
    br = {}
    for (u, v), val in g.structure.items():
        br[(u, v)] = [_scalar(base, c) for c in val]
    return LieRinehart.from_basis_data(base, g.dim, br, None, list(g.labels), name or f"{g.name}⊗R")


def _scalar(base: BaseAlgebra, c) -> tuple:
    return tuple(c * u for u in base.unit)


def broken_anchor() -> LieRinehart:
    """Rank two with [e1, e2] = e1 but commuting nonzero anchors: fails the anchor law.

    Over R = Q[x]/(x^2) the anchors x d/dx and 2 x d/dx commute while the
    bracket demands anchor(e1) = [anchor(e1), anchor(e2)] = 0.
    """
    R = BaseAlgebra.truncated_polynomials(2)
    d1 = Derivation(MatrixQ(2, 2, {(1, 1): 1}))
    d2 = Derivation(MatrixQ(2, 2, {(1, 1): 2}))
    return LieRinehart.from_basis_data(R, 2, {(0, 1): [(1, 0), (0, 0)]}, [d1, d2], ["e1", "e2"], "broken")


def jacobi_broken() -> LieRinehart:
    """A bracket on Q^3 violating Jacobi: [e1,e2] = e3, [e2,e3] = e2, [e1,e3] = e1 + e2."""
    return LieRinehart.lie_algebra({(0, 1): (0, 0, 1), (1, 2): (0, 1, 0), (0, 2): (1, 1, 0)}, 3,
                                   ["e1", "e2", "e3"], "broken-jacobi")


CATALOG = {
    "abelian1": lambda: abelian(1),
    "abelian2": lambda: abelian(2),
    "abelian3": lambda: abelian(3),
    "heis3": heisenberg,
    "sl2": sl2,
    "aff1": affine_line,
    "sl2+Q": sl2_plus_line,
}
