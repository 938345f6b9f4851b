"""Center, derivations, inner derivations and outer derivations of a
totally intransitive Lie-Rinehart algebra.

Elements of Der_D(L) are pairs (matrix on the Q-space of L, derivation of R).
They are flattened as the dim(L)^2 matrix entries (row-major) followed by the
dim(R)^2 entries of the symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..linalg import (
    MatrixQ,
    ZERO,
    Subquotient,
    kernel_basis,
    row_space_basis,
    subquotient,
    unit_vec,
)
from .algebra import Derivation, RModule
from .lierinehart import LieRinehart


class NotTotallyIntransitive(ValueError):
    pass


def flatten_pair(mat: MatrixQ, sym: MatrixQ) -> tuple:
    n, r = mat.rows, sym.rows
    return tuple(mat[i, j] for i in range(n) for j in range(n)) + tuple(sym[i, j] for i in range(r) for j in range(r))


def unflatten_pair(v: Sequence, n: int, r: int) -> tuple[MatrixQ, MatrixQ]:
    mat = MatrixQ(n, n, {(i, j): v[i * n + j] for i in range(n) for j in range(n)})
    off = n * n
    sym = MatrixQ(r, r, {(i, j): v[off + i * r + j] for i in range(r) for j in range(r)})
    return mat, sym


@dataclass(frozen=True)
class CanonicalSubobjects:
    center: tuple          # Q-basis of Z(L)
    der_o: tuple           # flattened pairs with zero symbol
    ad: tuple              # flattened pairs (ad_x, 0), spanning set reduced to a basis
    der_d: tuple           # flattened pairs
    out_d: Subquotient     # Der_D / ad
    ideal_check: bool      # [Der_D, ad] ⊆ ad

    @property
    def dims(self) -> dict:
        return {"center": len(self.center), "der_o": len(self.der_o), "ad": len(self.ad),
                "der_d": len(self.der_d), "out_d": self.out_d.dim}


def center_basis(L: LieRinehart) -> list[tuple]:
    d = L.dim
    blocks = MatrixQ(0, d)
    for v in range(d):
        # column u of this block is [e_u, e_v]
        cols = [L.basis_bracket(u, v) for u in range(d)]
        blocks = blocks.vstack(MatrixQ.from_columns(cols, d))
    return row_space_basis(kernel_basis(blocks), d)


def _der_d_system(L: LieRinehart, symbol_free: bool) -> list[tuple]:
    """Solutions (D, sigma) of the first-order and derivation conditions."""
    d = L.dim
    R = L.base
    r = R.dim
    M = L.module
    der_basis = [] if symbol_free else list(R.derivation_basis)
    nvar = d * d + len(der_basis)

    def var(i, j):
        return i * d + j

    rows = []
    # D(f x) - f D(x) - sigma(f) x = 0 for base basis f and Q-basis x
    for a in range(r):
        act = M.action[a]
        for x in range(d):
            fx = act.column(x)
            for i in range(d):
                row = [ZERO] * nvar
                for k, c in enumerate(fx):
                    if c:
                        row[var(i, k)] += c
                for k in range(d):
                    c = act[i, k]
                    if c:
                        row[var(k, x)] -= c
                for t, der in enumerate(der_basis):
                    sf = der(unit_vec(r, a))
                    sx = M.act(sf).column(x)
                    if sx[i]:
                        row[d * d + t] -= sx[i]
                if any(row):
                    rows.append(row)
    # D[x,y] - [Dx, y] - [x, Dy] = 0 on Q-basis pairs
    for x in range(d):
        for y in range(x + 1, d):
            bxy = L.basis_bracket(x, y)
            for i in range(d):
                row = [ZERO] * nvar
                for k, c in enumerate(bxy):
                    if c:
                        row[var(i, k)] += c
                for k in range(d):
                    c1 = L.basis_bracket(k, y)[i]
                    if c1:
                        row[var(k, x)] -= c1
                    c2 = L.basis_bracket(x, k)[i]
                    if c2:
                        row[var(k, y)] -= c2
                if any(row):
                    rows.append(row)
    sols = kernel_basis(MatrixQ.from_rows(rows, nvar)) if rows else [unit_vec(nvar, t) for t in range(nvar)]
    out = []
    for s in sols:
        mat = MatrixQ(d, d, {(i, j): s[var(i, j)] for i in range(d) for j in range(d)})
        sym = MatrixQ(r, r)
        for t, der in enumerate(der_basis):
            if s[d * d + t]:
                sym = sym + der.matrix.scale(s[d * d + t])
        out.append(flatten_pair(mat, sym))
    return row_space_basis(out, d * d + r * r)


def canonical_subobjects(L: LieRinehart) -> CanonicalSubobjects:
    if not L.is_totally_intransitive():
        raise NotTotallyIntransitive("the anchor of L is not zero")
    d, r = L.dim, L.base.dim
    amb = d * d + r * r
    z = center_basis(L)
    der_o = _der_d_system(L, symbol_free=True)
    der_d = _der_d_system(L, symbol_free=False)
    ad = row_space_basis([flatten_pair(L.ad_matrix(unit_vec(d, u)), MatrixQ(r, r)) for u in range(d)], amb)
    out = subquotient(der_d, ad, amb)
    ok = True
    for v in der_d:
        D, _ = unflatten_pair(v, d, r)
        for u in range(d):
            x = unit_vec(d, u)
            com = D @ L.ad_matrix(x) - L.ad_matrix(x) @ D
            if com != L.ad_matrix(D.apply(x)):
                ok = False
    return CanonicalSubobjects(tuple(z), tuple(der_o), tuple(ad), tuple(der_d), out, ok)


def submodule(M: RModule, basis: Sequence[Sequence]) -> tuple[RModule, MatrixQ]:
    """An R-stable subspace as a module of its own, with the inclusion matrix."""
    from ..linalg import solve_linear

    basis = [tuple(b) for b in basis]
    k = len(basis)
    inc = MatrixQ.from_columns(basis, M.dim) if k else MatrixQ(M.dim, 0)
    acts = []
    for a in range(M.base.dim):
        cols = []
        for b in basis:
            c = solve_linear(inc, M.action[a].apply(b))
            if c is None:
                raise ValueError("subspace is not stable under the base algebra")
            cols.append(c)
        acts.append(MatrixQ.from_columns(cols, k) if k else MatrixQ(0, 0))
    labels = tuple(f"z{i + 1}" for i in range(k))
    return RModule(M.base, k, tuple(acts), labels), inc


def restrict_operator(op: MatrixQ, inc: MatrixQ) -> MatrixQ:
    """Matrix of ``op`` on an invariant subspace with inclusion ``inc``."""
    from ..linalg import solve_linear

    cols = []
    for j in range(inc.cols):
        c = solve_linear(inc, op.apply(inc.column(j)))
        if c is None:
            raise ValueError("subspace is not invariant")
        cols.append(c)
    return MatrixQ.from_columns(cols, inc.cols) if cols else MatrixQ(0, 0)


def derivation_from_flat(v: Sequence, d: int, r: int) -> tuple[MatrixQ, Derivation]:
    mat, sym = unflatten_pair(v, d, r)
    return mat, Derivation(sym)
