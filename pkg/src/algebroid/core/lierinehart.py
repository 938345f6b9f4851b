"""Lie-Rinehart algebras: free modules over a base algebra with bracket and anchor."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence

from ..linalg import MatrixQ, ZERO, Q, is_zero_vec, unit_vec, vadd, vec, vsub, zero_vec
from .algebra import BaseAlgebra, Derivation, RModule


@dataclass(frozen=True)
class ValidationFailure:
    kind: str          # "alternating", "jacobi", "leibniz" or "anchor"
    indices: tuple     # Q-basis indices (base index for the function slot of leibniz)
    residual: tuple

    def describe(self, labels: Sequence[str], base_labels: Sequence[str] = ()) -> str:
        if self.kind == "leibniz":
            x, f, y = self.indices
            return f"leibniz fails on ({labels[x]}, {base_labels[f]}, {labels[y]})"
        return f"{self.kind} fails on (" + ", ".join(labels[i] for i in self.indices) + ")"


@dataclass(frozen=True)
class LieRinehart:
    """A Lie-Rinehart algebra free of finite rank over ``base``.

    The underlying Q-space has dimension ``rank * base.dim``; index
    ``i * base.dim + a`` is the element ``r_a * e_i``.  ``structure[(u, v)]``
    is the bracket of Q-basis elements u < v (absent pairs bracket to zero)
    and ``anchor[u]`` is the derivation attached to Q-basis element u.
    """

    base: BaseAlgebra
    rank: int
    structure: dict
    anchor: tuple
    labels: tuple = ()
    name: str = ""

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other

    # construction -------------------------------------------------------

    @classmethod
    def from_basis_data(cls, base: BaseAlgebra, rank: int, brackets: dict, anchors: Sequence | None = None,
                        labels: Sequence[str] | None = None, name: str = "") -> "LieRinehart":
        """Build from brackets and anchors on the R-basis.

        ``brackets[(i, j)]`` is a list of ``rank`` base-algebra coordinate
        vectors (the R-coefficients of ``[e_i, e_j]``).  ``anchors[i]`` is a
        Derivation or a matrix.  The bracket on all of the Q-space follows by
        the Leibniz rule.
        """
        n = base.dim
        dim = rank * n
        if anchors is None:
            anchors = [base.zero_derivation()] * rank
        anchors = [a if isinstance(a, Derivation) else Derivation(a) for a in anchors]
        rb = {}
        for (i, j), coeffs in brackets.items():
            v = []
            for c in coeffs:
                v.extend(vec(c))
            v = tuple(v)
            if i < j:
                rb[(i, j)] = v
            elif i > j:
                rb[(j, i)] = tuple(-x for x in v)
            elif not is_zero_vec(v):
                raise ValueError("bracket of a basis element with itself must vanish")

        def rbracket(i, j):
            if i == j:
                return zero_vec(dim)
            if i < j:
                return rb.get((i, j), zero_vec(dim))
            return tuple(-x for x in rb.get((j, i), zero_vec(dim)))

        def scale_by(f, x):
            # multiply an element of R^rank by a base element f
            out = []
            for i in range(rank):
                out.extend(base.multiply(f, x[i * n:(i + 1) * n]))
            return tuple(out)

        def basis_elt(i, f):
            out = [ZERO] * dim
            out[i * n:(i + 1) * n] = list(f)
            return tuple(out)

        structure = {}
        qanchor = []
        for i in range(rank):
            for a in range(n):
                fa = unit_vec(n, a)
                qanchor.append(Derivation(base.mult_matrix(fa) @ anchors[i].matrix))
        for u in range(dim):
            for v in range(u + 1, dim):
                i, a = divmod(u, n)
                j, b = divmod(v, n)
                fa, fb = unit_vec(n, a), unit_vec(n, b)
                # [fa e_i, fb e_j] = fa fb [e_i, e_j] + fa a(e_i)(fb) e_j - fb a(e_j)(fa) e_i
                val = scale_by(base.multiply(fa, fb), rbracket(i, j))
                val = vadd(val, basis_elt(j, base.multiply(fa, anchors[i](fb))))
                val = vsub(val, basis_elt(i, base.multiply(fb, anchors[j](fa))))
                if not is_zero_vec(val):
                    structure[(u, v)] = val
        if labels is None:
            labels = [f"e{i + 1}" for i in range(rank)]
        qlabels = tuple(labels[i] if n == 1 else f"{base.labels[a]}*{labels[i]}" for i in range(rank) for a in range(n))
        return cls(base, rank, structure, tuple(qanchor), qlabels, name)

    @classmethod
    def lie_algebra(cls, brackets: dict, dim: int, labels: Sequence[str] | None = None, name: str = "") -> "LieRinehart":
        """A Lie algebra over Q from structure constants ``{(i, j): vector}``."""
        base = BaseAlgebra.rationals()
        return cls.from_basis_data(base, dim, {k: [[c] for c in v] for k, v in brackets.items()},
                                   None, labels, name)

    # basic operations ---------------------------------------------------

    @property
    def dim(self) -> int:
        """Dimension of the underlying Q-space."""
        return self.rank * self.base.dim

    @property
    def rank_labels(self) -> tuple:
        n = self.base.dim
        return tuple(self.labels[i * n] for i in range(self.rank)) if n == 1 else tuple(
            lab.split("*", 1)[1] for lab in self.labels[::n])

    def basis_bracket(self, u: int, v: int) -> tuple:
        if u == v:
            return zero_vec(self.dim)
        if u < v:
            return self.structure.get((u, v), zero_vec(self.dim))
        return tuple(-x for x in self.structure.get((v, u), zero_vec(self.dim)))

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for (u, v), val in self.structure.items():
            c = x[u] * y[v] - x[v] * y[u]
            if c:
                for k, w in enumerate(val):
                    if w:
                        out[k] += c * w
        return tuple(out)

    def anchor_of(self, x: Sequence) -> Derivation:
        m = MatrixQ(self.base.dim, self.base.dim)
        for u, c in enumerate(x):
            if c:
                m = m + self.anchor[u].matrix.scale(c)
        return Derivation(m)

    def r_basis_element(self, i: int) -> tuple:
        """The Q-vector of the i-th R-basis element e_i = 1 * e_i."""
        n = self.base.dim
        out = [ZERO] * self.dim
        for k, c in enumerate(self.base.unit):
            out[i * n + k] = c
        return tuple(out)

    def r_coefficients(self, x: Sequence) -> list[tuple]:
        """Split a Q-vector into its R-coefficients on the R-basis."""
        n = self.base.dim
        return [tuple(x[i * n:(i + 1) * n]) for i in range(self.rank)]

    def from_r_coefficients(self, coeffs: Sequence[Sequence]) -> tuple:
        out = []
        for c in coeffs:
            out.extend(c)
        return tuple(out)

    def scalar_mul(self, f: Sequence, x: Sequence) -> tuple:
        n = self.base.dim
        out = []
        for i in range(self.rank):
            out.extend(self.base.multiply(f, x[i * n:(i + 1) * n]))
        return tuple(out)

    @cached_property
    def module(self) -> RModule:
        """The underlying free R-module."""
        return RModule.free(self.base, self.rank, list(self.rank_labels))

    def ad_matrix(self, x: Sequence) -> MatrixQ:
        cols = [self.bracket(x, unit_vec(self.dim, v)) for v in range(self.dim)]
        return MatrixQ.from_columns(cols, self.dim)

    @cached_property
    def ad_map(self) -> MatrixQ:
        """The Q-linear map x -> ad_x into dim^2 flattened (row-major) matrices."""
        d = self.dim
        cols = []
        for u in range(d):
            m = self.ad_matrix(unit_vec(d, u))
            cols.append(tuple(m[i, j] for i in range(d) for j in range(d)))
        return MatrixQ.from_columns(cols, d * d)

    def is_totally_intransitive(self) -> bool:
        return all(a.is_zero() for a in self.anchor)


def validate_lie_rinehart(B: LieRinehart) -> list[ValidationFailure]:
    """Every failed basis identity: alternation, Jacobi, Leibniz, anchor morphism."""
    fails: list[ValidationFailure] = []
    d = B.dim
    n = B.base.dim
    e = [unit_vec(d, u) for u in range(d)]
    for u in range(d):
        for v in range(u + 1, d):
            if B.bracket(e[u], e[v]) != vsub(zero_vec(d), B.bracket(e[v], e[u])):
                fails.append(ValidationFailure("alternating", (u, v), B.bracket(e[u], e[v])))
    for u, v, w in combinations(range(d), 3):
        jac = vadd(vadd(B.bracket(e[u], B.bracket(e[v], e[w])), B.bracket(e[v], B.bracket(e[w], e[u]))),
                   B.bracket(e[w], B.bracket(e[u], e[v])))
        if not is_zero_vec(jac):
            fails.append(ValidationFailure("jacobi", (u, v, w), jac))
    for u in range(d):
        for a in range(n):
            f = unit_vec(n, a)
            af = B.anchor[u](f)
            for v in range(d):
                lhs = B.bracket(e[u], B.scalar_mul(f, e[v]))
                rhs = vadd(B.scalar_mul(f, B.bracket(e[u], e[v])), B.scalar_mul(af, e[v]))
                if lhs != rhs:
                    fails.append(ValidationFailure("leibniz", (u, a, v), vsub(lhs, rhs)))
    for u in range(d):
        for v in range(u + 1, d):
            lhs = B.anchor_of(B.bracket(e[u], e[v])).matrix
            rhs = B.anchor[u].commutator(B.anchor[v]).matrix
            if lhs != rhs:
                diff = lhs - rhs
                fails.append(ValidationFailure("anchor", (u, v), tuple(v for _, v in diff.items())))
    for u in range(d):
        if B.anchor[u].leibniz_failures(B.base):
            fails.append(ValidationFailure("anchor", (u,), ()))
    return fails


def direct_sum_lie_algebras(g: LieRinehart, h: LieRinehart, name: str = "") -> LieRinehart:
    """g ⊕ h for two Lie algebras over Q."""
    dg = g.dim
    brackets = {}
    for (u, v), val in g.structure.items():
        brackets[(u, v)] = tuple(val) + (ZERO,) * h.dim
    for (u, v), val in h.structure.items():
        brackets[(u + dg, v + dg)] = (ZERO,) * dg + tuple(val)
    return LieRinehart.lie_algebra(brackets, dg + h.dim, list(g.labels) + list(h.labels), name)


def rational_structure(values: dict) -> dict:
    return {k: tuple(Q(x) for x in v) for k, v in values.items()}
