"""Alternating forms with values in a module, the twisted differential,
curvature, and the cup and bracket products on forms.

A p-form is stored on strictly increasing p-tuples of R-basis indices of the
source algebroid; its value on any tuple of elements is the alternating
R-multilinear extension.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from math import comb
from typing import Callable, Sequence

from ..linalg import MatrixQ, ZERO, Q, is_zero_vec, unit_vec, vadd, vscale, vsub, zero_vec
from .algebra import RModule
from .lierinehart import LieRinehart


class DegreeOutOfRange(ValueError):
    pass


class ConnectionMismatch(ValueError):
    pass


class NotFlat(ValueError):
    def __init__(self, pair, value):
        super().__init__(f"curvature does not vanish on basis pair {pair}")
        self.pair = pair
        self.value = value


def sort_sign(t: Sequence[int]) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``t`` and the sorted tuple; sign 0 on repeats."""
    t = list(t)
    if len(set(t)) < len(t):
        return 0, ()
    sign = 1
    for i in range(len(t)):
        for j in range(len(t) - 1 - i):
            if t[j] > t[j + 1]:
                t[j], t[j + 1] = t[j + 1], t[j]
                sign = -sign
    return sign, tuple(t)


def shuffles(items: Sequence[int], p: int):
    """(p, q)-shuffles of an increasing tuple: yields (sign, first p, last q)."""
    n = len(items)
    for pos in combinations(range(n), p):
        rest = tuple(i for i in range(n) if i not in pos)
        # sign of the permutation (pos, rest) of 0..n-1
        inv = sum(1 for a in pos for b in rest if a > b)
        yield (-1 if inv % 2 else 1), tuple(items[i] for i in pos), tuple(items[i] for i in rest)


class Cochain:
    """An alternating form on a free module of rank ``rank`` with values in Q^width."""

    __slots__ = ("degree", "rank", "width", "values")

    def __init__(self, degree: int, rank: int, width: int, values: dict | None = None):
        self.degree = degree
        self.rank = rank
        self.width = width
        self.values = {}
        for t, v in (values or {}).items():
            s, st = sort_sign(t)
            if s == 0:
                continue
            v = tuple(Q(x) for x in v)
            if len(v) != width:
                raise ValueError("value has the wrong width")
            if s < 0:
                v = tuple(-x for x in v)
            old = self.values.get(st)
            v = v if old is None else vadd(old, v)
            if is_zero_vec(v):
                self.values.pop(st, None)
            else:
                self.values[st] = v

    @classmethod
    def zero(cls, degree: int, rank: int, width: int) -> "Cochain":
        return cls(degree, rank, width)

    def __call__(self, *idx: int) -> tuple:
        """Value on R-basis indices in any order (alternating extension)."""
        s, st = sort_sign(idx)
        if s == 0:
            return zero_vec(self.width)
        v = self.values.get(st)
        if v is None:
            return zero_vec(self.width)
        return v if s > 0 else tuple(-x for x in v)

    def _check(self, other: "Cochain"):
        if (self.degree, self.rank, self.width) != (other.degree, other.rank, other.width):
            raise ValueError("cochains live in different spaces")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._check(other)
        out = dict(self.values)
        for t, v in other.values.items():
            out[t] = vadd(out[t], v) if t in out else v
        return Cochain(self.degree, self.rank, self.width, out)

    def __neg__(self) -> "Cochain":
        return Cochain(self.degree, self.rank, self.width, {t: vscale(-1, v) for t, v in self.values.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def scale(self, c) -> "Cochain":
        return Cochain(self.degree, self.rank, self.width, {t: vscale(c, v) for t, v in self.values.items()})

    def map_values(self, m: MatrixQ, width: int | None = None) -> "Cochain":
        w = m.rows if width is None else width
        return Cochain(self.degree, self.rank, w, {t: m.apply(v) for t, v in self.values.items()})

    def is_zero(self) -> bool:
        return not self.values

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cochain):
            return NotImplemented
        return (self.degree, self.rank, self.width) == (other.degree, other.rank, other.width) and self.values == other.values

    def __repr__(self) -> str:
        return f"Cochain(p={self.degree}, {dict(sorted(self.values.items()))})"

    def support(self) -> list[tuple]:
        return sorted(self.values)

    def to_vector(self) -> tuple:
        out = []
        for t in combinations(range(self.rank), self.degree):
            out.extend(self.values.get(t, zero_vec(self.width)))
        return tuple(out)

    @classmethod
    def from_vector(cls, degree: int, rank: int, width: int, v: Sequence) -> "Cochain":
        vals = {}
        for k, t in enumerate(combinations(range(rank), degree)):
            chunk = tuple(v[k * width:(k + 1) * width])
            if not is_zero_vec(chunk):
                vals[t] = chunk
        return cls(degree, rank, width, vals)


@dataclass(frozen=True)
class FormSpace:
    """Omega^p of a rank-n source with values in a module of Q-dimension w."""

    rank: int
    width: int
    degree: int

    @cached_property
    def tuples(self) -> list[tuple]:
        return list(combinations(range(self.rank), self.degree))

    @property
    def dim(self) -> int:
        return len(self.tuples) * self.width

    def basis(self) -> list[Cochain]:
        out = []
        for t in self.tuples:
            for a in range(self.width):
                out.append(Cochain(self.degree, self.rank, self.width, {t: unit_vec(self.width, a)}))
        return out

    def labels(self, source_labels: Sequence[str], value_labels: Sequence[str]) -> list[str]:
        out = []
        for t in self.tuples:
            form = "^".join(f"{source_labels[i]}*" for i in t) or "1"
            for a in range(self.width):
                out.append(f"{form}⊗{value_labels[a]}" if self.width > 1 else form)
        return out


def form_space(B: LieRinehart, M: RModule, p: int) -> FormSpace:
    if p < 0:
        raise DegreeOutOfRange(f"degree {p} is negative")
    return FormSpace(B.rank, M.dim, p)


def matrix_of(op: Callable[[Cochain], Cochain], source: FormSpace, target: FormSpace) -> MatrixQ:
    cols = [op(c).to_vector() for c in source.basis()]
    return MatrixQ.from_columns(cols, target.dim)


# connections --------------------------------------------------------------


@dataclass(frozen=True)
class Connection:
    """A B-connection on M: per R-basis element of B, an operator and its symbol."""

    algebroid: LieRinehart
    target: RModule
    operators: tuple   # MatrixQ per R-basis element
    symbols: tuple     # Derivation per R-basis element

    @classmethod
    def from_matrices(cls, B: LieRinehart, M: RModule, mats: Sequence[MatrixQ]) -> "Connection":
        syms = tuple(B.anchor_of(B.r_basis_element(i)) for i in range(B.rank))
        return cls(B, M, tuple(mats), syms)

    @classmethod
    def zero(cls, B: LieRinehart, M: RModule) -> "Connection":
        return cls.from_matrices(B, M, [MatrixQ(M.dim, M.dim)] * B.rank)

    def operator(self, x: Sequence) -> MatrixQ:
        """Operator attached to an arbitrary element (Q-vector) of B."""
        B, M = self.algebroid, self.target
        out = MatrixQ(M.dim, M.dim)
        for i, f in enumerate(B.r_coefficients(x)):
            if not is_zero_vec(f):
                out = out + (_act(M, f) @ self.operators[i])
        return out

    def validate(self) -> list[str]:
        B, M = self.algebroid, self.target
        problems = []
        if len(self.operators) != B.rank:
            problems.append("wrong number of operators")
            return problems
        for i in range(B.rank):
            anc = B.anchor_of(B.r_basis_element(i))
            if self.symbols[i].matrix != anc.matrix:
                problems.append(f"symbol of e{i + 1} differs from its anchor")
            for a in range(B.base.dim):
                f = unit_vec(B.base.dim, a)
                lhs = self.operators[i] @ M.action[a] - M.action[a] @ self.operators[i]
                rhs = _act(M, self.symbols[i](f))
                if lhs != rhs:
                    problems.append(f"operator of e{i + 1} is not first order with its symbol on {B.base.labels[a]}")
        return problems

    def __add__(self, other: "Connection") -> "Connection":
        return Connection(self.algebroid, self.target,
                          tuple(a + b for a, b in zip(self.operators, other.operators)), self.symbols)

    def shifted(self, mats: Sequence[MatrixQ]) -> "Connection":
        return Connection(self.algebroid, self.target,
                          tuple(a + b for a, b in zip(self.operators, mats)), self.symbols)


def _act(M: RModule, f: Sequence) -> MatrixQ:
    if M.base.dim == 1:
        return MatrixQ.identity(M.dim).scale(f[0])
    return M.act(f)


def _act_vec(M: RModule, f: Sequence, v: Sequence) -> tuple:
    if M.base.dim == 1:
        return vscale(f[0], v)
    return M.act(f).apply(v)


def _r_structure(B: LieRinehart) -> dict:
    cache = B.__dict__.get("_r_structure_cache")
    if cache is None:
        cache = {}
        for i in range(B.rank):
            for j in range(i + 1, B.rank):
                br = B.bracket(B.r_basis_element(i), B.r_basis_element(j))
                if not is_zero_vec(br):
                    cache[(i, j)] = B.r_coefficients(br)
        B.__dict__["_r_structure_cache"] = cache
    return cache


def r_bracket_coeffs(B: LieRinehart, i: int, j: int):
    """R-coefficients of [e_i, e_j] on the R-basis, or None when zero."""
    st = _r_structure(B)
    if i < j:
        return st.get((i, j))
    if i > j:
        c = st.get((j, i))
        return None if c is None else [tuple(-x for x in f) for f in c]
    return None


# differential ---------------------------------------------------------------


def ce_apply(alpha: Connection, xi: Cochain) -> Cochain:
    """The twisted differential d_alpha applied to a single cochain."""
    B, M = alpha.algebroid, alpha.target
    if xi.width != M.dim or xi.rank != B.rank:
        raise ConnectionMismatch("cochain does not match the connection")
    p = xi.degree
    out = {}
    for u in combinations(range(B.rank), p + 1):
        acc = [ZERO] * M.dim
        for i in range(p + 1):
            rest = u[:i] + u[i + 1:]
            v = xi(*rest)
            if not is_zero_vec(v):
                w = alpha.operators[u[i]].apply(v)
                sgn = -1 if i % 2 else 1
                for k, a in enumerate(w):
                    if a:
                        acc[k] += sgn * a
        for i in range(p + 1):
            for j in range(i + 1, p + 1):
                coeffs = r_bracket_coeffs(B, u[i], u[j])
                if coeffs is None:
                    continue
                rest = u[:i] + u[i + 1:j] + u[j + 1:]
                sgn = -1 if (i + j) % 2 else 1
                for k, f in enumerate(coeffs):
                    if is_zero_vec(f):
                        continue
                    v = xi(k, *rest)
                    if is_zero_vec(v):
                        continue
                    w = _act_vec(M, f, v)
                    for m, a in enumerate(w):
                        if a:
                            acc[m] += sgn * a
        if any(acc):
            out[u] = tuple(acc)
    return Cochain(p + 1, B.rank, M.dim, out)


def ce_differential(B: LieRinehart, alpha: Connection, M: RModule, p: int) -> MatrixQ:
    """Matrix of d_alpha: Omega^p_B(M) -> Omega^{p+1}_B(M) on the standard bases."""
    if alpha.algebroid is not B or alpha.target is not M:
        if alpha.target.dim != M.dim or alpha.algebroid.rank != B.rank:
            raise ConnectionMismatch("connection does not act on this module")
    src = form_space(B, M, p)
    tgt = form_space(B, M, p + 1)
    return matrix_of(lambda c: ce_apply(alpha, c), src, tgt)


# curvature and cup ----------------------------------------------------------


@dataclass(frozen=True)
class EndCochain:
    """A 2-form with values in End(M): ``values[(i, j)]`` for i < j."""

    rank: int
    dim: int
    values: dict

    def __call__(self, i: int, j: int) -> MatrixQ:
        if i == j:
            return MatrixQ(self.dim, self.dim)
        if i < j:
            return self.values.get((i, j), MatrixQ(self.dim, self.dim))
        return -self.values.get((j, i), MatrixQ(self.dim, self.dim))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.values.values())

    def nonzero_pairs(self) -> list[tuple]:
        return sorted(k for k, m in self.values.items() if not m.is_zero())


def curvature(alpha: Connection) -> EndCochain:
    """F(e_i, e_j) = [alpha e_i, alpha e_j] - alpha([e_i, e_j])."""
    B, M = alpha.algebroid, alpha.target
    vals = {}
    for i in range(B.rank):
        for j in range(i + 1, B.rank):
            a, b = alpha.operators[i], alpha.operators[j]
            f = a @ b - b @ a
            coeffs = r_bracket_coeffs(B, i, j)
            if coeffs is not None:
                for k, c in enumerate(coeffs):
                    if not is_zero_vec(c):
                        f = f - _act(M, c) @ alpha.operators[k]
            if not f.is_zero():
                vals[(i, j)] = f
    return EndCochain(B.rank, M.dim, vals)


def cup_curvature(F: EndCochain, xi: Cochain) -> Cochain:
    """(F ⌣ xi)(s_1..s_{p+2}) = sum_{i<j} (-1)^{i+j+1} F(s_i,s_j) xi(..omit i,j..).

    Indices are 1-based in this formula; the sign makes d_alpha^2 = F ⌣ hold.
    """
    p = xi.degree
    out = {}
    for u in combinations(range(xi.rank), p + 2):
        acc = [ZERO] * xi.width
        for i in range(p + 2):
            for j in range(i + 1, p + 2):
                m = F(u[i], u[j])
                if m.is_zero():
                    continue
                rest = u[:i] + u[i + 1:j] + u[j + 1:]
                v = xi(*rest)
                if is_zero_vec(v):
                    continue
                sgn = 1 if (i + j) % 2 else -1
                w = m.apply(v)
                for k, a in enumerate(w):
                    if a:
                        acc[k] += sgn * a
        if any(acc):
            out[u] = tuple(acc)
    return Cochain(p + 2, xi.rank, xi.width, out)


def bianchi_residual(alpha: Connection) -> dict:
    """d_alpha F_alpha for the induced connection on End(M); all entries must vanish."""
    B = alpha.algebroid
    F = curvature(alpha)
    res = {}
    for u in combinations(range(B.rank), 3):
        acc = MatrixQ(alpha.target.dim, alpha.target.dim)
        for i in range(3):
            rest = u[:i] + u[i + 1:]
            a = alpha.operators[u[i]]
            term = a @ F(*rest) - F(*rest) @ a
            acc = acc + (term if i % 2 == 0 else -term)
        for i in range(3):
            for j in range(i + 1, 3):
                coeffs = r_bracket_coeffs(B, u[i], u[j])
                if coeffs is None:
                    continue
                (r,) = [x for x in u if x not in (u[i], u[j])]
                sgn = 1 if (i + j) % 2 == 0 else -1
                for k, c in enumerate(coeffs):
                    if not is_zero_vec(c):
                        acc = acc + (_act(alpha.target, c) @ F(k, r)).scale(sgn)
        if not acc.is_zero():
            res[u] = acc
    return res


# bracket of L-valued forms ----------------------------------------------------


def graded_bracket(L: LieRinehart, xi: Cochain, eta: Cochain) -> Cochain:
    """Shuffle bracket of L-valued forms (L totally intransitive)."""
    if xi.rank != eta.rank or xi.width != L.dim or eta.width != L.dim:
        raise ValueError("forms are not L-valued over the same source")
    p, q = xi.degree, eta.degree
    out = {}
    for u in combinations(range(xi.rank), p + q):
        acc = zero_vec(L.dim)
        for sgn, a, b in shuffles(u, p):
            x = xi(*a)
            if is_zero_vec(x):
                continue
            y = eta(*b)
            if is_zero_vec(y):
                continue
            br = L.bracket(x, y)
            acc = vadd(acc, br) if sgn > 0 else vsub(acc, br)
        if not is_zero_vec(acc):
            out[u] = acc
    return Cochain(p + q, xi.rank, L.dim, out)


def half(c: Cochain) -> Cochain:
    return c.scale(Q("1/2"))


def ad_of_form(L: LieRinehart, phi: Cochain) -> tuple:
    """Per R-basis element of the source, the matrix ad_{phi(e_i)} (phi a 1-form)."""
    return tuple(L.ad_matrix(phi(i)) for i in range(phi.rank))


# cohomology -------------------------------------------------------------------


def cohomology(B: LieRinehart, alpha: Connection, M: RModule, p: int):
    """H^p(B; M) as a subquotient with representatives.  Requires a flat connection."""
    from ..linalg import image_basis, kernel_basis, subquotient

    F = curvature(alpha)
    if not F.is_zero():
        pair = F.nonzero_pairs()[0]
        raise NotFlat(pair, F.values[pair])
    n = form_space(B, M, p).dim
    if n == 0:
        return subquotient([], [], 0)
    dp = ce_differential(B, alpha, M, p)
    cyc = kernel_basis(dp)
    bnd = image_basis(ce_differential(B, alpha, M, p - 1)) if p > 0 else []
    return subquotient(cyc, bnd, n)


def betti_numbers(B: LieRinehart, alpha: Connection, M: RModule) -> list[int]:
    return [cohomology(B, alpha, M, p).dim for p in range(B.rank + 1)]


def trivial_coefficients(B: LieRinehart) -> tuple[RModule, Connection]:
    """R with the anchor action: the coefficients of the de Rham complex of B."""
    R = RModule.trivial(B.base)
    mats = [B.anchor_of(B.r_basis_element(i)).matrix for i in range(B.rank)]
    return R, Connection.from_matrices(B, R, mats)


def comb_dim(n: int, p: int, w: int) -> int:
    return comb(n, p) * w if 0 <= p <= n else 0
