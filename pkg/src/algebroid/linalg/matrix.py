"""Sparse matrices over Q and the elimination routines built on them.

Vectors are plain tuples of ``Fraction``.  Matrices store only their nonzero
entries, row by row.  Every routine is deterministic: pivots are taken in
increasing column order and the reduced row echelon form is canonical.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence

Rational = Fraction
Vector = tuple

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, a Fraction or a 'p/q' string")
    return Fraction(x)


def vec(values: Iterable) -> Vector:
    return tuple(Q(v) for v in values)


def zero_vec(n: int) -> Vector:
    return (ZERO,) * n


def unit_vec(n: int, i: int) -> Vector:
    v = [ZERO] * n
    v[i] = ONE
    return tuple(v)


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, u: Sequence) -> Vector:
    c = Q(c)
    if c == 0:
        return zero_vec(len(u))
    return tuple(c * a for a in u)


def is_zero_vec(u: Sequence) -> bool:
    return all(a == 0 for a in u)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c == 0:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] += c * a
    return tuple(out)


class MatrixQ:
    """Immutable sparse rational matrix.

    ``entries`` maps a row index to a dict ``{col: value}`` holding only the
    nonzero values of that row.
    """

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries=None):
        if rows < 0 or cols < 0:
            raise ValueError("matrix shape must be nonnegative")
        self.rows = rows
        self.cols = cols
        data: dict[int, dict[int, Fraction]] = {}
        if entries:
            items = entries.items() if isinstance(entries, dict) else entries
            for (i, j), v in items:
                if not (0 <= i < rows and 0 <= j < cols):
                    raise IndexError(f"entry ({i}, {j}) outside a {rows}x{cols} matrix")
                v = Q(v)
                if v == 0:
                    continue
                row = data.setdefault(i, {})
                row[j] = row.get(j, ZERO) + v
                if row[j] == 0:
                    del row[j]
                    if not row:
                        del data[i]
        self._rows = data

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatrixQ":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "MatrixQ":
        return cls(n, n, {(i, i): ONE for i in range(n)})

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "MatrixQ":
        nrows = len(rows)
        ncols = cols if cols is not None else (len(rows[0]) if rows else 0)
        entries = {}
        for i, r in enumerate(rows):
            if len(r) != ncols:
                raise ValueError("ragged rows")
            for j, v in enumerate(r):
                v = Q(v)
                if v:
                    entries[(i, j)] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "MatrixQ":
        entries = {}
        for j, c in enumerate(columns):
            if len(c) != rows:
                raise ValueError("column length does not match row count")
            for i, v in enumerate(c):
                if v:
                    entries[(i, j)] = v
        return cls(rows, len(columns), entries)

    @classmethod
    def _from_row_dicts(cls, rows: int, cols: int, data: dict) -> "MatrixQ":
        m = cls(rows, cols)
        m._rows = {i: dict(r) for i, r in data.items() if r}
        return m

    # access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self._rows.get(i, {}).get(j, ZERO)

    def items(self):
        for i in sorted(self._rows):
            row = self._rows[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def row(self, i: int) -> Vector:
        out = [ZERO] * self.cols
        for j, v in self._rows.get(i, {}).items():
            out[j] = v
        return tuple(out)

    def column(self, j: int) -> Vector:
        out = [ZERO] * self.rows
        for i, r in self._rows.items():
            v = r.get(j)
            if v is not None:
                out[i] = v
        return tuple(out)

    def columns(self) -> list[Vector]:
        cols = [[ZERO] * self.rows for _ in range(self.cols)]
        for i, r in self._rows.items():
            for j, v in r.items():
                cols[j][i] = v
        return [tuple(c) for c in cols]

    def to_dense(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def is_zero(self) -> bool:
        return not self._rows

    # arithmetic ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixQ):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self):
        return hash((self.shape, tuple(self.items())))

    def __repr__(self) -> str:
        return f"MatrixQ({self.rows}x{self.cols}, nnz={self.nnz()})"

    def transpose(self) -> "MatrixQ":
        data: dict[int, dict[int, Fraction]] = {}
        for i, r in self._rows.items():
            for j, v in r.items():
                data.setdefault(j, {})[i] = v
        return MatrixQ._from_row_dicts(self.cols, self.rows, data)

    T = property(transpose)

    def _combine(self, other: "MatrixQ", sign: int) -> "MatrixQ":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            row = data.setdefault(i, {})
            for j, v in r.items():
                w = row.get(j, ZERO) + sign * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
        return MatrixQ._from_row_dicts(self.rows, self.cols, data)

    def __add__(self, other: "MatrixQ") -> "MatrixQ":
        return self._combine(other, 1)

    def __sub__(self, other: "MatrixQ") -> "MatrixQ":
        return self._combine(other, -1)

    def __neg__(self) -> "MatrixQ":
        return self.scale(-1)

    def scale(self, c) -> "MatrixQ":
        c = Q(c)
        if c == 0:
            return MatrixQ(self.rows, self.cols)
        data = {i: {j: c * v for j, v in r.items()} for i, r in self._rows.items()}
        return MatrixQ._from_row_dicts(self.rows, self.cols, data)

    def __matmul__(self, other):
        if isinstance(other, MatrixQ):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            data: dict[int, dict[int, Fraction]] = {}
            for i, r in self._rows.items():
                acc: dict[int, Fraction] = {}
                for k, a in r.items():
                    orow = other._rows.get(k)
                    if not orow:
                        continue
                    for j, b in orow.items():
                        acc[j] = acc.get(j, ZERO) + a * b
                acc = {j: v for j, v in acc.items() if v}
                if acc:
                    data[i] = acc
            return MatrixQ._from_row_dicts(self.rows, other.cols, data)
        return self.apply(other)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for a matrix with {self.cols} columns")
        out = [ZERO] * self.rows
        for i, r in self._rows.items():
            s = ZERO
            for j, a in r.items():
                x = v[j]
                if x:
                    s += a * x
            out[i] = s
        return tuple(out)

    def hstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.rows != other.rows:
            raise ValueError("hstack needs equal row counts")
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            row = data.setdefault(i, {})
            for j, v in r.items():
                row[j + self.cols] = v
        return MatrixQ._from_row_dicts(self.rows, self.cols + other.cols, data)

    def vstack(self, other: "MatrixQ") -> "MatrixQ":
        if self.cols != other.cols:
            raise ValueError("vstack needs equal column counts")
        data = {i: dict(r) for i, r in self._rows.items()}
        for i, r in other._rows.items():
            data[i + self.rows] = dict(r)
        return MatrixQ._from_row_dicts(self.rows + other.rows, self.cols, data)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "MatrixQ":
        cpos = {c: k for k, c in enumerate(cols)}
        entries = {}
        for a, i in enumerate(rows):
            for j, v in self._rows.get(i, {}).items():
                if j in cpos:
                    entries[(a, cpos[j])] = v
        return MatrixQ(len(rows), len(cols), entries)


def block_matrix(blocks: Sequence[Sequence[Optional[MatrixQ]]], row_sizes, col_sizes) -> MatrixQ:
    """Assemble a matrix from a grid of blocks; ``None`` means a zero block."""
    entries = {}
    r0 = 0
    for bi, brow in enumerate(blocks):
        c0 = 0
        for bj, b in enumerate(brow):
            if b is not None:
                if b.shape != (row_sizes[bi], col_sizes[bj]):
                    raise ValueError(f"block ({bi},{bj}) has shape {b.shape}")
                for (i, j), v in b.items():
                    entries[(r0 + i, c0 + j)] = v
            c0 += col_sizes[bj]
        r0 += row_sizes[bi]
    return MatrixQ(sum(row_sizes), sum(col_sizes), entries)


# elimination -----------------------------------------------------------


def _rref_rows(rows: list[dict[int, Fraction]], ncols: int):
    """Reduce a list of sparse rows in place order; return (rref rows, pivots)."""
    work = [dict(r) for r in rows if r]
    pivots: list[int] = []
    out: list[dict[int, Fraction]] = []
    for col in range(ncols):
        k = next((idx for idx, r in enumerate(work) if col in r), None)
        if k is None:
            continue
        prow = work.pop(k)
        inv = ONE / prow[col]
        prow = {j: v * inv for j, v in prow.items()}
        for r in work:
            f = r.get(col)
            if f:
                for j, v in prow.items():
                    w = r.get(j, ZERO) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        for r in out:
            f = r.get(col)
            if f:
                for j, v in prow.items():
                    w = r.get(j, ZERO) - f * v
                    if w:
                        r[j] = w
                    else:
                        r.pop(j, None)
        out.append(prow)
        pivots.append(col)
        work = [r for r in work if r]
        if not work:
            break
    return out, pivots


def rref(m: MatrixQ) -> tuple[MatrixQ, list[int]]:
    """Reduced row echelon form (nonzero rows only) and the pivot columns."""
    rows, pivots = _rref_rows([m._rows.get(i, {}) for i in range(m.rows)], m.cols)
    data = {i: r for i, r in enumerate(rows)}
    return MatrixQ._from_row_dicts(len(rows), m.cols, data), pivots


def rank(m: MatrixQ) -> int:
    return len(rref(m)[1])


def kernel_basis(m: MatrixQ) -> list[Vector]:
    """Basis of the right kernel, one vector per free column in increasing order.

    The vector attached to free column ``f`` has a 1 in position ``f`` and
    zeros in every other free position.
    """
    r, pivots = rref(m)
    pivot_set = set(pivots)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * m.cols
        v[f] = ONE
        for row_idx, p in enumerate(pivots):
            a = r[row_idx, f]
            if a:
                v[p] = -a
        basis.append(tuple(v))
    return basis


def solve_linear(m: MatrixQ, b: Sequence) -> Optional[Vector]:
    """A particular solution of ``m x = b`` with all free variables zero, or None."""
    if len(b) != m.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = [dict(m._rows.get(i, {})) for i in range(m.rows)]
    for i, v in enumerate(b):
        v = Q(v)
        if v:
            aug[i][m.cols] = v
    rows, pivots = _rref_rows(aug, m.cols + 1)
    if pivots and pivots[-1] == m.cols:
        return None
    x = [ZERO] * m.cols
    for r, p in zip(rows, pivots):
        x[p] = r.get(m.cols, ZERO)
    return tuple(x)


def row_space_basis(vectors: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    rows = [{j: Q(v) for j, v in enumerate(vv) if v} for vv in vectors]
    out, _ = _rref_rows(rows, dim)
    return [tuple(r.get(j, ZERO) for j in range(dim)) for r in out]


def span_rank(vectors: Sequence[Sequence], dim: int) -> int:
    rows = [{j: Q(v) for j, v in enumerate(vv) if v} for vv in vectors]
    return len(_rref_rows(rows, dim)[1])


def in_span(v: Sequence, vectors: Sequence[Sequence], dim: int) -> bool:
    return span_rank(list(vectors) + [v], dim) == span_rank(vectors, dim)


def image_basis(m: MatrixQ) -> list[Vector]:
    """Canonical basis of the column space."""
    return row_space_basis(m.columns(), m.rows)


def annihilator(vectors: Sequence[Sequence], dim: int) -> MatrixQ:
    """A matrix whose kernel is exactly the span of ``vectors``."""
    if not vectors:
        return MatrixQ.identity(dim)
    rows = kernel_basis(MatrixQ.from_rows([tuple(v) for v in vectors], dim))
    return MatrixQ.from_rows(rows, dim) if rows else MatrixQ(0, dim)


def intersect(u: Sequence[Sequence], w: Sequence[Sequence], dim: int) -> list[Vector]:
    """Canonical basis of span(u) ∩ span(w)."""
    if not u or not w:
        return []
    a = annihilator(w, dim)
    basis_u = row_space_basis(u, dim)
    coeffs = kernel_basis(a @ MatrixQ.from_columns(basis_u, dim))
    return row_space_basis([lincomb(c, basis_u, dim) for c in coeffs], dim)


def preimage(m: MatrixQ, target: Sequence[Sequence]) -> list[Vector]:
    """Canonical basis of {x : m x ∈ span(target)}."""
    a = annihilator(target, m.rows)
    return row_space_basis(kernel_basis(a @ m), m.cols)


def coordinates(v: Sequence, basis: Sequence[Sequence]) -> Optional[Vector]:
    """Coefficients expressing ``v`` in the (independent) ``basis``, or None."""
    if not basis:
        return () if is_zero_vec(v) else None
    return solve_linear(MatrixQ.from_columns(basis, len(v)), v)
