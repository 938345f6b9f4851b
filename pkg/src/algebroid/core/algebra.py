"""Commutative base algebras, their derivations, and modules over them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from ..linalg import MatrixQ, ONE, ZERO, Q, kernel_basis, unit_vec, vec, zero_vec


@dataclass(frozen=True)
class BaseAlgebra:
    """A finite-dimensional commutative unital Q-algebra.

    ``mult[i][j]`` is the coordinate vector of ``e_i * e_j``.
    """

    dim: int
    mult: tuple
    unit: tuple
    labels: tuple = ()

    @classmethod
    def rationals(cls) -> "BaseAlgebra":
        return cls(1, (((ONE,),),), (ONE,), ("1",))

    @classmethod
    def from_table(cls, mult, unit, labels=None) -> "BaseAlgebra":
        n = len(unit)
        table = tuple(tuple(vec(mult[i][j]) for j in range(n)) for i in range(n))
        return cls(n, table, vec(unit), tuple(labels or (f"r{i}" for i in range(n))))

    @classmethod
    def truncated_polynomials(cls, order: int, var: str = "x") -> "BaseAlgebra":
        """Q[x]/(x^order) with basis 1, x, ..., x^(order-1)."""
        n = order
        table = tuple(
            tuple(unit_vec(n, i + j) if i + j < n else zero_vec(n) for j in range(n))
            for i in range(n)
        )
        labels = tuple("1" if i == 0 else (var if i == 1 else f"{var}^{i}") for i in range(n))
        return cls(n, table, unit_vec(n, 0), labels)

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        out = [ZERO] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(self.mult[i][j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def mult_matrix(self, x: Sequence) -> MatrixQ:
        """Matrix of multiplication by ``x``."""
        cols = [self.multiply(x, unit_vec(self.dim, j)) for j in range(self.dim)]
        return MatrixQ.from_columns(cols, self.dim)

    @cached_property
    def basis_mult_matrices(self) -> tuple:
        return tuple(self.mult_matrix(unit_vec(self.dim, i)) for i in range(self.dim))

    def validate(self) -> list[str]:
        """Failures of commutativity, associativity and the unit law."""
        problems = []
        e = [unit_vec(self.dim, i) for i in range(self.dim)]
        for i in range(self.dim):
            if self.multiply(self.unit, e[i]) != e[i]:
                problems.append(f"unit: 1*{self.labels[i]} != {self.labels[i]}")
            for j in range(self.dim):
                if self.mult[i][j] != self.mult[j][i]:
                    problems.append(f"commutativity fails on ({i},{j})")
                for k in range(self.dim):
                    lhs = self.multiply(self.mult[i][j], e[k])
                    rhs = self.multiply(e[i], self.mult[j][k])
                    if lhs != rhs:
                        problems.append(f"associativity fails on ({i},{j},{k})")
        return problems

    @cached_property
    def derivation_basis(self) -> tuple:
        """Basis of Der_Q(R), each a ``Derivation``."""
        n = self.dim
        nvar = n * n
        rows = []
        # unknown D[a][b] at index a*n + b ; condition D(e_i e_j) = D(e_i) e_j + e_i D(e_j)
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    row = [ZERO] * nvar
                    for c, coef in enumerate(self.mult[i][j]):
                        if coef:
                            row[k * n + c] += coef
                    # (D e_i) e_j, component k = sum_a D[a][i] * mult[a][j][k]
                    for a in range(n):
                        row[a * n + i] -= self.mult[a][j][k]
                        row[a * n + j] -= self.mult[i][a][k]
                    if any(row):
                        rows.append(row)
        sol = kernel_basis(MatrixQ.from_rows(rows, nvar)) if rows else [unit_vec(nvar, t) for t in range(nvar)]
        return tuple(Derivation(MatrixQ(n, n, {(a, b): v[a * n + b] for a in range(n) for b in range(n)})) for v in sol)

    def zero_derivation(self) -> "Derivation":
        return Derivation(MatrixQ(self.dim, self.dim))


@dataclass(frozen=True)
class Derivation:
    """A Q-linear map R -> R given by its matrix, expected to satisfy Leibniz."""

    matrix: MatrixQ

    def __call__(self, f: Sequence) -> tuple:
        return self.matrix.apply(f)

    def leibniz_failures(self, base: BaseAlgebra) -> list[tuple[int, int]]:
        bad = []
        for i in range(base.dim):
            for j in range(base.dim):
                ei, ej = unit_vec(base.dim, i), unit_vec(base.dim, j)
                lhs = self(base.mult[i][j])
                rhs = tuple(a + b for a, b in zip(base.multiply(self(ei), ej), base.multiply(ei, self(ej))))
                if lhs != rhs:
                    bad.append((i, j))
        return bad

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def commutator(self, other: "Derivation") -> "Derivation":
        return Derivation(self.matrix @ other.matrix - other.matrix @ self.matrix)

    def __add__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.matrix + other.matrix)

    def __sub__(self, other: "Derivation") -> "Derivation":
        return Derivation(self.matrix - other.matrix)


@dataclass(frozen=True)
class RModule:
    """A module over a base algebra, presented on an underlying Q-space.

    ``action[a]`` is the matrix by which the a-th base basis element acts.
    """

    base: BaseAlgebra
    dim: int
    action: tuple
    labels: tuple = ()

    @classmethod
    def free(cls, base: BaseAlgebra, rank: int, labels: Sequence[str] | None = None) -> "RModule":
        """R^rank; coordinate (i, a) of the Q-space sits at index i*dim(R) + a."""
        n = base.dim
        acts = []
        for a in range(n):
            entries = {}
            for i in range(rank):
                for b in range(n):
                    for c, coef in enumerate(base.mult[a][b]):
                        if coef:
                            entries[(i * n + c, i * n + b)] = coef
            acts.append(MatrixQ(rank * n, rank * n, entries))
        if labels is None:
            labels = [f"m{i}" for i in range(rank)]
        qlabels = tuple(f"{base.labels[a]}*{labels[i]}" if n > 1 else labels[i] for i in range(rank) for a in range(n))
        return cls(base, rank * n, tuple(acts), qlabels)

    @classmethod
    def trivial(cls, base: BaseAlgebra) -> "RModule":
        return cls.free(base, 1, ["1"])

    def act(self, f: Sequence) -> MatrixQ:
        """Matrix of the action of the base element with coordinates ``f``."""
        out = MatrixQ(self.dim, self.dim)
        for a, c in enumerate(f):
            if c:
                out = out + self.action[a].scale(c)
        return out

    def validate(self) -> list[str]:
        problems = []
        if self.act(self.base.unit) != MatrixQ.identity(self.dim):
            problems.append("unit does not act as the identity")
        for a in range(self.base.dim):
            for b in range(self.base.dim):
                if self.action[a] @ self.action[b] != self.act(self.base.mult[a][b]):
                    problems.append(f"action not multiplicative on ({a},{b})")
        return problems

    def is_r_linear(self, m: MatrixQ) -> bool:
        return all(m @ a == a @ m for a in self.action)


def rational_vector(values) -> tuple:
    return tuple(Q(v) for v in values)
