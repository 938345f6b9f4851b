"""Finite nerves, presheaf data on them, and Čech cohomology."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Mapping, Sequence

from ..linalg import CochainComplex, MatrixQ, Subquotient, block_matrix


class MissingRestriction(KeyError):
    pass


class NotFaceClosed(ValueError):
    pass


@dataclass(frozen=True)
class Nerve:
    vertices: int
    simplices: tuple  # sorted tuples, closed under faces

    def __post_init__(self):
        have = set(self.simplices)
        for s in self.simplices:
            if list(s) != sorted(set(s)) or any(v < 0 or v >= self.vertices for v in s):
                raise ValueError(f"bad simplex {s}")
            for f in faces(s):
                if f and f not in have:
                    raise NotFaceClosed(f"face {f} of {s} is missing")
        for v in range(self.vertices):
            if (v,) not in have:
                raise NotFaceClosed(f"vertex {v} is missing")

    @classmethod
    def from_maximal(cls, vertices: int, maximal: Sequence[Sequence[int]]) -> "Nerve":
        out = {(v,) for v in range(vertices)}
        for s in maximal:
            s = tuple(sorted(s))
            for k in range(1, len(s) + 1):
                out.update(combinations(s, k))
        return cls(vertices, tuple(sorted(out, key=lambda t: (len(t), t))))

    @classmethod
    def point(cls) -> "Nerve":
        return cls(1, ((0,),))

    @classmethod
    def hollow_triangle(cls) -> "Nerve":
        return cls.from_maximal(3, [(0, 1), (1, 2), (0, 2)])

    @cached_property
    def by_degree(self) -> dict:
        out: dict = {}
        for s in self.simplices:
            out.setdefault(len(s) - 1, []).append(s)
        return {p: sorted(v) for p, v in out.items()}

    def of_degree(self, p: int) -> list:
        return self.by_degree.get(p, [])

    @property
    def dimension(self) -> int:
        return max(self.by_degree)

    @property
    def edges(self) -> list:
        return self.of_degree(1)

    @property
    def triangles(self) -> list:
        return self.of_degree(2)


def faces(s: tuple) -> list[tuple]:
    """Codimension-one faces; face j omits the j-th vertex."""
    return [s[:j] + s[j + 1:] for j in range(len(s))]


@dataclass(frozen=True)
class SheafData:
    """A finite-dimensional space per simplex and restriction maps along face inclusions.

    ``restrictions[(face, simplex)]`` maps sections over ``face`` to sections
    over ``simplex``.
    """

    nerve: Nerve
    dims: Mapping[tuple, int]
    restrictions: Mapping[tuple, MatrixQ] = field(default_factory=dict)

    @classmethod
    def constant(cls, nerve: Nerve, dim: int) -> "SheafData":
        res = {}
        for s in nerve.simplices:
            for f in faces(s):
                if f:
                    res[(f, s)] = MatrixQ.identity(dim)
        return cls(nerve, {s: dim for s in nerve.simplices}, res)

    def restriction(self, face: tuple, simplex: tuple) -> MatrixQ:
        if face == simplex:
            return MatrixQ.identity(self.dims[simplex])
        m = self.restrictions.get((face, simplex))
        if m is not None:
            return m
        # compose through an intermediate face
        for j in range(len(simplex)):
            mid = simplex[:j] + simplex[j + 1:]
            if set(face) <= set(mid) and (mid, simplex) in self.restrictions:
                return self.restrictions[(mid, simplex)] @ self.restriction(face, mid)
        raise MissingRestriction((face, simplex))

    def functoriality_failures(self) -> list[tuple]:
        """Triples (f, g, s), f ⊂ g ⊂ s codim one each, where the two paths differ."""
        bad = []
        for s in self.nerve.simplices:
            for g in faces(s):
                for f in faces(g):
                    if not f:
                        continue
                    direct = self.restriction(f, s)
                    via = self.restriction(g, s) @ self.restriction(f, g)
                    if direct != via:
                        bad.append((f, g, s))
        return bad

    def degree_dim(self, p: int) -> int:
        return sum(self.dims[s] for s in self.nerve.of_degree(p))

    def offsets(self, p: int) -> dict:
        out, o = {}, 0
        for s in self.nerve.of_degree(p):
            out[s] = o
            o += self.dims[s]
        return out


def cech_differential(nerve: Nerve, sheaf: SheafData, p: int) -> MatrixQ:
    """(δc)(s) = Σ_j (-1)^j res(c(face_j s)) on ordered simplices."""
    src = nerve.of_degree(p)
    tgt = nerve.of_degree(p + 1)
    blocks = []
    for s in tgt:
        row = []
        fs = faces(s)
        for t in src:
            m = None
            for j, f in enumerate(fs):
                if f == t:
                    r = sheaf.restriction(f, s)
                    m = r if j % 2 == 0 else -r
            row.append(m)
        blocks.append(row)
    return block_matrix(blocks, [sheaf.dims[s] for s in tgt], [sheaf.dims[t] for t in src])


def cech_complex(nerve: Nerve, sheaf: SheafData) -> CochainComplex:
    top = nerve.dimension
    dims = tuple(sheaf.degree_dim(p) for p in range(top + 1))
    return CochainComplex(dims, {p: cech_differential(nerve, sheaf, p) for p in range(top)})


def cech_cohomology(nerve: Nerve, sheaf: SheafData) -> list[Subquotient]:
    C = cech_complex(nerve, sheaf)
    return [C.cohomology(p) for p in range(len(C.dims))]
