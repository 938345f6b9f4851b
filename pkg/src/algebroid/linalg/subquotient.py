"""Subquotients Z/B of a coordinate space with canonical representatives."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .matrix import (
    ZERO,
    Vector,
    _rref_rows,
    is_zero_vec,
    row_space_basis,
    span_rank,
)


class BoundaryNotInCycles(ValueError):
    """Raised when the boundary space is not contained in the cycle space."""


class NotACycle(ValueError):
    """Raised when a vector handed to a subquotient is not in its cycle space."""


def _reduce(v: Sequence, echelon: Sequence[Vector], pivots: Sequence[int]) -> list:
    out = list(v)
    for row, p in zip(echelon, pivots):
        c = out[p]
        if c:
            for j, a in enumerate(row):
                if a:
                    out[j] -= c * a
    return out


def _pivots(echelon: Sequence[Vector]) -> list[int]:
    return [next(j for j, a in enumerate(r) if a) for r in echelon]


@dataclass(frozen=True)
class Subquotient:
    """The quotient of span(cycle_basis) by span(boundary_basis).

    All three bases are in reduced echelon form.  Representatives vanish on
    every pivot column of the boundary basis, which pins them down uniquely
    from the two subspaces alone.
    """

    ambient_dim: int
    cycle_basis: tuple
    boundary_basis: tuple
    representative_basis: tuple

    @property
    def dim(self) -> int:
        return len(self.representative_basis)

    def _boundary_pivots(self):
        return _pivots(self.boundary_basis)

    def contains(self, v: Sequence) -> bool:
        if len(v) != self.ambient_dim:
            return False
        return span_rank(list(self.cycle_basis) + [tuple(v)], self.ambient_dim) == len(self.cycle_basis)

    def reduce(self, v: Sequence) -> Vector:
        """Normal form of ``v`` modulo the boundaries."""
        return tuple(_reduce(v, self.boundary_basis, self._boundary_pivots()))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of the class of ``v`` on the representative basis."""
        if not self.contains(v):
            raise NotACycle("vector is not in the cycle space")
        r = self.reduce(v)
        rep_piv = _pivots(self.representative_basis)
        coords = tuple(r[p] for p in rep_piv)
        rest = _reduce(r, self.representative_basis, rep_piv)
        assert is_zero_vec(rest)
        return coords

    def is_boundary(self, v: Sequence) -> bool:
        return is_zero_vec(self.reduce(v)) if self.contains(v) else False

    def lift(self, coords: Sequence) -> Vector:
        """The representative combination with the given coordinates."""
        out = [ZERO] * self.ambient_dim
        for c, r in zip(coords, self.representative_basis):
            if c:
                for j, a in enumerate(r):
                    if a:
                        out[j] += c * a
        return tuple(out)


def subquotient(cycles: Sequence[Sequence], boundaries: Sequence[Sequence], ambient_dim: Optional[int] = None) -> Subquotient:
    """Build Z/B from spanning lists of Z and B."""
    if ambient_dim is None:
        if cycles:
            ambient_dim = len(cycles[0])
        elif boundaries:
            ambient_dim = len(boundaries[0])
        else:
            raise ValueError("ambient dimension cannot be inferred from empty lists")
    zb = row_space_basis(cycles, ambient_dim)
    bb = row_space_basis(boundaries, ambient_dim)
    if span_rank(list(zb) + list(bb), ambient_dim) != len(zb):
        raise BoundaryNotInCycles("boundary vectors are not in the span of the cycles")
    bpiv = _pivots(bb)
    reduced = [_reduce(z, bb, bpiv) for z in zb]
    rows = [{j: a for j, a in enumerate(r) if a} for r in reduced]
    reps, _ = _rref_rows(rows, ambient_dim)
    rep_vecs = tuple(tuple(r.get(j, ZERO) for j in range(ambient_dim)) for r in reps)
    assert len(rep_vecs) == len(zb) - len(bb)
    return Subquotient(ambient_dim, tuple(zb), tuple(bb), rep_vecs)
