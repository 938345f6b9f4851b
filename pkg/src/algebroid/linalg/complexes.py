"""Finite cochain complexes over Q: cohomology, induced maps, connecting maps."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .matrix import MatrixQ, image_basis, kernel_basis, rank, solve_linear
from .subquotient import Subquotient, subquotient


@dataclass(frozen=True)
class CochainComplex:
    """Spaces ``Q^dims[k]`` in degrees 0..len(dims)-1 with d_k: C^k -> C^{k+1}."""

    dims: tuple
    diffs: Mapping[int, MatrixQ] = field(default_factory=dict)

    def __post_init__(self):
        for k, d in self.diffs.items():
            if d.shape != (self.dim(k + 1), self.dim(k)):
                raise ValueError(f"differential in degree {k} has shape {d.shape}")

    def dim(self, k: int) -> int:
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def d(self, k: int) -> MatrixQ:
        m = self.diffs.get(k)
        return m if m is not None else MatrixQ(self.dim(k + 1), self.dim(k))

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    def square_residual(self, k: int) -> MatrixQ:
        return self.d(k + 1) @ self.d(k)

    def is_complex(self) -> bool:
        return all(self.square_residual(k).is_zero() for k in range(-1, self.top + 1))

    def cohomology(self, k: int) -> Subquotient:
        n = self.dim(k)
        cyc = kernel_basis(self.d(k)) if n else []
        bnd = image_basis(self.d(k - 1)) if n else []
        return subquotient(cyc, bnd, n)

    def betti(self) -> list[int]:
        out = []
        for k in range(len(self.dims)):
            n = self.dim(k)
            out.append(n - rank(self.d(k)) - rank(self.d(k - 1)))
        return out


def induced_map(f: MatrixQ, source: Subquotient, target: Subquotient) -> MatrixQ:
    """Matrix of a cocycle-preserving map on cohomology coordinates."""
    cols = [target.coordinates(f.apply(r)) for r in source.representative_basis]
    return MatrixQ.from_columns(cols, target.dim)


def connecting_map(inc: Mapping[int, MatrixQ], proj: Mapping[int, MatrixQ],
                   sub: CochainComplex, mid: CochainComplex, quo: CochainComplex,
                   k: int) -> MatrixQ:
    """The connecting map H^k(quo) -> H^{k+1}(sub) of 0 -> sub -> mid -> quo -> 0.

    Each representative is lifted through ``proj[k]``, hit with the middle
    differential, and pulled back through ``inc[k+1]``.
    """
    hq = quo.cohomology(k)
    hs = sub.cohomology(k + 1)
    cols = []
    for c in hq.representative_basis:
        b = solve_linear(proj[k], c)
        if b is None:
            raise ValueError("projection is not surjective")
        db = mid.d(k).apply(b)
        a = solve_linear(inc[k + 1], db)
        if a is None:
            raise ValueError("d(lift) does not come from the subcomplex")
        cols.append(hs.coordinates(a))
    return MatrixQ.from_columns(cols, hs.dim)


def les_exactness(inc: Mapping[int, MatrixQ], proj: Mapping[int, MatrixQ],
                  sub: CochainComplex, mid: CochainComplex, quo: CochainComplex) -> list[dict]:
    """Rank bookkeeping for the long exact sequence at every node.

    Returns one record per node with the dimension of the kernel of the
    outgoing map and the rank of the incoming map; exactness means they agree.
    """
    top = max(sub.top, mid.top, quo.top)
    maps = []  # sequence H^k(sub) -> H^k(mid) -> H^k(quo) -> H^{k+1}(sub) ...
    for k in range(top + 1):
        hs, hm, hq = sub.cohomology(k), mid.cohomology(k), quo.cohomology(k)
        maps.append((f"H{k}(sub)->H{k}(mid)", hs.dim, hm.dim, induced_map(inc[k], hs, hm) if k in inc else MatrixQ(hm.dim, hs.dim)))
        maps.append((f"H{k}(mid)->H{k}(quo)", hm.dim, hq.dim, induced_map(proj[k], hm, hq) if k in proj else MatrixQ(hq.dim, hm.dim)))
        nxt = sub.cohomology(k + 1).dim
        cm = connecting_map(inc, proj, sub, mid, quo, k) if (hq.dim and nxt) else MatrixQ(nxt, hq.dim)
        maps.append((f"H{k}(quo)->H{k+1}(sub)", hq.dim, nxt, cm))
    first = maps[0]
    maps = [("0->" + first[0].split("->")[0], 0, first[1], MatrixQ(first[1], 0))] + maps
    report = []
    for a, b in zip(maps, maps[1:]):
        _, _, node_dim, ma = a
        name_b, _, _, mb = b
        ker_b = node_dim - rank(mb)
        report.append({"node": name_b.split("->")[0], "ker_out": ker_b, "im_in": rank(ma), "exact": ker_b == rank(ma)})
    return report


def total_dims(blocks: Sequence[Sequence[int]]) -> list[int]:
    """Helper for bigraded spaces: dims of the total degrees of a grid."""
    out: dict[int, int] = {}
    for p, row in enumerate(blocks):
        for q, n in enumerate(row):
            out[p + q] = out.get(p + q, 0) + n
    return [out.get(k, 0) for k in range(max(out) + 1)] if out else []
