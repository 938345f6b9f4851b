"""Čech double complexes K[q][p] = Č^p(row q) and their truncated total complexes.

The total differential on T^k is d + (-1)^k δ, with d the vertical (form)
differential and δ the Čech differential.  Blocks of T^k are ordered by
increasing Čech degree p.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from ..core.forms import ce_differential, form_space
from ..linalg import (
    CochainComplex,
    MatrixQ,
    Subquotient,
    block_matrix,
    induced_map,
    les_exactness,
    rank,
)
from .nerve import Nerve, SheafData, cech_differential


@dataclass(frozen=True)
class DoubleComplex:
    nerve: Nerve
    rows: tuple              # SheafData per form degree q
    vertical: tuple          # per q: {simplex: MatrixQ row q -> row q+1}

    @property
    def height(self) -> int:
        return len(self.rows)

    def vertical_on(self, q: int, p: int) -> MatrixQ:
        """d on Č^p(row q) -> Č^p(row q+1), simplex by simplex."""
        simp = self.nerve.of_degree(p)
        src, tgt = self.rows[q], self.rows[q + 1]
        blocks = [[self.vertical[q][s] if s == t else None for t in simp] for s in simp]
        return block_matrix(blocks, [tgt.dims[s] for s in simp], [src.dims[s] for s in simp])

    def cech_on(self, q: int, p: int) -> MatrixQ:
        return cech_differential(self.nerve, self.rows[q], p)

    def block_dim(self, p: int, q: int) -> int:
        if q < 0 or q >= self.height or p < 0:
            return 0
        return self.rows[q].degree_dim(p)

    def commutation_residuals(self) -> list[tuple]:
        bad = []
        for q in range(self.height - 1):
            for p in range(self.nerve.dimension):
                a = self.vertical_on(q, p + 1) @ self.cech_on(q, p)
                b = self.cech_on(q + 1, p) @ self.vertical_on(q, p)
                if a != b:
                    bad.append((p, q))
        return bad

    def total(self, a: int = 0) -> "TotalComplex":
        return TotalComplex(self, a)


@dataclass(frozen=True)
class TotalComplex:
    """Total complex of τ^{≥a}: only rows q ≥ a survive."""

    K: DoubleComplex
    a: int = 0

    @cached_property
    def top(self) -> int:
        return self.K.nerve.dimension + self.K.height - 1

    def blocks(self, k: int) -> list[tuple]:
        """[(p, q, offset, size)] for T^k."""
        out, off = [], 0
        for p in range(0, k + 1):
            q = k - p
            if q < self.a:
                continue
            n = self.K.block_dim(p, q)
            if n:
                out.append((p, q, off, n))
                off += n
        return out

    def dim(self, k: int) -> int:
        return sum(b[3] for b in self.blocks(k))

    def d(self, k: int) -> MatrixQ:
        src, tgt = self.blocks(k), self.blocks(k + 1)
        sign = -1 if k % 2 else 1
        grid = []
        for (p2, q2, _, n2) in tgt:
            row = []
            for (p, q, _, n) in src:
                m = None
                if p2 == p and q2 == q + 1:
                    m = self.K.vertical_on(q, p)
                elif p2 == p + 1 and q2 == q:
                    m = self.K.cech_on(q, p).scale(sign)
                row.append(m)
            grid.append(row)
        return block_matrix(grid, [b[3] for b in tgt], [b[3] for b in src])

    @cached_property
    def complex(self) -> CochainComplex:
        dims = tuple(self.dim(k) for k in range(self.top + 1))
        return CochainComplex(dims, {k: self.d(k) for k in range(self.top)})

    def cohomology(self, k: int) -> Subquotient:
        return self.complex.cohomology(k)

    def pack(self, k: int, parts: Mapping[int, Sequence]) -> tuple:
        """Assemble a T^k vector from {p: Čech-p vector of row k-p}."""
        out = []
        for (p, q, _, n) in self.blocks(k):
            v = parts.get(p)
            out.extend(v if v is not None else [0] * n)
        from ..linalg import vec
        return vec(out)

    def unpack(self, k: int, v: Sequence) -> dict:
        return {p: tuple(v[o:o + n]) for (p, q, o, n) in self.blocks(k)}


def truncate_total_complex(K: DoubleComplex, a: int) -> TotalComplex:
    return K.total(a)


def constant_form_complex(nerve: Nerve, center) -> DoubleComplex:
    """Rows Ω^q_B(Z(L)) with constant coefficients and vertical d_ᾱ.

    ``center`` is a CenterData (module, inclusion, flat connection on Z).
    """
    B = center.connection.algebroid
    Z = center.module
    rows, vert = [], []
    for q in range(B.rank + 1):
        rows.append(SheafData.constant(nerve, form_space(B, Z, q).dim))
    for q in range(B.rank):
        m = ce_differential(B, center.connection, Z, q)
        vert.append({s: m for s in nerve.simplices})
    return DoubleComplex(nerve, tuple(rows), tuple(vert))


def les_crosscheck(K: DoubleComplex, a: int) -> dict:
    """ℍ(τ^{≥a}) dims from the sequence 0 -> τ^{≥a}T -> T -> T/τ^{≥a} -> 0.

    Rank bookkeeping: dim H^k(sub) = dim coker(H^{k-1}(mid) -> H^{k-1}(quo))
    + dim ker(H^k(mid) -> H^k(quo)).  Compared with the direct computation.
    """
    full = K.total(0)
    sub = K.total(a)
    top = full.top
    inc, proj = {}, {}
    qdims, qdiffs = [], {}
    for k in range(top + 2):
        fb = full.blocks(k)
        sb = {(p, q): (o, n) for (p, q, o, n) in sub.blocks(k)}
        ent_i, ent_p = {}, {}
        qi = 0
        for (p, q, o, n) in fb:
            if (p, q) in sb:
                so = sb[(p, q)][0]
                for t in range(n):
                    ent_i[(o + t, so + t)] = 1
            else:
                for t in range(n):
                    ent_p[(qi + t, o + t)] = 1
                qi += n
        inc[k] = MatrixQ(full.dim(k), sub.dim(k), ent_i)
        proj[k] = MatrixQ(qi, full.dim(k), ent_p)
        qdims.append(qi)
    # quotient differential: proj d lift, lift = proj^T
    for k in range(top + 1):
        qdiffs[k] = proj[k + 1] @ full.d(k) @ proj[k].transpose()
    quo = CochainComplex(tuple(qdims[:top + 1]), {k: v for k, v in qdiffs.items() if k < top})
    mid, subc = full.complex, sub.complex
    report = les_exactness(inc, proj, subc, mid, quo)
    dims_les = []
    for k in range(top + 1):
        hm, hq = mid.cohomology(k), quo.cohomology(k)
        f = induced_map(proj[k], hm, hq)
        ker = hm.dim - rank(f)
        if k:
            hm1, hq1 = mid.cohomology(k - 1), quo.cohomology(k - 1)
            coker = hq1.dim - rank(induced_map(proj[k - 1], hm1, hq1))
        else:
            coker = 0
        dims_les.append(coker + ker)
    direct = [sub.cohomology(k).dim for k in range(top + 1)]
    return {"direct": direct, "les": dims_les, "exact": all(r["exact"] for r in report), "agree": direct == dims_les}
