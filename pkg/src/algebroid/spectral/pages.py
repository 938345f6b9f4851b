"""Spectral sequence of a filtered finite cochain complex.

Pages come straight from the definitions

    Z_r^{p,q} = {x in F^p T^{p+q} : d x in F^{p+r} T^{p+q+1}}
    B_r^{p,q} = Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}

with Z_{-1}^{p} = F^p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from ..linalg import (
    CochainComplex,
    MatrixQ,
    Subquotient,
    in_span,
    preimage,
    rank,
    row_space_basis,
    subquotient,
    unit_vec,
)


class FiltrationError(ValueError):
    pass


class FilteredComplex:
    """A cochain complex with a decreasing filtration F^p T^k, given by bases.

    ``filtration[k]`` lists the bases of F^0 T^k ⊇ F^1 T^k ⊇ ...; indices past
    the end mean zero and negative indices mean the whole space.
    """

    def __init__(self, complex: CochainComplex, filtration: Mapping[int, Sequence[Sequence]]):
        self.complex = complex
        self.filtration = {k: [row_space_basis(b, complex.dim(k)) for b in f] for k, f in filtration.items()}
        self._z = {}

    @property
    def top(self) -> int:
        return self.complex.top

    def dim(self, k: int) -> int:
        return self.complex.dim(k)

    def d(self, k: int) -> MatrixQ:
        return self.complex.d(k)

    def F(self, p: int, k: int) -> list:
        n = self.dim(k)
        if n == 0:
            return []
        if p <= 0:
            return [unit_vec(n, i) for i in range(n)]
        f = self.filtration.get(k, [])
        return list(f[p]) if p < len(f) else []

    def check(self) -> list[str]:
        out = []
        for k in range(self.top + 1):
            n = self.dim(k)
            if len(self.F(0, k)) != n:
                out.append(f"F^0 T^{k} is not everything")
            if self.F(k + 1, k) and n:
                out.append(f"F^{k + 1} T^{k} is not zero")
            for p in range(1, k + 2):
                if not all(in_span(v, self.F(p - 1, k), n) for v in self.F(p, k)):
                    out.append(f"F^{p} T^{k} is not inside F^{p - 1} T^{k}")
                dk = self.d(k)
                for v in self.F(p, k):
                    if not in_span(dk.apply(v), self.F(p, k + 1), self.dim(k + 1)):
                        out.append(f"d does not preserve F^{p} in degree {k}")
                        break
        return out

    def Z(self, r: int, p: int, k: int) -> list:
        key = (r, p, k)
        if key not in self._z:
            n = self.dim(k)
            Fp = self.F(p, k)
            if r < 0 or not Fp:
                self._z[key] = Fp
            else:
                # x = Fp c with d Fp c in F^{p+r}
                if not n:
                    self._z[key] = []
                else:
                    M = MatrixQ.from_columns(Fp, n)
                    target = self.F(p + r, k + 1)
                    cs = preimage(self.d(k) @ M, target) if self.dim(k + 1) else [unit_vec(len(Fp), i) for i in range(len(Fp))]
                    self._z[key] = row_space_basis([M.apply(c) for c in cs], n)
        return self._z[key]

    def Bd(self, r: int, p: int, k: int) -> list:
        n = self.dim(k)
        if not n:
            return []
        part1 = self.Z(r - 1, p + 1, k)
        src = self.Z(r - 1, p - r + 1, k - 1) if k >= 1 else []
        part2 = [self.d(k - 1).apply(v) for v in src]
        return row_space_basis(list(part1) + part2, n)

    def cell(self, r: int, p: int, q: int) -> Subquotient:
        k = p + q
        n = self.dim(k)
        return subquotient(self.Z(r, p, k), self.Bd(r, p, k), n)


@dataclass
class SpectralPage:
    r: int
    cells: dict                     # (p, q) -> Subquotient in T^{p+q}
    differentials: dict             # (p, q) -> MatrixQ E_r^{p,q} -> E_r^{p+r, q-r+1}

    def dims(self) -> dict:
        return {pq: c.dim for pq, c in self.cells.items() if c.dim}

    def totals(self, top: int) -> list[int]:
        out = [0] * (top + 1)
        for (p, q), c in self.cells.items():
            if 0 <= p + q <= top:
                out[p + q] += c.dim
        return out

    def is_degenerate(self) -> bool:
        return all(m.is_zero() for m in self.differentials.values())

    def grid(self, top: int) -> list[list[int]]:
        """Rows indexed by q, columns by p."""
        return [[self.cells[(p, q)].dim if (p, q) in self.cells else 0 for p in range(top + 1)] for q in range(top + 1)]


class NotWellDefined(AssertionError):
    pass


def spectral_page(F: FilteredComplex, r: int) -> SpectralPage:
    cells = {}
    top = F.top
    for k in range(top + 1):
        for p in range(0, k + 1):
            cells[(p, k - p)] = F.cell(r, p, k - p)
    diffs = {}
    for (p, q), c in cells.items():
        tgt_key = (p + r, q - r + 1)
        k = p + q
        tgt = cells.get(tgt_key)
        if tgt is None:
            if c.dim:
                # target outside the grid: must vanish
                for v in c.representative_basis:
                    w = F.d(k).apply(v)
                    if any(w) and not _in_boundary(F, r, tgt_key, w):
                        raise NotWellDefined(f"d_{r} leaves the grid at {(p, q)}")
            diffs[(p, q)] = MatrixQ(0, c.dim)
            continue
        dk = F.d(k)
        cols = [tgt.coordinates(dk.apply(v)) for v in c.representative_basis]
        diffs[(p, q)] = MatrixQ.from_columns(cols, tgt.dim)
        for b in c.boundary_basis:
            if not tgt.is_boundary(dk.apply(b)):
                raise NotWellDefined(f"d_{r} does not preserve boundaries at {(p, q)}")
    return SpectralPage(r, cells, diffs)


def _in_boundary(F: FilteredComplex, r: int, pq: tuple, w) -> bool:
    p, q = pq
    k = p + q
    return in_span(w, F.Bd(r, p, k), F.dim(k))


def page_homology_dims(page: SpectralPage) -> dict:
    """Cellwise dims of the homology of (E_r, d_r)."""
    out = {}
    r = page.r
    for (p, q), c in page.cells.items():
        out_rank = rank(page.differentials[(p, q)]) if c.dim else 0
        src = (p - r, q + r - 1)
        in_rank = rank(page.differentials[src]) if src in page.differentials and page.cells[src].dim else 0
        out[(p, q)] = c.dim - out_rank - in_rank
    return out


def d_squared_zero(page: SpectralPage) -> bool:
    r = page.r
    for (p, q), m in page.differentials.items():
        nxt = (p + r, q - r + 1)
        if nxt in page.differentials and m.rows and page.differentials[nxt].cols == m.rows:
            if not (page.differentials[nxt] @ m).is_zero():
                return False
    return True


@dataclass
class SpectralSequence:
    pages: list
    stable_at: int
    certificate: dict = field(default_factory=dict)

    @property
    def infinity(self) -> SpectralPage:
        return self.pages[-1]


def run_spectral_sequence(F: FilteredComplex, max_r: int | None = None) -> SpectralSequence:
    """Pages E_0, E_1, ... until the bounded filtration forces stability.

    Every consecutive pair is checked: E_{r+1} dims equal the homology of
    (E_r, d_r).
    """
    bound = F.top + 2 if max_r is None else max_r
    pages = []
    consistent = True
    for r in range(bound + 1):
        page = spectral_page(F, r)
        if pages:
            expect = page_homology_dims(pages[-1])
            got = {pq: c.dim for pq, c in page.cells.items()}
            if any(expect.get(pq, 0) != got.get(pq, 0) for pq in set(expect) | set(got)):
                consistent = False
        pages.append(page)
    stable = bound
    while stable > 0 and pages[stable - 1].is_degenerate():
        stable -= 1
    cert = {"consistent": consistent, "bound": bound, "degenerate_from": stable}
    return SpectralSequence(pages, stable, cert)


def convergence_check(F: FilteredComplex, seq: SpectralSequence | None = None) -> dict:
    seq = seq or run_spectral_sequence(F)
    direct = F.complex.betti()
    totals = seq.infinity.totals(F.top)
    return {"direct": direct, "e_infinity": totals, "agree": direct == totals,
            "degenerate_from": seq.certificate["degenerate_from"], "consistent": seq.certificate["consistent"]}
