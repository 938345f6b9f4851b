"""Checks tying the Z_r/B_r pages to the split operators D^a."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from ..linalg import MatrixQ, in_span, rank, solve_linear, vadd
from .pages import SpectralPage, spectral_page
from .split import ExtensionComplex, SplittingFamily


class NotACocycle(ValueError):
    pass


class NotInZ2(ValueError):
    pass


def _class_map(X: ExtensionComplex, page1: SpectralPage, p: int, q: int, fam: SplittingFamily) -> MatrixQ:
    """E_1^{p,q} -> H^{p+q}(gr^p T, D^0) through Δ^p on representatives."""
    cell = page1.cells[(p, q)]
    H = X.d0_complex(p).cohomology(p + q)
    Dp = X.delta_split(fam, p, p + q)
    cols = [H.coordinates(Dp.apply(v)) for v in cell.representative_basis]
    return MatrixQ.from_columns(cols, H.dim)


def e1_isomorphism_check(X: ExtensionComplex, page1: Optional[SpectralPage] = None) -> dict:
    """E_1^{p,q} against ℍ^q of (Ω^p_B⊗Ω^•_L, D^0), by dims and by the representative map."""
    page1 = page1 or spectral_page(X.filtered, 1)
    fam = X.canonical_family()
    cells = {}
    ok = True
    for (p, q), c in page1.cells.items():
        H = X.d0_complex(p).cohomology(p + q) if X.gr_dim(p, p + q) else None
        hdim = H.dim if H is not None else 0
        iso = True
        if c.dim or hdim:
            if c.dim != hdim:
                iso = False
            else:
                iso = rank(_class_map(X, page1, p, q, fam)) == c.dim
        cells[(p, q)] = {"page": c.dim, "direct": hdim, "iso": iso}
        ok = ok and iso
    return {"cells": cells, "ok": ok}


@dataclass(frozen=True)
class D1Result:
    via_operators: tuple    # coordinates in H(gr^{p+1}, D^0)
    via_page: tuple         # page d_1 mapped through the same identification
    agree: bool


def d1_evaluate(X: ExtensionComplex, fam: SplittingFamily, p: int, q: int, h: Sequence,
                page1: Optional[SpectralPage] = None) -> D1Result:
    """d_1[h] = [D^1 Δ^p h], compared with the page differential."""
    F = X.filtered
    k = p + q
    if not in_span(h, F.Z(1, p, k), F.dim(k)):
        raise NotACocycle("h does not represent a class on the first page")
    page1 = page1 or spectral_page(F, 1)
    y = X.D(fam, 1, p, k).apply(X.delta_split(fam, p, k).apply(h))
    H = X.d0_complex(p + 1).cohomology(k + 1)
    via_ops = tuple(H.coordinates(y)) if H.ambient_dim else ()
    src = page1.cells[(p, q)]
    coords = src.coordinates(h)
    if (p + 1, q) in page1.cells:
        tgt_coords = page1.differentials[(p, q)].apply(coords)
        via_page = tuple(_class_map(X, page1, p + 1, q, fam).apply(tgt_coords))
    else:
        via_page = ()
    return D1Result(via_ops, via_page, via_ops == via_page)


def d1_well_defined_check(X: ExtensionComplex, fam: SplittingFamily, fam2: SplittingFamily,
                          p: int, k: int, xi: Sequence) -> tuple:
    return X.d1_well_defined_residual(fam, fam2, p, k, xi)


@dataclass(frozen=True)
class D2Result:
    via_operators: tuple
    via_page: tuple
    agree: bool
    leading_residual: tuple   # Δ^{p+2}(d_T h) - (D^2Δ^p + D^1Δ^{p+1} + D^0Δ^{p+2}) h


def d2_evaluate(X: ExtensionComplex, fam: SplittingFamily, p: int, q: int, h: Sequence,
                page2: Optional[SpectralPage] = None) -> D2Result:
    """d_2[h] from the D-operator reconstruction of d_T h, compared with the page."""
    F = X.filtered
    k = p + q
    if not in_span(h, F.Z(2, p, k), F.dim(k)):
        raise NotInZ2("h is not in Z_2")
    page2 = page2 or spectral_page(F, 2)
    parts = {m: X.delta_split(fam, m, k).apply(h) for m in range(k + 1)}
    # reassemble d_T h from the D operators, component by component
    comps = []
    for m in range(k + 2):
        acc = [0] * X.gr_dim(m, k + 1)
        for a in range(m + 1):
            if m - a <= k:
                acc = vadd(acc, X.D(fam, a, m - a, k).apply(parts[m - a]))
        comps.append(acc)
    flat = [x for c in comps for x in c]
    rep = solve_linear(X.split_total(fam, k + 1), flat)
    assert rep is not None and tuple(rep) == X.total.d(k).apply(h)
    lead = comps[p + 2] if p + 2 < len(comps) else ()
    check = [0] * len(lead)
    for a, m in ((2, p), (1, p + 1), (0, p + 2)):
        if m <= k and lead:
            check = vadd(check, X.D(fam, a, m, k).apply(parts[m]))
    leading = tuple(x - y for x, y in zip(lead, check))
    tgt_key = (p + 2, q - 1)
    if tgt_key not in page2.cells:
        return D2Result((), (), True, leading)
    tgt = page2.cells[tgt_key]
    via_ops = tuple(tgt.coordinates(rep))
    via_page = tuple(page2.differentials[(p, q)].apply(page2.cells[(p, q)].coordinates(h)))
    return D2Result(via_ops, via_page, via_ops == via_page, leading)


def random_splitting_family(X: ExtensionComplex, rng, spread: int = 2) -> SplittingFamily:
    """Sections s_i = canonical + ι∘φ_i with random integer φ_i: B -> L."""
    nB, nL = X.B.dim, X.L.dim
    secs = {}
    for i in range(X.nerve.vertices):
        phi = MatrixQ(nL, nB, {(a, b): rng.randint(-spread, spread) for a in range(nL) for b in range(nB)})
        secs[i] = X.shifted_section(phi)
    return SplittingFamily(secs)


def random_d0_cocycle(X: ExtensionComplex, p: int, k: int, rng) -> tuple:
    """A random combination of a kernel basis of D^0 on gr^p T^k."""
    from ..linalg import kernel_basis, lincomb
    n = X.gr_dim(p, k)
    if not n:
        return ()
    basis = kernel_basis(X.D(X.canonical_family(), 0, p, k))
    return lincomb([rng.randint(-3, 3) for _ in basis], basis, n)
