"""Seeded random data for property checks: perturbations, central cocycles, nerves."""

from __future__ import annotations

import random
from typing import Optional

from .cech import Nerve
from .core import LieRinehart
from .core.forms import Cochain
from .extension import Coupling
from .linalg import kernel_basis, lincomb
from .core.forms import ce_differential


def random_vector(rng: random.Random, n: int, spread: int = 2) -> tuple:
    return tuple(rng.randint(-spread, spread) for _ in range(n))


def random_one_form(rng: random.Random, B: LieRinehart, L: LieRinehart, spread: int = 2) -> Cochain:
    """A random L-valued 1-form on the R-basis of B."""
    return Cochain(1, B.rank, L.dim, {(b,): random_vector(rng, L.dim, spread) for b in range(B.rank)})


def random_center_cocycle(rng: random.Random, c: Coupling, degree: int = 2) -> Cochain:
    """A random closed Z(L)-valued form, returned L-valued."""
    Z = c.center
    d = ce_differential(c.B, Z.connection, Z.module, degree)
    basis = kernel_basis(d)
    n = d.cols
    v = lincomb([rng.randint(-2, 2) for _ in basis], basis, n) if basis else (0,) * n
    return Z.from_center(Cochain.from_vector(degree, c.B.rank, Z.module.dim, v))


def random_nerve(rng: random.Random, max_vertices: int = 4) -> Nerve:
    """A random face-closed nerve on at most ``max_vertices`` vertices."""
    n = rng.randint(1, max_vertices)
    from itertools import combinations
    maximal = []
    for k in (4, 3, 2):
        for s in combinations(range(n), k):
            if rng.random() < 0.5 and not any(set(s) <= set(m) for m in maximal):
                maximal.append(list(s))
    return Nerve.from_maximal(n, maximal)


def random_etas(rng: random.Random, c: Coupling, vertices: int, spread: int = 2) -> dict:
    return {i: random_one_form(rng, c.B, c.L, spread) for i in range(vertices)}


def rng_for(seed: Optional[int]) -> random.Random:
    return random.Random(0 if seed is None else seed)


FIBRES = ("abelian1", "abelian2", "abelian3", "heis3")
BASES = ("abelian1", "abelian2", "abelian3", "heis3", "aff1")


def random_coupling(rng: random.Random, base: Optional[str] = None, fibre: Optional[str] = None) -> Coupling:
    """A flat coupling: multiples of one derivation of L on the generators outside [B, B]."""
    from .core.catalog import CATALOG
    from .linalg import MatrixQ

    B = CATALOG[base or rng.choice(BASES)]()
    L = CATALOG[fibre or rng.choice(FIBRES)]()
    if L.name == "heis3":
        a, b = rng.randint(-2, 2), rng.randint(-2, 2)
        D = MatrixQ(3, 3, {(0, 0): a, (1, 1): b, (2, 2): a + b})
    else:
        D = MatrixQ.from_rows([random_vector(rng, L.dim, 1) for _ in range(L.dim)], L.dim)
    derived = {k for val in B.structure.values() for k, c in enumerate(val) if c}
    mats = tuple(D.scale(0 if i in derived else rng.randint(-1, 1)) for i in range(B.rank))
    return Coupling(B, L, mats)


def random_central_form(rng: random.Random, c: Coupling, degree: int, spread: int = 2) -> Cochain:
    from .core.forms import form_space

    Z = c.center
    n = form_space(c.B, Z.module, degree).dim
    return Z.from_center(Cochain.from_vector(degree, c.B.rank, Z.module.dim, random_vector(rng, n, spread)))


def random_lifting_triple(rng: random.Random, nerve: Optional[Nerve] = None, coupling: Optional[Coupling] = None):
    """Deterministic triple, perturbed per vertex, then shifted by random central data."""
    from .cech import build_lifting_triple, perturb_triple, shift_triple

    nerve = nerve or random_nerve(rng)
    c = coupling or random_coupling(rng)
    lt = build_lifting_triple(nerve, c)
    lt = perturb_triple(lt, random_etas(rng, c, nerve.vertices))
    gammas = {i: random_central_form(rng, c, 2) for i in range(nerve.vertices)}
    psis = {e: random_central_form(rng, c, 1) for e in nerve.edges}
    return shift_triple(lt, gammas, psis)
