"""Lifting triples over a nerve, their obstruction cocycle, and gluing.

Local data is constant along the nerve: every simplex carries the same B
and L, and all restrictions are identities.  Transitions φ_ij satisfy
α_j - α_i = ad φ_ij.  The obstruction cocycle is

    λ_i = d_{α_i} ρ_i,
    t_ij = ρ_j - ρ_i - d_{α_i} φ_ij - 1/2 [φ_ij, φ_ij],
    q_ijk = -φ_jk + φ_ik - φ_ij,

all central.  In the total complex T = Tot τ^{≥1} Č(Ω_B(Z)) with
differential d + (-1)^k δ the vector (λ, t, q) is a 3-cocycle, and a
trivialization (a, m) with λ = d a, t = δa - d m, q = -δm is the vector
(a, -m) with d_T (a, -m) = (λ, t, q).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from ..core.forms import Cochain, ce_apply, graded_bracket, half
from ..extension.engine import (
    CenterData,
    CenterEscape,
    Coupling,
    ExtensionStructure,
    LiftingPair,
    NotClosed,
    build_extension,
    change_lifting_pair,
    is_bracket_morphism,
    lift_coupling,
    obstruction_cochain,
    solve_ad,
)
from ..linalg import MatrixQ, is_zero_vec, unit_vec, vsub
from .double import TotalComplex, constant_form_complex
from .nerve import Nerve


class NoPhiSolution(ValueError):
    pass


class TrivializationInvalid(ValueError):
    def __init__(self, equation: int, where):
        super().__init__(f"equation {equation} fails at {where}")
        self.equation = equation
        self.where = where


@dataclass(frozen=True)
class LiftingTriple:
    nerve: Nerve
    pairs: Mapping[int, LiftingPair]
    phis: Mapping[tuple, Cochain]

    @property
    def coupling(self) -> Coupling:
        return self.pairs[0].coupling

    @property
    def center(self) -> CenterData:
        return self.coupling.center

    def validate(self) -> list[str]:
        out = []
        for i, p in self.pairs.items():
            out += [f"vertex {i}: {m}" for m in p.validate()]
        L = self.coupling.L
        for (i, j), phi in self.phis.items():
            for b in range(self.coupling.B.rank):
                lhs = self.pairs[j].alpha.operators[b] - self.pairs[i].alpha.operators[b]
                if lhs != L.ad_matrix(phi(b)):
                    out.append(f"edge {(i, j)}: alpha_j - alpha_i != ad phi on {b}")
        return out


def _phi(p: LiftingPair, q: LiftingPair) -> Cochain:
    L = p.L
    vals = {}
    for b, (x, y) in enumerate(zip(p.alpha.operators, q.alpha.operators)):
        s = solve_ad(L, y - x)
        if s is None:
            raise NoPhiSolution(f"local couplings differ by an outer derivation on {p.B.rank_labels[b]}")
        vals[(b,)] = s
    return Cochain(1, p.B.rank, L.dim, vals)


def build_lifting_triple(nerve: Nerve, couplings: Mapping[int, Coupling] | Coupling) -> LiftingTriple:
    """Deterministic triple: lift_coupling per vertex, φ_ij by linear solve."""
    if isinstance(couplings, Coupling):
        couplings = {v: couplings for v in range(nerve.vertices)}
    pairs = {v: lift_coupling(couplings[v]) for v in range(nerve.vertices)}
    phis = {e: _phi(pairs[e[0]], pairs[e[1]]) for e in nerve.edges}
    lt = LiftingTriple(nerve, pairs, phis)
    assert not lt.validate()
    return lt


@dataclass(frozen=True)
class ObstructionTriple:
    """Central cochains, stored in Z(L)-coordinates."""

    nerve: Nerve
    center: CenterData
    lam: Mapping[int, Cochain]
    t: Mapping[tuple, Cochain]
    q: Mapping[tuple, Cochain]

    def replace(self, **kw) -> "ObstructionTriple":
        d = dict(nerve=self.nerve, center=self.center, lam=self.lam, t=self.t, q=self.q)
        d.update(kw)
        return ObstructionTriple(**d)


def obstruction_triple(lt: LiftingTriple) -> ObstructionTriple:
    Z = lt.center
    L = lt.coupling.L
    lam = {i: Z.to_center(obstruction_cochain(p)) for i, p in lt.pairs.items()}
    t = {}
    for (i, j), phi in lt.phis.items():
        pi, pj = lt.pairs[i], lt.pairs[j]
        tij = pj.rho - pi.rho - ce_apply(pi.alpha, phi) - half(graded_bracket(L, phi, phi))
        if not Z.is_central(tij):
            raise CenterEscape(f"t on edge {(i, j)} is not central")
        t[(i, j)] = Z.to_center(tij)
    q = {}
    for (i, j, k) in lt.nerve.triangles:
        qijk = lt.phis[(i, k)] - lt.phis[(j, k)] - lt.phis[(i, j)]
        if not Z.is_central(qijk):
            raise CenterEscape(f"q on {(i, j, k)} is not central")
        for b in range(qijk.rank):
            assert L.ad_matrix(qijk(b)).is_zero()
        q[(i, j, k)] = Z.to_center(qijk)
    return ObstructionTriple(lt.nerve, Z, lam, t, q)


def _delta(nerve: Nerve, c: Mapping[tuple, Cochain], s: tuple, like: Cochain) -> Cochain:
    out = Cochain(like.degree, like.rank, like.width)
    for j in range(len(s)):
        f = s[:j] + s[j + 1:]
        key = f if len(f) > 1 else f[0]
        term = c.get(key)
        if term is None:
            continue
        out = out + term if j % 2 == 0 else out - term
    return out


def verify_cocycle(ot: ObstructionTriple) -> dict:
    """Residuals of dλ = 0, dt = δλ, dq = δt, δq = 0, keyed by equation then simplex."""
    Z = ot.center
    nerve = ot.nerve
    res = {1: {}, 2: {}, 3: {}, 4: {}}
    for i, lam in ot.lam.items():
        r = Z.d(lam)
        if not r.is_zero():
            res[1][(i,)] = r
    for e, t in ot.t.items():
        r = Z.d(t) - _delta(nerve, ot.lam, e, Z.d(t))
        if not r.is_zero():
            res[2][e] = r
    for s, q in ot.q.items():
        r = Z.d(q) - _delta(nerve, ot.t, s, Z.d(q))
        if not r.is_zero():
            res[3][s] = r
    for s in nerve.of_degree(3):
        like = next(iter(ot.q.values()))
        r = _delta(nerve, ot.q, s, like)
        if not r.is_zero():
            res[4][s] = r
    return res


def cocycle_is_zero(res: dict) -> bool:
    return not any(res.values())


@dataclass(frozen=True)
class GlobalObstruction:
    coordinates: tuple
    vector: tuple
    total: TotalComplex
    triple: ObstructionTriple

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


def total_complex(lt_or_center, nerve: Nerve, a: int = 1) -> TotalComplex:
    center = lt_or_center.center if isinstance(lt_or_center, LiftingTriple) else lt_or_center
    return constant_form_complex(nerve, center).total(a)


def _cechvec(T: TotalComplex, p: int, data: Mapping, width: int) -> tuple:
    out = []
    for s in T.K.nerve.of_degree(p):
        key = s if p else s[0]
        c = data.get(key)
        out.extend(c.to_vector() if c is not None else [0] * width)
    return tuple(out)


def _cechdict(T: TotalComplex, p: int, q: int, v: Sequence, B_rank: int, zdim: int) -> dict:
    width = T.K.rows[q].dims[T.K.nerve.of_degree(p)[0]] if T.K.nerve.of_degree(p) else 0
    out = {}
    for n, s in enumerate(T.K.nerve.of_degree(p)):
        key = s if p else s[0]
        out[key] = Cochain.from_vector(q, B_rank, zdim, v[n * width:(n + 1) * width])
    return out


def triple_vector(T: TotalComplex, ot: ObstructionTriple) -> tuple:
    K = T.K
    parts = {}
    for (p, q, o, n) in T.blocks(3):
        data = {0: ot.lam, 1: ot.t, 2: ot.q}.get(p, {})
        parts[p] = _cechvec(T, p, data, K.rows[q].dims[K.nerve.of_degree(p)[0]])
    return T.pack(3, parts)


def global_obstruction_class(nerve: Nerve, couplings, perturb: Optional[Mapping[int, Cochain]] = None) -> GlobalObstruction:
    """Class of (λ, t, q) in ℍ³(τ^{≥1}); recomputed with a perturbed triple."""
    lt = build_lifting_triple(nerve, couplings)
    ot = obstruction_triple(lt)
    assert cocycle_is_zero(verify_cocycle(ot))
    T = total_complex(lt, nerve)
    v = triple_vector(T, ot)
    assert T.d(3).apply(v) == tuple(0 for _ in range(T.dim(4)))
    H3 = T.cohomology(3)
    coords = H3.coordinates(v) if H3.ambient_dim else ()
    lt2 = perturb_triple(lt, perturb or _default_etas(lt))
    v2 = triple_vector(T, obstruction_triple(lt2))
    if H3.ambient_dim:
        assert H3.coordinates(v2) == coords
    return GlobalObstruction(tuple(coords), v, T, ot)


def _default_etas(lt: LiftingTriple) -> dict:
    L = lt.coupling.L
    B = lt.coupling.B
    out = {}
    for i in lt.pairs:
        vals = {(b,): L.r_basis_element((i + b) % L.rank) for b in range(B.rank)} if L.rank else {}
        out[i] = Cochain(1, B.rank, L.dim, vals)
    return out


def perturb_triple(lt: LiftingTriple, etas: Mapping[int, Cochain]) -> LiftingTriple:
    """(α_i + ad η_i, ρ_i + d η_i + 1/2[η_i, η_i], φ_ij + η_j - η_i)."""
    pairs = {i: change_lifting_pair(p, etas[i]) if i in etas else p for i, p in lt.pairs.items()}

    def eta(i):
        e = etas.get(i)
        return e if e is not None else Cochain(1, lt.coupling.B.rank, lt.coupling.L.dim)

    phis = {(i, j): phi + eta(j) - eta(i) for (i, j), phi in lt.phis.items()}
    out = LiftingTriple(lt.nerve, pairs, phis)
    assert not out.validate()
    return out


def shift_triple(lt: LiftingTriple, gammas: Mapping[int, Cochain], psis: Mapping[tuple, Cochain]) -> LiftingTriple:
    """(α_i, ρ_i + γ_i, φ_ij + ψ_ij) for central γ, ψ (given as L-valued cochains)."""
    pairs = {i: LiftingPair(p.coupling, p.alpha, p.rho + gammas[i]) if i in gammas else p
             for i, p in lt.pairs.items()}
    phis = {e: phi + psis[e] if e in psis else phi for e, phi in lt.phis.items()}
    return LiftingTriple(lt.nerve, pairs, phis)


@dataclass(frozen=True)
class GluedExtension:
    """Local extensions on vertices and gluing maps g_ij: A_j -> A_i on edges."""

    nerve: Nerve
    triple: LiftingTriple
    local: Mapping[int, ExtensionStructure]
    gluing: Mapping[tuple, MatrixQ]

    def morphism_failures(self) -> list:
        return [e for e, g in self.gluing.items()
                if not is_bracket_morphism(g, self.local[e[1]].total, self.local[e[0]].total)]

    def cocycle_failures(self) -> list:
        bad = []
        for (i, j, k) in self.nerve.triangles:
            if self.gluing[(i, j)] @ self.gluing[(j, k)] != self.gluing[(i, k)]:
                bad.append((i, j, k))
        return bad


def shear(E: ExtensionStructure, psi: Cochain) -> MatrixQ:
    """(b, l) -> (b, l + ψ(b)) on the Q-space of the total algebra (R = Q layout)."""
    B, L = E.B, E.L
    cols = []
    for u in range(E.total.dim):
        x = unit_vec(E.total.dim, u)
        val = [0] * L.dim
        b = E.projection.apply(x)
        for i, f in enumerate(B.r_coefficients(b)):
            if not is_zero_vec(f):
                w = L.scalar_mul(f, psi(i))
                val = [a + c for a, c in zip(val, w)]
        cols.append(tuple(a + c for a, c in zip(x, E.injection.apply(tuple(val)))))
    return MatrixQ.from_columns(cols, E.total.dim)


def glue_extension(lt: LiftingTriple, a: Mapping[int, Cochain] | None = None,
                   m: Mapping[tuple, Cochain] | None = None) -> GluedExtension:
    """Glue (α_i, ρ_i - a_i) along φ_ij - m_ij after checking the trivialization.

    ``a`` and ``m`` are central cochains given L-valued.
    """
    Z = lt.center
    B, L = lt.coupling.B, lt.coupling.L
    a = {i: a.get(i, Cochain(2, B.rank, L.dim)) for i in lt.pairs} if a else {i: Cochain(2, B.rank, L.dim) for i in lt.pairs}
    m = {e: m.get(e, Cochain(1, B.rank, L.dim)) for e in lt.phis} if m else {e: Cochain(1, B.rank, L.dim) for e in lt.phis}
    for i, c in a.items():
        if not Z.is_central(c):
            raise TrivializationInvalid(0, (i,))
    for e, c in m.items():
        if not Z.is_central(c):
            raise TrivializationInvalid(0, e)
    ot = obstruction_triple(lt)
    az = {i: Z.to_center(c) for i, c in a.items()}
    mz = {e: Z.to_center(c) for e, c in m.items()}
    for i in lt.pairs:
        if Z.d(az[i]) != ot.lam[i]:
            raise TrivializationInvalid(1, (i,))
    for (i, j) in lt.phis:
        if az[j] - az[i] - Z.d(mz[(i, j)]) != ot.t[(i, j)]:
            raise TrivializationInvalid(2, (i, j))
    for (i, j, k) in lt.nerve.triangles:
        if mz[(i, k)] - mz[(j, k)] - mz[(i, j)] != ot.q[(i, j, k)]:
            raise TrivializationInvalid(3, (i, j, k))
    local = {}
    for i, p in lt.pairs.items():
        E = build_extension(LiftingPair(p.coupling, p.alpha, p.rho - a[i]))
        assert isinstance(E, ExtensionStructure)
        local[i] = E
    gluing = {e: shear(local[e[1]], lt.phis[e] - m[e]) for e in lt.phis}
    G = GluedExtension(lt.nerve, lt, local, gluing)
    assert not G.morphism_failures() and not G.cocycle_failures()
    return G


def trivialization(lt: LiftingTriple) -> tuple[dict, dict]:
    """Some (a, m) solving λ = da, t = δa - dm, q = -δm, via d_T (a, -m) = (λ, t, q)."""
    from ..linalg import solve_linear

    T = total_complex(lt, lt.nerve)
    ot = obstruction_triple(lt)
    v = triple_vector(T, ot)
    x = solve_linear(T.d(2), v)
    if x is None:
        raise TrivializationInvalid(-1, "the obstruction class is nonzero")
    parts = T.unpack(2, x)
    Z = lt.center
    B = lt.coupling.B
    z = Z.module.dim
    a = {i: Z.from_center(c) for i, c in _cechdict(T, 0, 2, parts.get(0, ()), B.rank, z).items()} if 0 in parts else {}
    m = {e: Z.from_center(-c) for e, c in _cechdict(T, 1, 1, parts.get(1, ()), B.rank, z).items()} if 1 in parts else {}
    return a, m


def global_difference(G: GluedExtension, G2: GluedExtension) -> tuple:
    """Class in ℍ²(τ^{≥1}) separating two glued extensions with the same coupling.

    γ_i = ρ'_i - ρ_i - d η_i - 1/2[η_i, η_i],  ψ_ij = φ'_ij - φ_ij - η_j + η_i,
    with α'_i - α_i = ad η_i; the closed vector is (γ, -ψ).
    """
    lt, lt2 = _effective_triple(G), _effective_triple(G2)
    L = lt.coupling.L
    Z = lt.center
    etas, gam = {}, {}
    for i in lt.pairs:
        p, q = lt.pairs[i], lt2.pairs[i]
        eta = _phi(p, q)
        etas[i] = eta
        g = q.rho - p.rho - ce_apply(p.alpha, eta) - half(graded_bracket(L, eta, eta))
        gam[i] = Z.to_center(g)
    psi = {}
    for (i, j) in lt.phis:
        c = lt2.phis[(i, j)] - lt.phis[(i, j)] - etas[j] + etas[i]
        psi[(i, j)] = Z.to_center(c).scale(-1)
    T = total_complex(lt, lt.nerve)
    parts = {}
    for (p, q, o, n) in T.blocks(2):
        data = {0: gam, 1: psi}.get(p, {})
        parts[p] = _cechvec(T, p, data, T.K.rows[q].dims[T.K.nerve.of_degree(p)[0]])
    v = T.pack(2, parts)
    assert not any(T.d(2).apply(v))
    H2 = T.cohomology(2)
    return tuple(H2.coordinates(v)) if H2.ambient_dim else ()


def _effective_triple(G: GluedExtension) -> LiftingTriple:
    """The lifting triple actually used by the glued brackets and maps."""
    from ..extension.engine import splitting_to_pair

    pairs = {i: splitting_to_pair(E) for i, E in G.local.items()}
    phis = {}
    for e, g in G.gluing.items():
        E = G.local[e[1]]
        B, L = E.B, E.L
        vals = {}
        for b in range(B.rank):
            img = g.apply(E.canonical_section().apply(B.r_basis_element(b)))
            diff = vsub(img, E.canonical_section().apply(B.r_basis_element(b)))
            from ..linalg import solve_linear
            vals[(b,)] = solve_linear(E.injection, diff)
        phis[e] = Cochain(1, B.rank, L.dim, vals)
    return LiftingTriple(G.nerve, pairs, phis)


def torsor_action_global(G: GluedExtension, gammas: Mapping[int, Cochain], psis: Mapping[tuple, Cochain]) -> GluedExtension:
    """Glue (α_i, ρ_i + γ_i, φ_ij + ψ_ij); (γ, -ψ) must be closed in T²."""
    lt = _effective_triple(G)
    Z = lt.center
    T = total_complex(lt, lt.nerve)
    gz = {i: Z.to_center(c) for i, c in gammas.items()}
    pz = {e: Z.to_center(c).scale(-1) for e, c in psis.items()}
    parts = {}
    for (p, q, o, n) in T.blocks(2):
        data = {0: gz, 1: pz}.get(p, {})
        parts[p] = _cechvec(T, p, data, T.K.rows[q].dims[T.K.nerve.of_degree(p)[0]])
    if any(T.d(2).apply(T.pack(2, parts))):
        raise NotClosed("(γ, ψ) is not closed in the truncated total complex")
    return glue_extension(shift_triple(lt, gammas, psis))
