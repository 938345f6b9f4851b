"""Extensions of a Lie-Rinehart algebra B by a totally intransitive L.

A coupling fixes, for every R-basis element of B, a derivation of L up to
inner derivations.  A lifting pair (alpha, rho) picks actual derivations and
a 2-form whose adjoint absorbs the curvature of alpha.  The 3-form
lambda = d_alpha rho is central and closed; the extension bracket on B ⊕ L
satisfies Jacobi exactly when lambda vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from ..core.algebra import RModule
from ..core.forms import (
    Cochain,
    Connection,
    ce_apply,
    ce_differential,
    cohomology,
    curvature,
    graded_bracket,
    half,
)
from ..core.lierinehart import LieRinehart, validate_lie_rinehart
from ..core.subobjects import canonical_subobjects, center_basis, restrict_operator, submodule
from ..linalg import (
    MatrixQ,
    ZERO,
    Subquotient,
    in_span,
    is_zero_vec,
    solve_linear,
    unit_vec,
    vsub,
)


class NoRhoSolution(ValueError):
    pass


class CenterEscape(ValueError):
    pass


class CouplingMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class NotASection(ValueError):
    pass


class InvalidCoupling(ValueError):
    pass


def _flat(m: MatrixQ) -> tuple:
    return tuple(m[i, j] for i in range(m.rows) for j in range(m.cols))


def solve_ad(L: LieRinehart, m: MatrixQ) -> Optional[tuple]:
    """Some x in L with ad_x = m, or None."""
    return solve_linear(L.ad_map, _flat(m))


@dataclass(frozen=True)
class CenterData:
    """Z(L) as a module, its inclusion into L, and the induced flat connection."""

    module: RModule
    inclusion: MatrixQ
    connection: Connection

    def to_center(self, c: Cochain) -> Cochain:
        vals = {}
        for t, v in c.values.items():
            z = solve_linear(self.inclusion, v)
            if z is None:
                raise CenterEscape(f"value on {t} is not central")
            vals[t] = z
        return Cochain(c.degree, c.rank, self.module.dim, vals)

    def from_center(self, c: Cochain) -> Cochain:
        return c.map_values(self.inclusion)

    def is_central(self, c: Cochain) -> bool:
        basis = self.inclusion.columns()
        return all(in_span(v, basis, self.inclusion.rows) for v in c.values.values())

    def d(self, c: Cochain) -> Cochain:
        return ce_apply(self.connection, c)

    def cohomology(self, p: int) -> Subquotient:
        B = self.connection.algebroid
        return cohomology(B, self.connection, self.module, p)


@dataclass(frozen=True)
class Coupling:
    """An outer action of B on L: one Der_D(L) representative per R-basis element."""

    B: LieRinehart
    L: LieRinehart
    outer: tuple  # MatrixQ per R-basis element of B

    def connection(self) -> Connection:
        return Connection.from_matrices(self.B, self.L.module, list(self.outer))

    @cached_property
    def center(self) -> CenterData:
        Lm = self.L.module
        zb = center_basis(self.L)
        Z, inc = submodule(Lm, zb)
        mats = [restrict_operator(m, inc) for m in self.outer]
        return CenterData(Z, inc, Connection.from_matrices(self.B, Z, mats))

    def validate(self) -> list[str]:
        B, L = self.B, self.L
        problems = []
        if not L.is_totally_intransitive():
            problems.append("L has a nonzero anchor")
            return problems
        if len(self.outer) != B.rank:
            problems.append("one representative per R-basis element of B is required")
            return problems
        alpha = self.connection()
        problems += alpha.validate()
        subs = canonical_subobjects(L)
        d, r = L.dim, L.base.dim
        from ..core.subobjects import flatten_pair
        for i, m in enumerate(self.outer):
            v = flatten_pair(m, alpha.symbols[i].matrix)
            if not in_span(v, subs.der_d, d * d + r * r):
                problems.append(f"representative for {B.rank_labels[i]} is not in Der_D(L)")
        F = curvature(alpha)
        for (i, j), f in F.values.items():
            if solve_ad(L, f) is None:
                problems.append(f"curvature on ({B.rank_labels[i]}, {B.rank_labels[j]}) is not inner")
        return problems


@dataclass(frozen=True)
class LiftingPair:
    coupling: Coupling
    alpha: Connection
    rho: Cochain

    @property
    def B(self) -> LieRinehart:
        return self.coupling.B

    @property
    def L(self) -> LieRinehart:
        return self.coupling.L

    def validate(self) -> list[str]:
        problems = []
        L = self.L
        for i, (a, abar) in enumerate(zip(self.alpha.operators, self.coupling.outer)):
            if solve_ad(L, a - abar) is None:
                problems.append(f"alpha({self.B.rank_labels[i]}) is not a lift of the coupling")
        F = curvature(self.alpha)
        for i in range(self.B.rank):
            for j in range(i + 1, self.B.rank):
                if L.ad_matrix(self.rho(i, j)) != F(i, j):
                    problems.append(f"ad rho != F on ({i}, {j})")
        return problems


@dataclass(frozen=True)
class JacobiFailure:
    """Returned instead of an extension when the bracket on B ⊕ L is not Lie."""

    obstruction: Cochain
    triple: tuple           # R-basis indices of the total algebra
    labels: tuple
    residual: tuple
    failures: tuple = ()

    ok = False


@dataclass(frozen=True)
class ExtensionStructure:
    """A total algebra A with L -> A -> B; Q-coordinates of A list B first, then L."""

    total: LieRinehart
    B: LieRinehart
    L: LieRinehart
    injection: MatrixQ
    projection: MatrixQ
    coupling: Coupling
    pair: Optional[LiftingPair] = None

    ok = True

    def canonical_section(self) -> MatrixQ:
        return self.projection.transpose()

    def bracket_table(self) -> dict:
        return dict(self.total.structure)


def ad_phi_shift(L: LieRinehart, phi: Cochain) -> list[MatrixQ]:
    return [L.ad_matrix(phi(i)) for i in range(phi.rank)]


def lift_coupling(c: Coupling) -> LiftingPair:
    """Deterministic lifting pair: canonical outer representatives, rho by linear solve."""
    B, L = c.B, c.L
    subs = canonical_subobjects(L)
    d, r = L.dim, L.base.dim
    from ..core.subobjects import flatten_pair, unflatten_pair
    alpha0 = c.connection()
    mats = []
    for i, m in enumerate(c.outer):
        v = flatten_pair(m, alpha0.symbols[i].matrix)
        red = subs.out_d.reduce(v)
        mats.append(unflatten_pair(red, d, r)[0])
    alpha = Connection.from_matrices(B, L.module, mats)
    F = curvature(alpha)
    vals = {}
    for (i, j), f in F.values.items():
        x = solve_ad(L, f)
        if x is None:
            raise NoRhoSolution(f"curvature on ({i}, {j}) is not inner")
        vals[(i, j)] = x
    pair = LiftingPair(c, alpha, Cochain(2, B.rank, L.dim, vals))
    assert not pair.validate()
    return pair


def obstruction_cochain(p: LiftingPair) -> Cochain:
    """lambda = d_alpha rho; checked to be central and closed."""
    lam = ce_apply(p.alpha, p.rho)
    Z = p.coupling.center
    if not Z.is_central(lam):
        raise CenterEscape("d_alpha rho has non-central values: the pair is not valid")
    assert Z.d(Z.to_center(lam)).is_zero()
    return lam


@dataclass(frozen=True)
class ObstructionClass:
    coordinates: tuple
    cochain: Cochain
    pair: LiftingPair
    primitive: Optional[Cochain]   # w with lambda = d w when the class vanishes

    @property
    def is_zero(self) -> bool:
        return not any(self.coordinates)


def _default_perturbation(p: LiftingPair) -> Cochain:
    L = p.L
    vals = {}
    for i in range(p.B.rank):
        vals[(i,)] = L.r_basis_element(i % L.rank) if L.rank else ()
    return Cochain(1, p.B.rank, L.dim, vals)


def obstruction_class(c: Coupling, pair: Optional[LiftingPair] = None) -> ObstructionClass:
    p = pair or lift_coupling(c)
    Z = c.center
    lam = obstruction_cochain(p)
    lz = Z.to_center(lam)
    H3 = Z.cohomology(3)
    coords = H3.coordinates(lz.to_vector()) if H3.ambient_dim else ()
    # recompute with a perturbed pair
    q = change_lifting_pair(p, _default_perturbation(p))
    lz2 = Z.to_center(obstruction_cochain(q))
    if H3.ambient_dim:
        assert H3.coordinates(lz2.to_vector()) == coords
    prim = None
    if not any(coords):
        if H3.ambient_dim:
            d2 = ce_differential(c.B, Z.connection, Z.module, 2)
            w = solve_linear(d2, lz.to_vector())
            assert w is not None
            prim = Z.from_center(Cochain.from_vector(2, c.B.rank, Z.module.dim, w))
        else:
            prim = Cochain(2, c.B.rank, c.L.dim)
    return ObstructionClass(tuple(coords), lam, p, prim)


def change_lifting_pair(p: LiftingPair, phi: Cochain) -> LiftingPair:
    """(alpha + ad_phi, rho + d_alpha phi + 1/2 [phi, phi])."""
    L = p.L
    alpha2 = p.alpha.shifted(ad_phi_shift(L, phi))
    rho2 = p.rho + ce_apply(p.alpha, phi) + half(graded_bracket(L, phi, phi))
    return LiftingPair(p.coupling, alpha2, rho2)


def differential_shift_check(alpha: Connection, alpha2: Connection, phi: Cochain, eta: Cochain,
                             L: LieRinehart) -> Cochain:
    """d_{alpha'} eta - d_alpha eta - [phi, eta]; zero when alpha' - alpha = ad_phi."""
    return ce_apply(alpha2, eta) - ce_apply(alpha, eta) - graded_bracket(L, phi, eta)


def extension_algebra(p: LiftingPair) -> LieRinehart:
    """B ⊕ L with the bracket built from (alpha, rho), Jacobi not enforced."""
    B, L = p.B, p.L
    R = B.base
    nB, nL = B.rank, L.rank
    brackets = {}
    for i in range(nB):
        for j in range(i + 1, nB):
            bb = B.r_coefficients(B.bracket(B.r_basis_element(i), B.r_basis_element(j)))
            ll = L.r_coefficients(p.rho(i, j))
            brackets[(i, j)] = list(bb) + list(ll)
    zero_b = [tuple([ZERO] * R.dim)] * nB
    for i in range(nB):
        for k in range(nL):
            v = p.alpha.operators[i].apply(L.r_basis_element(k))
            brackets[(i, nB + k)] = zero_b + list(L.r_coefficients(v))
    for k in range(nL):
        for m in range(k + 1, nL):
            v = L.bracket(L.r_basis_element(k), L.r_basis_element(m))
            brackets[(nB + k, nB + m)] = zero_b + list(L.r_coefficients(v))
    anchors = [B.anchor_of(B.r_basis_element(i)) for i in range(nB)] + [R.zero_derivation()] * nL
    labels = list(B.rank_labels) + list(L.rank_labels)
    return LieRinehart.from_basis_data(R, nB + nL, brackets, anchors, labels, f"{B.name}⋉{L.name}")


def _inclusions(B: LieRinehart, L: LieRinehart) -> tuple[MatrixQ, MatrixQ]:
    dB, dL = B.dim, L.dim
    inj = MatrixQ(dB + dL, dL, {(dB + k, k): 1 for k in range(dL)})
    proj = MatrixQ(dB, dB + dL, {(k, k): 1 for k in range(dB)})
    return inj, proj


def build_extension(p: LiftingPair):
    """The extension defined by a lifting pair, or a JacobiFailure carrying lambda."""
    A = extension_algebra(p)
    fails = validate_lie_rinehart(A)
    lam = ce_apply(p.alpha, p.rho)
    if fails:
        jac = [f for f in fails if f.kind == "jacobi"]
        first = jac[0] if jac else fails[0]
        n = A.base.dim
        triple = tuple(sorted({u // n for u in first.indices}))
        return JacobiFailure(lam, triple, tuple(A.rank_labels[t] for t in triple), first.residual, tuple(fails))
    assert lam.is_zero()
    inj, proj = _inclusions(p.B, p.L)
    return ExtensionStructure(A, p.B, p.L, inj, proj, p.coupling, p)


def section_from_columns(E: ExtensionStructure, images: Sequence[Sequence]) -> MatrixQ:
    """R-linear section given the images of the R-basis of B (Q-vectors of A)."""
    B, A = E.B, E.total
    n = B.base.dim
    cols = [None] * B.dim
    for i in range(B.rank):
        for a in range(n):
            f = unit_vec(n, a)
            cols[i * n + a] = A.scalar_mul(f, images[i])
    return MatrixQ.from_columns(cols, A.dim)


def splitting_to_pair(E: ExtensionStructure, s: Optional[MatrixQ] = None) -> LiftingPair:
    """(alpha_s, rho_s) with alpha_s(b) l = [s b, l], rho_s = [s b1, s b2] - s[b1, b2]."""
    s = E.canonical_section() if s is None else s
    B, L, A = E.B, E.L, E.total
    if E.projection @ s != MatrixQ.identity(B.dim):
        raise NotASection("projection ∘ s is not the identity")
    inj = E.injection

    def pull(v):
        x = solve_linear(inj, v)
        if x is None:
            raise NotASection("value does not lie in L")
        return x

    sb = [s.apply(B.r_basis_element(i)) for i in range(B.rank)]
    mats = []
    for i in range(B.rank):
        cols = [pull(A.bracket(sb[i], inj.column(y))) for y in range(L.dim)]
        mats.append(MatrixQ.from_columns(cols, L.dim))
    vals = {}
    for i in range(B.rank):
        for j in range(i + 1, B.rank):
            br = A.bracket(sb[i], sb[j])
            sbr = s.apply(B.bracket(B.r_basis_element(i), B.r_basis_element(j)))
            v = pull(vsub(br, sbr))
            if not is_zero_vec(v):
                vals[(i, j)] = v
    alpha = Connection.from_matrices(B, L.module, mats)
    coupling = E.coupling if E.coupling is not None else Coupling(B, L, tuple(mats))
    return LiftingPair(coupling, alpha, Cochain(2, B.rank, L.dim, vals))


def _phi_between(p: LiftingPair, q: LiftingPair) -> Cochain:
    """The canonical phi with alpha_q - alpha_p = ad_phi (free variables zero)."""
    L = p.L
    vals = {}
    for i, (a, b) in enumerate(zip(p.alpha.operators, q.alpha.operators)):
        x = solve_ad(L, b - a)
        if x is None:
            raise CouplingMismatch(f"the two extensions induce different couplings on {p.B.rank_labels[i]}")
        vals[(i,)] = x
    return Cochain(1, p.B.rank, L.dim, vals)


@dataclass(frozen=True)
class EquivalenceWitness:
    eta: Cochain      # alpha' - alpha = ad_eta
    beta: Cochain     # central 1-form with rho' - rho - d eta - 1/2[eta, eta] = d beta

    def map_matrix(self, E: ExtensionStructure, E2: ExtensionStructure) -> MatrixQ:
        """The isomorphism (b, l) -> (b, l - (eta + beta)(b)) from E to E2."""
        B, L = E.B, E.L
        phi = self.eta + self.beta
        cols = []
        for u in range(E.total.dim):
            x = unit_vec(E.total.dim, u)
            b = E.projection.apply(x)
            # phi(b): R-linear extension
            val = [ZERO] * L.dim
            for i, f in enumerate(B.r_coefficients(b)):
                if not is_zero_vec(f):
                    w = L.scalar_mul(f, phi(i))
                    val = [a + c for a, c in zip(val, w)]
            img = vsub(x, E2.injection.apply(tuple(val)))
            cols.append(img)
        return MatrixQ.from_columns(cols, E2.total.dim)


def extensions_equivalent(E: ExtensionStructure, E2: ExtensionStructure) -> Optional[EquivalenceWitness]:
    """Decide equivalence of two extensions inducing the same coupling.

    Every eta solving alpha' - alpha = ad_eta differs from the particular
    solution by a central 1-form, which changes neither the quadratic term nor
    anything but a d_bar-exact summand; so the remaining condition is linear
    in beta and the answer is always decided.
    """
    p, q = splitting_to_pair(E), splitting_to_pair(E2)
    eta = _phi_between(p, q)
    L = p.L
    gamma = q.rho - p.rho - ce_apply(p.alpha, eta) - half(graded_bracket(L, eta, eta))
    Z = E.coupling.center
    if not Z.is_central(gamma):
        return None
    gz = Z.to_center(gamma)
    d1 = ce_differential(p.B, Z.connection, Z.module, 1)
    b = solve_linear(d1, gz.to_vector())
    if b is None:
        return None
    beta = Z.from_center(Cochain.from_vector(1, p.B.rank, Z.module.dim, b))
    return EquivalenceWitness(eta, beta)


def is_bracket_morphism(f: MatrixQ, A: LieRinehart, A2: LieRinehart) -> bool:
    for u in range(A.dim):
        for v in range(u + 1, A.dim):
            x, y = unit_vec(A.dim, u), unit_vec(A.dim, v)
            if f.apply(A.bracket(x, y)) != A2.bracket(f.apply(x), f.apply(y)):
                return False
    return True


def torsor_action(E: ExtensionStructure, gamma: Cochain) -> ExtensionStructure:
    """The extension with bracket built from (alpha_s, rho_s + gamma)."""
    Z = E.coupling.center
    if not Z.is_central(gamma):
        raise NotClosed("gamma must take central values")
    if not Z.d(Z.to_center(gamma)).is_zero():
        raise NotClosed("gamma is not closed")
    p = splitting_to_pair(E)
    out = build_extension(LiftingPair(p.coupling, p.alpha, p.rho + gamma))
    assert isinstance(out, ExtensionStructure)
    return out


@dataclass(frozen=True)
class DifferenceClass:
    coordinates: tuple
    cochain: Cochain
    phi: Cochain


def difference_class(E: ExtensionStructure, E2: ExtensionStructure) -> DifferenceClass:
    """gamma = rho' - rho - d_alpha phi - 1/2 [phi, phi] and its class in H^2(B; Z(L))."""
    p, q = splitting_to_pair(E), splitting_to_pair(E2)
    phi = _phi_between(p, q)
    L = p.L
    gamma = q.rho - p.rho - ce_apply(p.alpha, phi) - half(graded_bracket(L, phi, phi))
    Z = E.coupling.center
    if not Z.is_central(gamma):
        raise CenterEscape("difference is not central")
    gz = Z.to_center(gamma)
    assert Z.d(gz).is_zero()
    H2 = Z.cohomology(2)
    coords = H2.coordinates(gz.to_vector()) if H2.ambient_dim else ()
    return DifferenceClass(tuple(coords), gamma, phi)


def trivial_coupling(B: LieRinehart, L: LieRinehart) -> Coupling:
    return Coupling(B, L, tuple(MatrixQ(L.dim, L.dim) for _ in range(B.rank)))


def pair_from_data(c: Coupling, alpha_mats: Sequence[MatrixQ], rho: Cochain) -> LiftingPair:
    return LiftingPair(c, Connection.from_matrices(c.B, c.L.module, list(alpha_mats)), rho)
