"""A two-chart model of the Atiyah algebroid of O(n) on the projective line.

Charts U0 (coordinate z) and U1 (coordinate w = 1/z) with frames e0, e1 of
O(n), e1 = z^n e0.  On U_i the flat connection killing e_i splits
D = O ⊕ Θ, giving the frame σ_i (the lift of the coordinate field) and ι
(the identity endomorphism).  On the overlap

    σ1 = -z² σ0 + g ι,    g = n z for the flat splittings.

A form of the algebroid is stored in split coordinates on each chart:

    degree 0:  f
    degree 1:  a = ω(σ), b = ω(ι)
    degree 2:  c = ω(σ, ι)

and the overlap uses the chart-0 frame.  The torus z -> t z acts on all
data, every map preserves weight, and each weight piece is a finite
subcomplex.  Truncating to weights in [-D, D] is therefore exact on the
weights kept; stability in D is certified by comparing with D + 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Optional

from ..cech import DoubleComplex, Nerve, SheafData, cech_cohomology
from ..linalg import CochainComplex, MatrixQ, rank
from .laurent import Laurent, ZERO

VERTEX0, VERTEX1, EDGE = (0,), (1,), (0, 1)
COMPONENTS = {0: ("f",), 1: ("a", "b"), 2: ("c",)}
GRADE = {"f": 0, "b": 0, "a": 1, "c": 1}          # number of B-slots
OFFSET = {"f": 0, "b": 0, "a": 1, "c": 1}         # weight of the frame covector


class TruncationUnstable(ValueError):
    pass


class OutsideWindow(ValueError):
    pass


def weight(simplex: tuple, comp: str, e: int) -> int:
    if simplex == VERTEX1:
        return -e - OFFSET[comp]
    return e + OFFSET[comp]


def exponent(simplex: tuple, comp: str, wt: int) -> Optional[int]:
    e = -wt - OFFSET[comp] if simplex == VERTEX1 else wt - OFFSET[comp]
    if simplex != EDGE and e < 0:
        return None
    return e


# Laurent-level operators on local forms {comp: Laurent}

def vertical(q: int, form: Mapping[str, Laurent]) -> dict:
    """d on one chart: f -> (∂f, 0), (a, b) -> ∂b."""
    if q == 0:
        return {"a": form.get("f", ZERO).deriv(), "b": ZERO}
    if q == 1:
        return {"c": form.get("b", ZERO).deriv()}
    return {}


def restrict_from_chart1(q: int, form: Mapping[str, Laurent], g: Laurent) -> dict:
    """Chart-1 split coordinates -> chart-0 split coordinates on the overlap."""
    if q == 0:
        return {"f": form.get("f", ZERO).invert()}
    if q == 1:
        b = form.get("b", ZERO).invert()
        a = (g * b - form.get("a", ZERO).invert()).shift(-2)
        return {"a": a, "b": b}
    if q == 2:
        return {"c": -form.get("c", ZERO).invert().shift(-2)}
    return {}


def transition(n: int, U0: Laurent = ZERO, U1: Laurent = ZERO) -> Laurent:
    """Coefficient g in σ1 = -z² σ0 + g ι for the splittings σ_i + U_i ι."""
    return Laurent.monomial(1, n) + U1.invert() + U0.shift(2)


def form_degree(comp: str) -> int:
    return 2 if comp == "c" else 1 if comp in ("a", "b") else 0


def total_dT(k: int, x: Mapping[tuple, Laurent], g: Laurent) -> dict:
    """d + (-1)^k δ on a cochain {(simplex, comp): Laurent} of total degree k."""
    out: dict = {}

    def add(key, val):
        out[key] = out.get(key, ZERO) + val

    by_simplex: dict = {}
    for (s, comp), v in x.items():
        by_simplex.setdefault(s, {})[comp] = v
    sign = -1 if k % 2 else 1
    for s, form in by_simplex.items():
        q = k - (len(s) - 1)
        for comp, v in vertical(q, form).items():
            add((s, comp), v)
        if s == VERTEX1:
            for comp, v in restrict_from_chart1(q, form, g).items():
                add((EDGE, comp), v.scale(sign))
        elif s == VERTEX0:
            for comp, v in form.items():
                add((EDGE, comp), v.scale(-sign))
    return {key: v for key, v in out.items() if not v.is_zero()}


def cochain_keys(k: int) -> list[tuple]:
    out = []
    for p, simplices in ((0, (VERTEX0, VERTEX1)), (1, (EDGE,))):
        q = k - p
        for s in simplices:
            for comp in COMPONENTS.get(q, ()):
                out.append((s, comp))
    return out


@dataclass(frozen=True)
class AtiyahExtensionData:
    n: int
    sigma1: tuple            # (coefficient of σ0, coefficient of ι) on the overlap
    phi01: Laurent           # s_1 - s_0 as a multiple of dz
    log_derivative: Laurent  # the same form from the transition function z^n

    @property
    def g(self) -> Laurent:
        return self.sigma1[1]


def operator_in_chart0(F: Laurent, H: Laurent, n: int) -> tuple:
    """Write P = F(w)∂_w + H(w), acting on sections v e1, as f ∂_z + h on u e0.

    Computed by applying P to the test sections u = 1 and u = z.
    """
    def act(u: Laurent) -> Laurent:
        v = (u * Laurent.monomial(-n)).invert()          # u e0 = v e1, v in w
        pv = F * v.deriv() + H * v
        return pv.invert() * Laurent.monomial(n)         # back to the e0 frame
    h = act(Laurent.monomial(0))
    f = act(Laurent.monomial(1)) - h * Laurent.monomial(1)
    return f, h


def atiyah_data(n: int) -> AtiyahExtensionData:
    f, h = operator_in_chart0(Laurent.monomial(0), ZERO, n)   # σ1 kills e1 and lifts ∂_w
    phi = (-h).shift(-2)
    logd = Laurent.monomial(-n).deriv() * Laurent.monomial(n)
    return AtiyahExtensionData(n, (f, h), phi, logd)


@dataclass
class P1Model:
    n: int
    D: int
    g: Laurent
    nerve: Nerve = field(default_factory=lambda: Nerve.from_maximal(2, [(0, 1)]))
    certificate: Optional[dict] = None

    # window bases: basis[q][simplex] = [(comp, exponent)]
    @cached_property
    def basis(self) -> dict:
        out = {}
        for q, comps in COMPONENTS.items():
            out[q] = {}
            for s in self.nerve.simplices:
                rows = []
                for comp in comps:
                    for wt in range(-self.D, self.D + 1):
                        e = exponent(s, comp, wt)
                        if e is not None:
                            rows.append((comp, e))
                out[q][s] = rows
        return out

    def _read(self, q: int, s: tuple, form: Mapping[str, Laurent]) -> list:
        idx = {ce: i for i, ce in enumerate(self.basis[q][s])}
        v = [0] * len(idx)
        for comp, lp in form.items():
            for e, c in lp.terms.items():
                if (comp, e) not in idx:
                    raise OutsideWindow((s, comp, e))
                v[idx[(comp, e)]] = c
        return v

    def _matrix(self, q_src: int, s_src: tuple, q_tgt: int, s_tgt: tuple, op) -> MatrixQ:
        cols = []
        for comp, e in self.basis[q_src][s_src]:
            cols.append(self._read(q_tgt, s_tgt, op({comp: Laurent.monomial(e)})))
        return MatrixQ.from_columns(cols, len(self.basis[q_tgt][s_tgt]))

    @cached_property
    def rows(self) -> tuple:
        out = []
        for q in COMPONENTS:
            dims = {s: len(self.basis[q][s]) for s in self.nerve.simplices}
            res = {
                (VERTEX0, EDGE): self._matrix(q, VERTEX0, q, EDGE, lambda fm: dict(fm)),
                (VERTEX1, EDGE): self._matrix(q, VERTEX1, q, EDGE, lambda fm, q=q: restrict_from_chart1(q, fm, self.g)),
            }
            out.append(SheafData(self.nerve, dims, res))
        return tuple(out)

    @cached_property
    def double(self) -> DoubleComplex:
        vert = []
        for q in range(len(COMPONENTS) - 1):
            vert.append({s: self._matrix(q, s, q + 1, s, lambda fm, q=q: vertical(q, fm)) for s in self.nerve.simplices})
        return DoubleComplex(self.nerve, self.rows, tuple(vert))

    @cached_property
    def total(self):
        return self.double.total(0)

    @property
    def top(self) -> int:
        return self.total.top

    @cached_property
    def complex(self) -> CochainComplex:
        return self.total.complex

    def labels(self, k: int) -> list[tuple]:
        """(simplex, comp, exponent) for each coordinate of T^k."""
        out = []
        for (p, q, _, _) in self.total.blocks(k):
            for s in self.nerve.of_degree(p):
                out.extend((s, comp, e) for comp, e in self.basis[q][s])
        return out

    def vector(self, k: int, x: Mapping[tuple, Laurent]) -> tuple:
        idx = {lab: i for i, lab in enumerate(self.labels(k))}
        v = [0] * len(idx)
        for (s, comp), lp in x.items():
            for e, c in lp.terms.items():
                if (s, comp, e) not in idx:
                    raise OutsideWindow((s, comp, e))
                v[idx[(s, comp, e)]] = c
        from ..linalg import vec
        return vec(v)

    def cochain(self, k: int, v) -> dict:
        out: dict = {}
        for (s, comp, e), c in zip(self.labels(k), v):
            if c:
                out[(s, comp)] = out.get((s, comp), ZERO) + Laurent.monomial(e, c)
        return out

    def indices(self, k: int, comps: str) -> list[int]:
        return [i for i, (_, comp, _) in enumerate(self.labels(k)) if comp in comps]

    def restrictions_injective(self) -> bool:
        return all(rank(m) == m.cols for row in self.rows for m in row.restrictions.values())


def build_p1_model(n: int, D: int, certify: bool = True, U0: Laurent = ZERO, U1: Laurent = ZERO) -> P1Model:
    """The truncated model of D_{O(n)}; raises TruncationUnstable for small D."""
    if D < abs(n) + 2:
        raise TruncationUnstable(f"truncation {D} is below |n| + 2 = {abs(n) + 2}")
    model = P1Model(n, D, transition(n, U0, U1))
    if certify:
        from .checks import truncation_certificate
        cert = truncation_certificate(model)
        if not cert["stable"]:
            raise TruncationUnstable(f"dimensions change between D = {D} and D = {D + 1}")
        model.certificate = cert
    return model


def line_bundle_sheaf(m: int, D: int, sign: int = 1) -> SheafData:
    """Sections of the line bundle with e1 = sign z^m e0, weights in [-D, D]."""
    nerve = Nerve.from_maximal(2, [(0, 1)])
    b0 = [e for e in range(0, D + 1)]
    b1 = [j for j in range(0, m + D + 1) if -D <= m - j <= D]
    b01 = list(range(-D, D + 1))
    pos = {e: i for i, e in enumerate(b01)}
    r0 = MatrixQ(len(b01), len(b0), {(pos[e], i): 1 for i, e in enumerate(b0)})
    r1 = MatrixQ(len(b01), len(b1), {(pos[m - j], i): sign for i, j in enumerate(b1)})
    return SheafData(nerve, {VERTEX0: len(b0), VERTEX1: len(b1), EDGE: len(b01)},
                     {(VERTEX0, EDGE): r0, (VERTEX1, EDGE): r1})


def line_bundle_cohomology(m: int, D: int, sign: int = 1) -> list[int]:
    sh = line_bundle_sheaf(m, D, sign)
    return [h.dim for h in cech_cohomology(sh.nerve, sh)]
