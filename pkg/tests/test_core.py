import random

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.core import (
    BaseAlgebra,
    Cochain,
    Connection,
    NotFlat,
    NotTotallyIntransitive,
    RModule,
    abelian,
    affine_line,
    betti_numbers,
    bianchi_residual,
    canonical_subobjects,
    ce_apply,
    ce_differential,
    cohomology,
    cup_curvature,
    curvature,
    form_space,
    heisenberg,
    sl2,
    sl2_plus_line,
    trivial_coefficients,
    validate_lie_rinehart,
)
from algebroid.core.catalog import broken_anchor, dual_numbers_tangent, jacobi_broken
from algebroid.linalg import MatrixQ

from oracles import ce_dims

LIE = {"heis3": heisenberg, "sl2": sl2, "aff1": affine_line, "abelian3": lambda: abelian(3), "sl2+Q": sl2_plus_line}


def trivial_betti(g):
    M, conn = trivial_coefficients(g)
    return betti_numbers(g, conn, M)


@pytest.mark.parametrize("name", sorted(LIE))
def test_trivial_cohomology_matches_the_exterior_algebra_oracle(name):
    g = LIE[name]()
    assert trivial_betti(g) == ce_dims(dict(g.structure), g.dim)


@pytest.mark.parametrize("name", ["heis3", "sl2", "aff1"])
def test_adjoint_cohomology_matches_the_oracle(name):
    g = LIE[name]()
    M = RModule.free(g.base, g.dim)
    ads = [g.ad_matrix(tuple(int(i == j) for j in range(g.dim))) for i in range(g.dim)]
    conn = Connection.from_matrices(g, M, ads)
    rep = [m.to_dense() for m in ads]
    assert betti_numbers(g, conn, M) == ce_dims(dict(g.structure), g.dim, rep, g.dim)


def test_known_betti_numbers():
    assert trivial_betti(heisenberg()) == [1, 2, 2, 1]
    assert trivial_betti(sl2()) == [1, 0, 0, 1]
    assert trivial_betti(affine_line()) == [1, 1, 0]
    assert trivial_betti(abelian(3)) == [1, 3, 3, 1]


@pytest.mark.parametrize("make", [heisenberg, sl2, affine_line, dual_numbers_tangent])
def test_catalog_entries_validate(make):
    assert validate_lie_rinehart(make()) == []


def test_jacobi_corruption_is_reported_on_its_triple():
    g = jacobi_broken()
    fails = validate_lie_rinehart(g)
    assert fails
    assert {f.kind for f in fails} == {"jacobi"}
    assert fails[0].describe(g.labels, g.base.labels) == "jacobi fails on (e1, e2, e3)"


def test_anchor_law_violation_is_reported():
    kinds = {f.kind for f in validate_lie_rinehart(broken_anchor())}
    assert "anchor" in kinds


def test_truncated_polynomial_algebra_is_valid():
    R = BaseAlgebra.truncated_polynomials(3)
    assert R.validate() == []
    assert len(R.derivation_basis) == 2


@pytest.mark.parametrize("make", [heisenberg, sl2, affine_line, sl2_plus_line, dual_numbers_tangent])
def test_differential_squares_to_zero(make):
    B = make()
    M, conn = trivial_coefficients(B)
    for p in range(B.rank - 1):
        assert (ce_differential(B, conn, M, p + 1) @ ce_differential(B, conn, M, p)).is_zero()


small_int = st.integers(-2, 2)


@st.composite
def connections_on_heis(draw):
    B = heisenberg()
    M = RModule.free(B.base, 2)
    mats = [MatrixQ.from_rows(draw(st.lists(st.lists(small_int, min_size=2, max_size=2), min_size=2, max_size=2)))
            for _ in range(3)]
    return Connection.from_matrices(B, M, mats)


@settings(max_examples=60, deadline=None)
@given(connections_on_heis(), st.data())
def test_square_of_the_twisted_differential_is_the_curvature(alpha, data):
    B, M = alpha.algebroid, alpha.target
    for p in range(2):
        n = form_space(B, M, p).dim
        v = data.draw(st.lists(small_int, min_size=n, max_size=n))
        xi = Cochain.from_vector(p, B.rank, M.dim, v)
        assert ce_apply(alpha, ce_apply(alpha, xi)) == cup_curvature(curvature(alpha), xi)


@settings(max_examples=60, deadline=None)
@given(connections_on_heis())
def test_bianchi_identity(alpha):
    assert bianchi_residual(alpha) == {}


def test_cohomology_refuses_curved_connections():
    B = abelian(2)
    M = RModule.free(B.base, 2)
    a = MatrixQ.from_rows([[0, 1], [0, 0]])
    b = MatrixQ.from_rows([[0, 0], [1, 0]])
    with pytest.raises(NotFlat):
        cohomology(B, Connection.from_matrices(B, M, [a, b]), M, 1)


def test_canonical_subobjects_of_heis3():
    dims = canonical_subobjects(heisenberg()).dims
    # center = span(e3); inner derivations have dimension 2
    assert dims["center"] == 1
    assert dims["ad"] == 2
    assert dims["der_d"] == 6
    assert dims["out_d"] == 4


def test_canonical_subobjects_of_sl2_has_no_outer_part():
    dims = canonical_subobjects(sl2()).dims
    assert dims["center"] == 0 and dims["out_d"] == 0


def test_canonical_subobjects_need_zero_anchor():
    with pytest.raises(NotTotallyIntransitive):
        canonical_subobjects(dual_numbers_tangent())


def test_cochain_vector_round_trip():
    rng = random.Random(7)
    for p in range(4):
        n = form_space(heisenberg(), RModule.free(heisenberg().base, 2), p).dim
        v = tuple(rng.randint(-3, 3) for _ in range(n))
        assert Cochain.from_vector(p, 3, 2, v).to_vector() == v
