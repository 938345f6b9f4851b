import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.core import Cochain, abelian, heisenberg, sl2, validate_lie_rinehart
from algebroid.extension import (
    Coupling,
    CouplingMismatch,
    ExtensionStructure,
    JacobiFailure,
    NotClosed,
    build_extension,
    change_lifting_pair,
    difference_class,
    extensions_equivalent,
    is_bracket_morphism,
    lift_coupling,
    obstruction_class,
    obstruction_cochain,
    pair_from_data,
    torsor_action,
    trivial_coupling,
)
from algebroid.linalg import MatrixQ, unit_vec
from algebroid.sampling import random_center_cocycle, random_one_form

from oracles import jacobi_failures, semidirect_bracket


def heis_base_pair(a=1, b=0, rho=None):
    B, L = heisenberg(), abelian(1)
    mats = (MatrixQ(1, 1, {(0, 0): a}), MatrixQ(1, 1, {(0, 0): b}), MatrixQ(1, 1))
    c = Coupling(B, L, mats)
    rho = {(1, 2): (1,)} if rho is None else rho
    return pair_from_data(c, mats, Cochain(2, 3, 1, rho))


def central_extension(c):
    pair = pair_from_data(trivial_coupling(abelian(2), abelian(1)), [MatrixQ(1, 1)] * 2,
                          Cochain(2, 2, 1, {(0, 1): (c,)} if c else {}))
    E = build_extension(pair)
    assert isinstance(E, ExtensionStructure)
    return E


def test_heis_base_fixture_fails_jacobi_on_e1_e2_e3():
    p = heis_base_pair()
    assert p.validate() == []
    assert obstruction_cochain(p) == Cochain(3, 3, 1, {(0, 1, 2): (1,)})
    out = build_extension(p)
    assert isinstance(out, JacobiFailure)
    assert out.labels == ("e1", "e2", "e3")


def test_heis_base_class_vanishes_with_an_exhibited_primitive():
    p = heis_base_pair()
    oc = obstruction_class(p.coupling, p)
    assert oc.is_zero
    Z = p.coupling.center
    assert Z.d(Z.to_center(oc.primitive)) == Z.to_center(oc.cochain)


def test_split_coupling_has_zero_class():
    c = trivial_coupling(abelian(2), heisenberg())
    oc = obstruction_class(c)
    assert oc.cochain.is_zero() and oc.is_zero


def test_lifted_pair_is_valid_for_heis_fibres():
    for B in (abelian(2), heisenberg(), sl2()):
        c = trivial_coupling(B, heisenberg())
        assert lift_coupling(c).validate() == []


# Jacobi through the dense oracle ---------------------------------------------

def random_inner_pair(rng):
    """B = heis3, L = heis3, alpha = ad x, rho = [x_i, x_j] - x_[e_i, e_j] + central noise."""
    B, L = heisenberg(), heisenberg()
    xs = [tuple(rng.randint(-2, 2) for _ in range(3)) for _ in range(3)]
    mats = [L.ad_matrix(x) for x in xs]
    out = {}
    for i in range(3):
        for j in range(i + 1, 3):
            br = L.bracket(xs[i], xs[j])
            lin = B.bracket(unit_vec(3, i), unit_vec(3, j))
            xb = tuple(sum(lin[k] * xs[k][t] for k in range(3)) for t in range(3))
            noise = rng.randint(-2, 2)
            out[(i, j)] = tuple(br[t] - xb[t] + (noise if t == 2 else 0) for t in range(3))
    return pair_from_data(Coupling(B, L, tuple(MatrixQ(3, 3) for _ in range(3))), mats, Cochain(2, 3, 3, out))


def random_abelian_fibre_pair(rng):
    rho = {(i, j): (rng.randint(-2, 2),) for i in range(3) for j in range(i + 1, 3)}
    return heis_base_pair(rng.randint(-2, 2), rng.randint(-2, 2), rho)


@pytest.mark.parametrize("family", [random_inner_pair, random_abelian_fibre_pair])
def test_jacobi_holds_exactly_when_lambda_vanishes(family):
    rng = random.Random(11)
    seen = set()
    for _ in range(40):
        p = family(rng)
        lam = obstruction_cochain(p)
        nb, nl = p.B.dim, p.L.dim
        br = semidirect_bracket(dict(p.B.structure), nb, dict(p.L.structure), nl,
                                [m.to_dense() for m in p.alpha.operators], dict(p.rho.values))
        oracle_ok = not jacobi_failures(br, nb + nl)
        assert oracle_ok == lam.is_zero()
        E = build_extension(p)
        assert isinstance(E, ExtensionStructure) == oracle_ok
        if oracle_ok:
            assert validate_lie_rinehart(E.total) == []
            for u in range(nb + nl):
                for v in range(nb + nl):
                    x, y = unit_vec(nb + nl, u), unit_vec(nb + nl, v)
                    assert E.total.bracket(x, y) == tuple(br(list(x), list(y)))
        seen.add(oracle_ok)
    # the inner family only perturbs rho by closed central forms, so it never fails
    assert seen == ({True} if family is random_inner_pair else {True, False})


# invariance of lambda --------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_lambda_is_unchanged_by_any_change_of_lifting_pair(seed):
    rng = random.Random(seed)
    p = random_abelian_fibre_pair(rng) if seed % 2 else random_inner_pair(rng)
    phi = random_one_form(rng, p.B, p.L)
    q = change_lifting_pair(p, phi)
    assert q.validate() == []
    assert obstruction_cochain(q) == obstruction_cochain(p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_changed_pair_builds_an_equivalent_extension(seed):
    rng = random.Random(seed)
    c = trivial_coupling(abelian(2), heisenberg())
    p = lift_coupling(c)
    q = change_lifting_pair(p, random_one_form(rng, p.B, p.L))
    E, E2 = build_extension(p), build_extension(q)
    w = extensions_equivalent(E, E2)
    assert w is not None
    assert is_bracket_morphism(w.map_matrix(E, E2), E.total, E2.total)


# torsor ----------------------------------------------------------------------

def test_central_extensions_of_the_plane_by_the_line():
    E1, E2, E1b = central_extension(1), central_extension(2), central_extension(1)
    assert difference_class(E1, E2).coordinates == (Fraction(1),)
    assert difference_class(E1, E1b).coordinates == (0,)
    assert extensions_equivalent(E1, E1b) is not None
    assert extensions_equivalent(E1, E2) is None


@pytest.mark.parametrize("c, c2", [(0, 1), (1, 3), (2, -1), (5, 5)])
def test_difference_class_is_the_difference_of_cocycles(c, c2):
    assert difference_class(central_extension(c), central_extension(c2)).coordinates == (Fraction(c2 - c),)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_torsor_action_then_difference_round_trips(seed):
    rng = random.Random(seed)
    E = central_extension(rng.randint(-3, 3))
    gamma = random_center_cocycle(rng, E.coupling)
    Z = E.coupling.center
    E2 = torsor_action(E, gamma)
    want = Z.cohomology(2).coordinates(Z.to_center(gamma).to_vector())
    assert difference_class(E, E2).coordinates == tuple(want)


def test_torsor_action_rejects_non_closed_gamma():
    E = build_extension(heis_base_pair(rho={}))
    with pytest.raises(NotClosed):
        torsor_action(E, Cochain(2, 3, 1, {(1, 2): (1,)}))


def test_difference_needs_the_same_coupling():
    B, L = abelian(1), abelian(1)
    E = build_extension(lift_coupling(Coupling(B, L, (MatrixQ(1, 1),))))
    E2 = build_extension(lift_coupling(Coupling(B, L, (MatrixQ(1, 1, {(0, 0): 1}),))))
    with pytest.raises(CouplingMismatch):
        difference_class(E, E2)
