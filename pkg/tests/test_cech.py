import random

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.cech import (
    Nerve,
    NotFaceClosed,
    SheafData,
    TrivializationInvalid,
    build_lifting_triple,
    cech_cohomology,
    cech_differential,
    cocycle_is_zero,
    constant_form_complex,
    global_difference,
    global_obstruction_class,
    glue_extension,
    les_crosscheck,
    obstruction_triple,
    perturb_triple,
    torsor_action_global,
    total_complex,
    triple_vector,
    trivialization,
    verify_cocycle,
)
from algebroid.core.catalog import CATALOG
from algebroid.extension import trivial_coupling
from algebroid.linalg import MatrixQ
from algebroid.sampling import random_central_form, random_coupling, random_etas, random_lifting_triple, random_nerve

from oracles import components, simplicial_betti


def test_missing_faces_are_rejected():
    with pytest.raises(NotFaceClosed):
        Nerve(3, ((0,), (1,), (2,), (0, 1, 2)))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 100_000))
def test_constant_cech_cohomology_matches_simplicial_oracle(seed):
    nv = random_nerve(random.Random(seed))
    maximal = [s for s in nv.simplices if len(s) > 1]
    got = [h.dim for h in cech_cohomology(nv, SheafData.constant(nv, 1))]
    want = simplicial_betti(nv.vertices, maximal)
    assert got == want[:len(got)] + [0] * (len(got) - len(want))
    assert got[0] == components(nv.vertices, maximal)


def test_hollow_triangle_and_filled_triangle():
    hollow = Nerve.hollow_triangle()
    filled = Nerve.from_maximal(3, [(0, 1, 2)])
    assert [h.dim for h in cech_cohomology(hollow, SheafData.constant(hollow, 1))] == [1, 1]
    assert [h.dim for h in cech_cohomology(filled, SheafData.constant(filled, 1))] == [1, 0, 0]


# sign tables: the first term restricts through the face that drops vertex 0

def test_delta_on_zero_cochains_is_c_j_minus_c_i():
    nv = Nerve.from_maximal(2, [(0, 1)])
    d = cech_differential(nv, SheafData.constant(nv, 1), 0)
    assert d.to_dense() == [[-1, 1]]


def test_delta_on_one_cochains_on_a_triangle():
    nv = Nerve.from_maximal(3, [(0, 1, 2)])
    d = cech_differential(nv, SheafData.constant(nv, 1), 1)
    # columns (0,1), (0,2), (1,2): (δm)_012 = m_12 - m_02 + m_01
    assert d.to_dense() == [[1, -1, 1]]


def test_delta_on_two_cochains_on_a_tetrahedron():
    nv = Nerve.from_maximal(4, [(0, 1, 2, 3)])
    d = cech_differential(nv, SheafData.constant(nv, 1), 2)
    # columns (012), (013), (023), (123)
    assert d.to_dense() == [[-1, 1, -1, 1]]


def test_nonconstant_restrictions_compose():
    nv = Nerve.from_maximal(3, [(0, 1, 2)])
    dims = {s: 1 for s in nv.simplices}
    two = MatrixQ(1, 1, {(0, 0): 2})
    res = {(f, s): two for s in nv.simplices for f in nv.simplices if len(f) == len(s) - 1 and set(f) < set(s)}
    sh = SheafData(nv, dims, res)
    assert sh.functoriality_failures() == []
    assert sh.restriction((0,), (0, 1, 2)) == MatrixQ(1, 1, {(0, 0): 4})
    bad = SheafData(nv, dims, {**res, ((0,), (0, 1, 2)): MatrixQ(1, 1, {(0, 0): 5})})
    assert ((0,), (0, 1), (0, 1, 2)) in bad.functoriality_failures()


@pytest.mark.parametrize("base, fibre", [("abelian2", "heis3"), ("heis3", "abelian1"), ("aff1", "abelian2")])
def test_constant_hypercohomology_is_a_tensor_product(base, fibre):
    c = random_coupling(random.Random(3), base, fibre)
    nv = Nerve.hollow_triangle()
    K = constant_form_complex(nv, c.center)
    assert K.commutation_residuals() == []
    nerve_b = [h.dim for h in cech_cohomology(nv, SheafData.constant(nv, 1))]
    fib = [c.center.cohomology(q).dim for q in range(c.B.rank + 1)]
    want = [sum(nerve_b[p] * fib[k - p] for p in range(len(nerve_b)) if 0 <= k - p < len(fib))
            for k in range(K.total(0).top + 1)]
    assert K.total(0).complex.betti() == want


def test_truncated_hypercohomology_agrees_with_its_long_exact_sequence():
    c = random_coupling(random.Random(5), "heis3", "abelian1")
    K = constant_form_complex(Nerve.from_maximal(3, [(0, 1), (1, 2)]), c.center)
    for a in range(3):
        out = les_crosscheck(K, a)
        assert out["exact"] and out["agree"]


# obstruction triples ------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 100_000))
def test_random_triples_give_cocycles(seed):
    ot = obstruction_triple(random_lifting_triple(random.Random(seed)))
    assert cocycle_is_zero(verify_cocycle(ot))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 100_000))
def test_class_does_not_depend_on_the_triple(seed):
    rng = random.Random(seed)
    nv = random_nerve(rng)
    c = random_coupling(rng)
    base = build_lifting_triple(nv, c)
    other = random_lifting_triple(rng, nv, c)
    T = total_complex(base, nv)
    H3 = T.cohomology(3)
    if not H3.ambient_dim:
        return
    assert H3.coordinates(triple_vector(T, obstruction_triple(other))) == \
        H3.coordinates(triple_vector(T, obstruction_triple(base)))


def test_corrupted_triple_breaks_exactly_the_expected_equation():
    rng = random.Random(2)
    c = random_coupling(rng, "abelian3", "abelian1")
    lt = build_lifting_triple(Nerve.from_maximal(3, [(0, 1, 2)]), c)
    ot = obstruction_triple(lt)
    bump = random_central_form(rng, c, 1)
    while bump.is_zero():
        bump = random_central_form(rng, c, 1)
    bad = ot.replace(q={s: v + c.center.to_center(bump) for s, v in ot.q.items()})
    res = verify_cocycle(bad)
    assert res[3] and not res[1] and not res[2]


def test_trivialization_and_gluing_on_a_hollow_triangle():
    c = trivial_coupling(CATALOG["abelian2"](), CATALOG["heis3"]())
    nv = Nerve.hollow_triangle()
    lt = perturb_triple(build_lifting_triple(nv, c), random_etas(random.Random(4), c, 3))
    G = global_obstruction_class(nv, c)
    assert G.is_zero
    a, m = trivialization(lt)
    glued = glue_extension(lt, a, m)
    assert glued.morphism_failures() == [] and glued.cocycle_failures() == []


def test_glue_rejects_a_wrong_trivialization():
    rng = random.Random(9)
    c = random_coupling(rng, "heis3", "abelian1")
    lt = random_lifting_triple(rng, Nerve.from_maximal(2, [(0, 1)]), c)
    a, m = trivialization(lt)
    shift = random_central_form(rng, c, 2)
    assert not shift.is_zero()
    wrong = {**a, 0: a[0] + shift}
    with pytest.raises(TrivializationInvalid):
        glue_extension(lt, wrong, m)


def test_global_torsor_action_is_detected_by_the_difference_class():
    c = trivial_coupling(CATALOG["abelian2"](), CATALOG["abelian1"]())
    nv = Nerve.hollow_triangle()
    G = glue_extension(build_lifting_triple(nv, c))
    # constant central 1-forms are closed; put one on a single edge of the circle
    one = random_central_form(random.Random(1), c, 1)
    assert not one.is_zero()
    zero = one.scale(0)
    G2 = torsor_action_global(G, {}, {(0, 1): one, (1, 2): zero, (0, 2): zero})
    assert any(global_difference(G, G2))
    assert not any(global_difference(G, G))
