import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.cech import Nerve
from algebroid.core import Cochain, abelian, affine_line, heisenberg
from algebroid.extension import Coupling, build_extension, lift_coupling, pair_from_data, trivial_coupling
from algebroid.linalg import CochainComplex, MatrixQ
from algebroid.spectral import (
    ExtensionComplex,
    FilteredComplex,
    convergence_check,
    d1_evaluate,
    d2_evaluate,
    d_squared_zero,
    e1_isomorphism_check,
    random_d0_cocycle,
    random_splitting_family,
    run_spectral_sequence,
    spectral_page,
)


def heis_as_extension(c=1):
    pair = pair_from_data(trivial_coupling(abelian(2), abelian(1)), [MatrixQ(1, 1)] * 2,
                          Cochain(2, 2, 1, {(0, 1): (c,)} if c else {}))
    return build_extension(pair)


def twisted_line_over_heis():
    mats = (MatrixQ(1, 1, {(0, 0): 1}), MatrixQ(1, 1), MatrixQ(1, 1))
    return build_extension(pair_from_data(Coupling(heisenberg(), abelian(1), mats), mats, Cochain(2, 3, 1)))


def heis_over_aff():
    return build_extension(lift_coupling(trivial_coupling(affine_line(), heisenberg())))


FIXTURES = {
    "heis": lambda: ExtensionComplex(heis_as_extension()),
    "split": lambda: ExtensionComplex(heis_as_extension(0)),
    "twisted-line": lambda: ExtensionComplex(twisted_line_over_heis()),
    "heis-over-aff": lambda: ExtensionComplex(heis_over_aff()),
    "heis-on-edge": lambda: ExtensionComplex(heis_as_extension(), Nerve.from_maximal(2, [(0, 1)])),
}


@lru_cache(maxsize=None)
def fixture(name):
    X = FIXTURES[name]()
    return X, run_spectral_sequence(X.filtered)


def cell_dims(page, q):
    return [page.cells[(p, q)].dim for p in range(3)]


def test_heis_filtration_of_two_forms():
    X, _ = fixture("heis")
    assert [len(X.filtration_subspace(p, 2)) for p in range(4)] == [3, 3, 1, 0]


def test_heis_pages_reproduce_hochschild_serre():
    X, seq = fixture("heis")
    E2 = seq.pages[2]
    assert cell_dims(E2, 0) == [1, 2, 1]
    assert cell_dims(E2, 1) == [1, 2, 1]
    d2 = E2.differentials[(0, 1)]
    assert d2.shape == (1, 1) and not d2.is_zero()
    conv = convergence_check(X.filtered, seq)
    assert conv["e_infinity"] == conv["direct"] == [1, 2, 2, 1]


def test_split_extension_degenerates_at_once():
    X, seq = fixture("split")
    for page in seq.pages[1:]:
        assert page.is_degenerate()
    assert convergence_check(X.filtered, seq)["direct"] == [1, 3, 3, 1]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_pages_are_consistent_and_converge(name):
    X, seq = fixture(name)
    assert X.filtered.check() == []
    assert seq.certificate["consistent"]
    assert all(d_squared_zero(p) for p in seq.pages)
    assert convergence_check(X.filtered, seq)["agree"]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_first_page_is_the_fibre_cohomology(name):
    X, seq = fixture(name)
    assert e1_isomorphism_check(X, seq.pages[1])["ok"]


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_split_operators_rebuild_the_total_differential(name):
    X, _ = fixture(name)
    rng = random.Random(3)
    fam = random_splitting_family(X, rng)
    for k in range(X.total.top):
        h = tuple(rng.randint(-2, 2) for _ in range(X.total.dim(k)))
        assert not any(any(v) for v in X.total_split_residual(fam, k, h).values())


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_d1_is_the_class_of_D1(name):
    X, seq = fixture(name)
    rng = random.Random(5)
    fam = random_splitting_family(X, rng)
    for (p, q), cell in seq.pages[1].cells.items():
        for h in cell.representative_basis:
            assert d1_evaluate(X, fam, p, q, h, seq.pages[1]).agree


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_d2_through_the_split_operators(name):
    X, seq = fixture(name)
    fam = random_splitting_family(X, random.Random(8))
    for (p, q), cell in seq.pages[2].cells.items():
        for h in cell.representative_basis:
            res = d2_evaluate(X, fam, p, q, h, seq.pages[2])
            assert res.agree and not any(res.leading_residual)


def test_heis_d2_is_minus_one_on_the_canonical_generator():
    X, seq = fixture("heis")
    h = seq.pages[2].cells[(0, 1)].representative_basis[0]
    res = d2_evaluate(X, X.canonical_family(), 0, 1, h, seq.pages[2])
    assert len(res.via_page) == 1 and res.via_page[0] != 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(sorted(FIXTURES)), st.integers(0, 10_000))
def test_d1_does_not_depend_on_the_splitting(name, seed):
    X, _ = fixture(name)
    rng = random.Random(seed)
    f1, f2 = random_splitting_family(X, rng), random_splitting_family(X, rng)
    for k in range(X.total.top + 1):
        for p in range(k + 1):
            xi = random_d0_cocycle(X, p, k, rng)
            if xi:
                assert not any(X.d1_well_defined_residual(f1, f2, p, k, xi))


def test_filtration_must_be_stable_under_d():
    C = CochainComplex((1, 1), {0: MatrixQ.identity(1)})
    F = FilteredComplex(C, {0: [[(1,)], [(1,)], []], 1: [[(1,)], [], []]})
    assert F.check()


def test_two_step_filtration_of_a_cone():
    # 0 -> Q --id--> Q, with F^1 = the target: E_1 has two cells, d_1 kills both
    C = CochainComplex((1, 1), {0: MatrixQ.identity(1)})
    F = FilteredComplex(C, {0: [[(1,)], [], []], 1: [[(1,)], [(1,)], []]})
    assert F.check() == []
    E1 = spectral_page(F, 1)
    assert E1.cells[(0, 0)].dim == 1 and E1.cells[(1, 0)].dim == 1
    assert not E1.differentials[(0, 0)].is_zero()
    assert spectral_page(F, 2).totals(1) == [0, 0]
