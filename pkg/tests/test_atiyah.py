import random
from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.atiyah import (
    Laurent,
    OutsideWindow,
    TruncationUnstable,
    atiyah_data,
    build_p1_model,
    chern_class,
    d1_decomposition_residual,
    d1_well_defined_residual,
    degeneration_check,
    glue_check,
    hypercohomology_atiyah,
    les_connecting,
    lifting_report,
    line_bundle_cohomology,
    random_d0_cocycle,
    random_family,
    total_dT,
    twist_check,
)

DEGREES = [-2, -1, 0, 1, 2]


@lru_cache(maxsize=None)
def model(n):
    return build_p1_model(n, abs(n) + 3)


@lru_cache(maxsize=None)
def les(n):
    return les_connecting(model(n))


laurents = st.dictionaries(st.integers(-4, 4), st.integers(-3, 3), max_size=4).map(Laurent)


@given(laurents, laurents, laurents)
def test_laurent_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).deriv() == a.deriv() * b + a * b.deriv()
    assert (a * b).invert() == a.invert() * b.invert()
    assert a - a == Laurent()


def test_laurent_basics():
    z = Laurent.monomial(1)
    assert (z * z.invert()) == Laurent.monomial(0)
    assert Laurent({3: 2}).deriv() == Laurent({2: 6})
    assert Laurent({0: 0, 1: 0}).is_zero()


@pytest.mark.parametrize("n", DEGREES)
def test_transition_form_is_the_log_derivative(n):
    data = atiyah_data(n)
    assert data.phi01 == Laurent.monomial(-1, -n)
    assert data.phi01 == data.log_derivative


@pytest.mark.parametrize("n", [-1, 0, 2])
def test_window_matrix_is_the_laurent_operator(n):
    m = model(n)
    rng = random.Random(n + 10)
    for k in range(m.top):
        for _ in range(5):
            v = tuple(rng.randint(-2, 2) for _ in range(m.complex.dim(k)))
            want = m.vector(k + 1, total_dT(k, m.cochain(k, v), m.g))
            assert m.complex.d(k).apply(v) == want


def test_vectors_outside_the_window_are_rejected():
    with pytest.raises(OutsideWindow):
        model(0).vector(0, {((0,), "f"): Laurent.monomial(50)})


@pytest.mark.parametrize("m", range(-4, 4))
def test_line_bundle_cohomology(m):
    assert line_bundle_cohomology(m, abs(m) + 3) == [max(m + 1, 0), max(-m - 1, 0)]


def test_small_truncation_is_refused():
    with pytest.raises(TruncationUnstable):
        build_p1_model(3, 1)


@pytest.mark.parametrize("n", DEGREES)
def test_connecting_map_is_multiplication_by_the_degree(n):
    out = les(n)
    assert out["exact"] and out["shift_iso"] and out["pinned_ok"]
    assert out["agree"]
    assert out["chase"][0].to_dense() == [[n]]
    assert chern_class(model(n)) == (n,)


@pytest.mark.parametrize("n", DEGREES)
def test_hypercohomology(n):
    hyp = hypercohomology_atiyah(model(n), les(n))
    assert hyp["agree"]
    assert hyp["direct"] == ([1, 1, 1, 1] if n == 0 else [1, 0, 0, 1])


@pytest.mark.parametrize("n", DEGREES)
def test_degeneration(n):
    deg = degeneration_check(model(n), les(n))
    assert deg["filtration_ok"] and deg["consistent"]
    assert deg["E1_agree"] and deg["E2_agree"]
    assert deg["d1_agree"] and deg["d1_on_generators"] == n
    assert deg["d2_zero"] and deg["totals_agree"]


@pytest.mark.parametrize("n", DEGREES)
def test_truncation_is_certified(n):
    cert = model(n).certificate
    assert cert["stable"] and cert["injective_restrictions"]


@pytest.mark.parametrize("n, m", [(0, 1), (1, -2), (-1, 3)])
def test_twisting_moves_the_class(n, m):
    out = twist_check(build_p1_model(n, abs(n) + abs(m) + 3), m)
    assert out["H2_dim"] == 1 and out["agree"]


@pytest.mark.parametrize("n", DEGREES)
def test_gluing_is_the_operator_chart_change(n):
    assert glue_check(model(n))["ok"]
    rep = lifting_report(model(n))
    assert rep["phi01_is_log_derivative"] and rep["lambda"] == [0, 0]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(DEGREES), st.integers(0, 3), st.integers(0, 10_000))
def test_d1_does_not_depend_on_the_splitting(n, k, seed):
    rng = random.Random(seed)
    fam, fam2 = random_family(rng), random_family(rng)
    xi = random_d0_cocycle(rng, k)
    assert d1_well_defined_residual(n, fam, fam2, k, xi) == {}
    assert d1_decomposition_residual(n, fam, k, xi) == {}
