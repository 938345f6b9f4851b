from fractions import Fraction
from itertools import combinations, permutations

import pytest
from hypothesis import given, settings, strategies as st

from algebroid.linalg import (
    BoundaryNotInCycles,
    CochainComplex,
    MatrixQ,
    NotACycle,
    connecting_map,
    image_basis,
    intersect,
    kernel_basis,
    les_exactness,
    rank,
    rref,
    solve_linear,
    span_rank,
    subquotient,
)


def leibniz_det(rows):
    n = len(rows)
    total = Fraction(0)
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = Fraction(-1 if inv % 2 else 1)
        for i, j in enumerate(perm):
            term *= rows[i][j]
        total += term
    return total


def minor_rank(dense):
    """Largest k with a nonzero k x k minor."""
    if not dense or not dense[0]:
        return 0
    m, n = len(dense), len(dense[0])
    for k in range(min(m, n), 0, -1):
        for rs in combinations(range(m), k):
            for cs in combinations(range(n), k):
                if leibniz_det([[dense[r][c] for c in cs] for r in rs]):
                    return k
    return 0


small = st.integers(-3, 3)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r))
    return MatrixQ.from_rows(rows, c)


def test_rank_of_the_magic_square_is_two():
    assert rank(MatrixQ.from_rows([[1, 2, 3], [4, 5, 6], [7, 8, 9]])) == 2


def test_rref_of_a_known_matrix():
    R, piv = rref(MatrixQ.from_rows([[2, 4], [1, 3]]))
    assert piv == [0, 1]
    assert R == MatrixQ.identity(2)


def test_kernel_of_a_rank_one_map():
    k = kernel_basis(MatrixQ.from_rows([[1, 1, 1]]))
    assert len(k) == 2
    for v in k:
        assert sum(v) == 0


def test_entries_stay_exact():
    m = MatrixQ.from_rows([[3, 1], [1, 3]])
    x = solve_linear(m, (1, 0))
    assert x == (Fraction(3, 8), Fraction(-1, 8))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_agrees_with_the_minor_oracle(m):
    assert rank(m) == minor_rank(m.to_dense())


@settings(max_examples=100, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    ker = kernel_basis(m)
    assert len(ker) + rank(m) == m.cols
    for v in ker:
        assert not any(m.apply(v))


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_returns_a_solution_exactly_when_one_exists(m, data):
    x0 = data.draw(st.lists(small, min_size=m.cols, max_size=m.cols))
    b = m.apply(x0)
    x = solve_linear(m, b)
    assert x is not None and m.apply(x) == b
    extra = data.draw(st.lists(small, min_size=m.rows, max_size=m.rows))
    y = solve_linear(m, extra)
    solvable = span_rank(m.columns() + [tuple(extra)], m.rows) == rank(m)
    assert (y is not None) == solvable


def block(draw, r, c):
    return MatrixQ.from_rows(draw(st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)), c)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3), st.data())
def test_product_transpose(r, m, c, data):
    a, b = block(data.draw, r, m), block(data.draw, m, c)
    assert (a @ b).transpose() == b.transpose() @ a.transpose()


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.data())
def test_intersection_dimension_formula(n, data):
    u = image_basis(block(data.draw, n, data.draw(st.integers(1, 3))))
    w = image_basis(block(data.draw, n, data.draw(st.integers(1, 3))))
    inter = intersect(u, w, n)
    assert len(inter) == len(u) + len(w) - span_rank(u + w, n)


def test_subquotient_coordinates_and_lift():
    H = subquotient([(1, 0, 0), (0, 1, 0)], [(1, 1, 0)], 3)
    assert H.dim == 1
    c = H.coordinates((2, 5, 0))
    assert H.is_boundary(tuple(a - b for a, b in zip((2, 5, 0), H.lift(c))))
    with pytest.raises(NotACycle):
        H.coordinates((0, 0, 1))


def test_boundaries_outside_cycles_are_rejected():
    with pytest.raises(BoundaryNotInCycles):
        subquotient([(1, 0)], [(0, 1)], 2)


def circle():
    # C^0 = Q^2 (vertices), C^1 = Q^2 (two edges between them)
    d = MatrixQ.from_rows([[-1, 1], [-1, 1]])
    return CochainComplex((2, 2), {0: d})


def test_betti_numbers_of_a_circle():
    C = circle()
    assert C.is_complex()
    assert C.betti() == [1, 1]
    assert [C.cohomology(k).dim for k in range(2)] == [1, 1]


def test_connecting_map_of_a_cone():
    # 0 -> Q[-1] -> cone(id) -> Q -> 0, the connecting map is the identity
    sub = CochainComplex((0, 1))
    mid = CochainComplex((1, 1), {0: MatrixQ.identity(1)})
    quo = CochainComplex((1, 0))
    inc = {0: MatrixQ(1, 0), 1: MatrixQ.identity(1)}
    proj = {0: MatrixQ.identity(1), 1: MatrixQ(0, 1)}
    assert connecting_map(inc, proj, sub, mid, quo, 0) == MatrixQ.identity(1)
    assert all(r["exact"] for r in les_exactness(inc, proj, sub, mid, quo))
