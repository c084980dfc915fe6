from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from sparseinv.exactlin import (
    Arrangement,
    RatMatrix,
    Subspace,
    arr_contains,
    arr_equal,
    arr_intersect,
    arr_subset,
    arr_sum,
    arr_union,
    dim_order_leq,
    dim_order_lt,
    hstack,
    image,
    intersect,
    kernel,
    map_arrangement,
    preimage,
    rank,
    rref,
    solve,
    sparse_arrangement,
    subspace_sum,
    to_fraction,
    vstack,
)

entries = st.integers(-3, 3).map(Fraction) | st.fractions(-3, 3, max_denominator=4)


@st.composite
def matrices(draw, max_rows=4, max_cols=4, min_rows=1, min_cols=1):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    return RatMatrix([[draw(entries) for _ in range(c)] for _ in range(r)], ncols=c)


@st.composite
def subspaces(draw, n):
    k = draw(st.integers(0, n))
    return Subspace(n, [[draw(entries) for _ in range(n)] for _ in range(k)])


def as_sympy(M: RatMatrix):
    return sympy.Matrix(M.nrows, M.ncols, lambda i, j: sympy.Rational(M[i, j].numerator, M[i, j].denominator))


def test_to_fraction_rejects_floats_and_bools():
    assert to_fraction("-3/2") == Fraction(-3, 2)
    with pytest.raises(TypeError):
        to_fraction(0.5)
    with pytest.raises(TypeError):
        to_fraction(True)


def test_matrix_basics():
    M = RatMatrix([[1, 2], [3, 4]])
    assert M.T == RatMatrix([[1, 3], [2, 4]])
    assert M @ RatMatrix.identity(2) == M
    assert M.power(0) == RatMatrix.identity(2)
    assert M.power(2) == M @ M
    assert (M - M).is_zero()
    assert hstack(M, M).shape == (2, 4) and vstack(M, M).shape == (4, 2)
    assert M @ (1, 1) == (3, 7)


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_and_rref_match_sympy(M):
    S = as_sympy(M)
    assert rank(M) == S.rank()
    rows, pivots = rref(M)
    R, piv = S.rref()
    assert list(pivots) == list(piv)
    for i, row in enumerate(rows):
        assert [sympy.Rational(x.numerator, x.denominator) for x in row] == list(R.row(i))


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_kernel_is_exact_nullspace(M):
    K = kernel(M)
    assert K.dim == M.ncols - rank(M)
    for v in K.vectors:
        assert all(x == 0 for x in M @ v)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solve_finds_solution_iff_consistent(M, data):
    b = tuple(data.draw(entries) for _ in range(M.nrows))
    x = solve(M, b)
    consistent = rank(hstack(M, RatMatrix([[c] for c in b], ncols=1))) == rank(M)
    assert (x is not None) == consistent
    if x is not None:
        assert M @ x == b


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_subspace_dimension_formula(data):
    n = data.draw(st.integers(1, 4))
    U, V = data.draw(subspaces(n)), data.draw(subspaces(n))
    assert subspace_sum(U, V).dim + intersect(U, V).dim == U.dim + V.dim
    W = intersect(U, V)
    assert U.contains(W) and V.contains(W)
    assert subspace_sum(U, V).contains(U)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_image_and_preimage(data):
    M = data.draw(matrices())
    V = data.draw(subspaces(M.nrows))
    P = preimage(M, V)
    for v in P.vectors:
        assert V.contains_vector(M @ v)
    assert V.contains(intersect(image(M), V)) and image(M, P) == intersect(image(M), V)


def test_subspace_canonical_equality():
    assert Subspace(3, [(1, 1, 0), (1, -1, 0)]) == Subspace.coordinate(3, [0, 1])
    assert Subspace(2, [(0, 0)]).is_zero()
    assert Subspace.full(3).annihilator.nrows == 0


def test_arrangement_pruning_and_order():
    n = 3
    line = Subspace(n, [(1, 0, 0)])
    plane = Subspace.coordinate(n, [0, 1])
    other = Subspace(n, [(0, 0, 1)])
    A = Arrangement(n, [line, plane, other, plane])
    assert A.size == 2 and line not in A.members
    assert A.dim_vector() == (1, 1, 0)  # counts of members of dim 1..n
    assert Arrangement(n, []).is_zero()
    assert arr_contains(A, line)
    assert not arr_contains(A, Subspace(n, [(1, 0, 1)]))


def test_sparse_arrangement_counts():
    A = sparse_arrangement(4, 2)
    assert A.size == 6 and all(M.dim == 2 for M in A.members)
    assert sparse_arrangement(2, 5) == Arrangement.full(2)


def test_arrangement_set_operations():
    n = 2
    x, y = Subspace(n, [(1, 0)]), Subspace(n, [(0, 1)])
    A, B = Arrangement(n, [x]), Arrangement(n, [y])
    assert arr_union(A, B).size == 2
    assert arr_intersect(A, B).is_zero()
    assert arr_sum(A, B) == Arrangement.full(n)
    assert arr_subset(A, arr_union(A, B)) and not arr_subset(arr_union(A, B), A)
    assert arr_equal(arr_union(A, B), Arrangement(n, [y, x]))
    P = RatMatrix([[1, 1], [0, 0]])
    assert map_arrangement("image", P, arr_union(A, B)) == Arrangement(n, [x])
    assert map_arrangement("preimage", P, Arrangement(n, [Subspace.zero(n)])) == Arrangement(n, [Subspace(n, [(1, -1)])])


def test_dimensional_order():
    assert dim_order_leq((0, 2, 0), (0, 0, 1))
    assert dim_order_lt((5, 3, 0), (0, 0, 1))
    assert not dim_order_lt((0, 0, 1), (0, 0, 1))
    assert dim_order_lt((0, 1, 0), (0, 2, 0))
