from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from quasifiliform.exactlin import (
    Matrix,
    echelon_basis,
    format_scalar,
    inverse,
    kernel_basis,
    parse_scalar,
    rank,
    solve,
    span_rank,
    to_scalar,
)

small_ints = st.integers(min_value=-4, max_value=4)
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def matrices(draw, max_rows=6, max_cols=6, elements=small_ints):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    # bias toward sparse rows so rank deficiency shows up often
    cells = st.one_of(st.just(0), st.just(0), elements)
    dense = [[draw(cells) for _ in range(c)] for _ in range(r)]
    return Matrix.from_rows(dense, cols=c)


def dense_product(m: Matrix, v):
    return [sum((m[(i, j)] * v[j] for j in range(m.cols)), Fraction(0)) for i in range(m.rows)]


# --- examples

def test_identity_rank():
    assert rank(Matrix.identity(3)) == 3


def test_zero_rank():
    assert rank(Matrix.zeros(4, 7)) == 0


def test_proportional_rows():
    assert rank(Matrix.from_rows([[1, 2], [2, 4]])) == 1


def test_kernel_of_identity_is_empty():
    assert kernel_basis(Matrix.identity(2)) == []


def test_kernel_of_difference_row():
    (v,) = kernel_basis(Matrix.from_rows([[1, -1]]))
    assert v[0] == v[1] != 0


def test_kernel_proportional_to_two_minus_one():
    (v,) = kernel_basis(Matrix.from_rows([[1, 2], [2, 4]]))
    # oracle: brute force over small integer vectors
    hits = [(a, b) for a in range(-3, 4) for b in range(-3, 4)
            if (a, b) != (0, 0) and a + 2 * b == 0 and 2 * a + 4 * b == 0]
    assert (2, -1) in hits
    assert v[0] * -1 == v[1] * 2


def test_kernel_basis_is_reduced_with_unit_free_columns():
    m = Matrix.from_rows([[1, 2, 0, 3], [0, 0, 1, 4]])
    vecs = kernel_basis(m)
    assert [[int(x) for x in v] for v in vecs] == [[-2, 1, 0, 0], [-3, 0, -4, 1]]


def test_solve_identity():
    b = [Fraction(3), Fraction(-1, 2)]
    assert solve(Matrix.identity(2), b) == b


def test_solve_inconsistent():
    assert solve(Matrix.zeros(2, 2), [1, 0]) is None


def test_solve_diagonal():
    assert solve(Matrix.from_rows([[2, 0], [0, 4]]), [1, 2]) == [Fraction(1, 2), Fraction(1, 2)]


def test_solve_free_variables_zero():
    x = solve(Matrix.from_rows([[1, 1]]), [5])
    assert x == [5, 0]


def test_solve_length_mismatch():
    with pytest.raises(ValueError):
        solve(Matrix.identity(2), [1, 2, 3])


def test_scalar_serialisation():
    assert format_scalar(Fraction(-3, 6)) == "-1/2"
    assert format_scalar(Fraction(4, 2)) == "2"
    assert parse_scalar("-6/4") == Fraction(-3, 2)
    assert to_scalar(" 7 ") == 7


def test_scalar_rejects_floats_and_bools():
    with pytest.raises(TypeError):
        to_scalar(0.5)
    with pytest.raises(TypeError):
        to_scalar(True)


def test_matrix_rejects_out_of_range_entries():
    with pytest.raises(IndexError):
        Matrix(2, 2, {(2, 0): 1})


def test_matrix_drops_zero_entries():
    m = Matrix(2, 2, {(0, 0): 0, (1, 1): Fraction(1, 3)})
    assert m.nnz() == 1


def test_inverse_round_trip():
    m = Matrix.from_rows([[2, 1], [7, 4]])
    assert (m @ inverse(m)) == Matrix.identity(2)


def test_echelon_basis_spans_same_space():
    vecs = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    basis = echelon_basis(vecs, 3)
    assert len(basis) == 2 == span_rank(vecs + basis, 3)


# --- properties

@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_plus_nullity(m):
    assert rank(m) + len(kernel_basis(m)) == m.cols


@settings(max_examples=150, deadline=None)
@given(matrices(elements=rationals))
def test_rank_of_transpose(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=150, deadline=None)
@given(matrices(elements=rationals))
def test_kernel_vectors_are_annihilated(m):
    for v in kernel_basis(m):
        assert all(x == 0 for x in dense_product(m, v))


@settings(max_examples=150, deadline=None)
@given(matrices(), st.data())
def test_solve_returns_exact_solution(m, data):
    b = [data.draw(small_ints) for _ in range(m.rows)]
    x = solve(m, b)
    if x is not None:
        assert dense_product(m, x) == [Fraction(v) for v in b]
    else:
        # oracle: inconsistency means the augmented matrix gains rank
        aug = m.hstack(Matrix.from_columns(m.rows, [b]))
        assert rank(aug) == rank(m) + 1


@settings(max_examples=80, deadline=None)
@given(matrices(elements=rationals))
def test_rank_matches_sympy(m):
    dense = m.to_dense()
    expected = sp.Matrix(dense).rank() if m.rows and m.cols else 0
    assert rank(m) == expected


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_kernel_is_deterministic(m):
    assert kernel_basis(m) == kernel_basis(Matrix.from_rows(m.to_dense(), cols=m.cols))
