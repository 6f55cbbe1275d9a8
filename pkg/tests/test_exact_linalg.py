from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import char_poly_at, det_permutation
from uext.errors import DimensionMismatch, SingularMatrix, TensorFormatError
from uext.exact_linalg import (
    RationalMatrix,
    RationalPolynomial,
    char_poly,
    format_rational,
    generalized_eigenspace,
    invert,
    nullspace,
    rational_roots,
    rref,
    splits_over_q,
    to_rational,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def square(n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)


any_square = st.integers(1, 4).flatmap(square)
any_matrix = st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(
    lambda rc: st.lists(st.lists(small, min_size=rc[1], max_size=rc[1]), min_size=rc[0], max_size=rc[0])
)


def test_to_rational_and_format():
    assert to_rational("3/6") == F(1, 2)
    assert to_rational(" -4 ") == -4
    assert format_rational(F(-2, 4)) == "-1/2"
    assert format_rational(F(6, 3)) == "2"
    for bad in ("1/0", "x", 1.5, True):
        with pytest.raises(TensorFormatError):
            to_rational(bad)


def test_rref_examples():
    r, piv, rank = rref(RationalMatrix.identity(2))
    assert (r, piv, rank) == (RationalMatrix.identity(2), [0, 1], 2)
    r, piv, rank = rref(RationalMatrix([[1, 2], [2, 4]]))
    assert r == RationalMatrix([[1, 2], [0, 0]]) and piv == [0] and rank == 1
    r, piv, rank = rref(RationalMatrix([[0, 1], [1, 0]]))
    assert r == RationalMatrix.identity(2) and piv == [0, 1] and rank == 2


def test_nullspace_examples():
    assert nullspace(RationalMatrix.identity(3)) == []
    basis = nullspace(RationalMatrix.zeros(2, 3))
    assert [b.flat() for b in basis] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert [b.flat() for b in nullspace(RationalMatrix([[1, 1]]))] == [(-1, 1)]


def test_invert_examples():
    assert invert(RationalMatrix.identity(3)) == RationalMatrix.identity(3)
    assert invert(RationalMatrix([[2, 0], [0, 4]])) == RationalMatrix([["1/2", 0], [0, "1/4"]])
    # columns n0 = e0, n1 = -e0 + (e1 + e2)/2, n2 = (e1 - e2)/2
    a = RationalMatrix([[1, -1, 0], [0, "1/2", "1/2"], [0, "1/2", "-1/2"]])
    assert a @ invert(a) == RationalMatrix.identity(3)
    with pytest.raises(SingularMatrix):
        invert(RationalMatrix([[1, 2], [2, 4]]))
    with pytest.raises(DimensionMismatch):
        invert(RationalMatrix([[1, 2]]))


def test_char_poly_examples():
    assert char_poly(RationalMatrix.zeros(2)) == RationalPolynomial([0, 0, 1])
    assert char_poly(RationalMatrix.identity(2)) == RationalPolynomial([1, -2, 1])
    w2 = RationalMatrix([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    p = char_poly(w2)
    assert p == RationalPolynomial([1, -1, -1, 1])
    for t in range(-2, 3):
        assert p(t) == char_poly_at(w2.to_lists(), t)


def test_rational_roots_examples():
    assert rational_roots(RationalPolynomial([0, 0, 1])) == [(0, 2)]
    assert rational_roots(RationalPolynomial([1, -1, -1, 1])) == [(1, 2), (-1, 1)]
    assert rational_roots(RationalPolynomial([1, 0, 1])) == []
    assert not splits_over_q(RationalPolynomial([1, 0, 1]))
    # 2t - 1 with a fractional root
    assert rational_roots(RationalPolynomial([-1, 2])) == [(F(1, 2), 1)]


def test_generalized_eigenspace_examples():
    assert len(generalized_eigenspace(RationalMatrix.identity(2), 1)) == 2
    assert generalized_eigenspace(RationalMatrix.identity(2), 0) == []
    assert len(generalized_eigenspace(RationalMatrix([[0, 0], [1, 0]]), 0)) == 2


@settings(max_examples=60, deadline=None)
@given(any_matrix)
def test_rref_is_reduced_and_row_equivalent(rows):
    m = RationalMatrix(rows)
    r, piv, rank = rref(m)
    assert rank == len(piv)
    for row, p in enumerate(piv):
        assert r[row, p] == 1
        assert all(r[other, p] == 0 for other in range(m.rows) if other != row)
    assert all(r.row(t) == (0,) * m.cols for t in range(rank, m.rows))
    # same row space: every original row is a combination of the pivot rows
    for row in m.to_rows():
        residue = list(row)
        for t, p in enumerate(piv):
            c = residue[p]
            residue = [a - c * b for a, b in zip(residue, r.row(t))]
        assert not any(residue)


@settings(max_examples=60, deadline=None)
@given(any_matrix)
def test_rank_nullity(rows):
    m = RationalMatrix(rows)
    basis = nullspace(m)
    _, _, rank = rref(m)
    assert rank + len(basis) == m.cols
    for v in basis:
        assert (m @ v).is_zero()


@settings(max_examples=60, deadline=None)
@given(any_square)
def test_invert_against_determinant(rows):
    m = RationalMatrix(rows)
    det = det_permutation(m.to_lists())
    if det == 0:
        with pytest.raises(SingularMatrix):
            invert(m)
    else:
        inv = invert(m)
        assert m @ inv == RationalMatrix.identity(m.rows)
        assert inv @ m == RationalMatrix.identity(m.rows)


@settings(max_examples=60, deadline=None)
@given(any_square)
def test_char_poly_matches_cofactor_oracle(rows):
    m = RationalMatrix(rows)
    p = char_poly(m)
    assert p.degree == m.rows
    for t in range(m.rows + 1):
        assert p(t) == char_poly_at(rows, t)
    # Cayley-Hamilton
    assert p.evaluate_matrix(m).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=1, max_size=4))
def test_roots_of_products_of_linear_factors(roots):
    p = RationalPolynomial([1])
    for r in roots:
        p = p * RationalPolynomial([-r, 1])
    found = rational_roots(p)
    expected = {}
    for r in roots:
        expected[r] = expected.get(r, 0) + 1
    assert dict(found) == expected
    assert splits_over_q(p)


@settings(max_examples=40, deadline=None)
@given(any_square)
def test_generalized_eigenspaces_cover_split_part(rows):
    m = RationalMatrix(rows)
    roots = rational_roots(char_poly(m))
    for lam, mult in roots:
        space = generalized_eigenspace(m, lam)
        assert len(space) == mult


def test_matrix_basics():
    m = RationalMatrix([[1, 2], [3, 4]])
    assert m.T == RationalMatrix([[1, 3], [2, 4]])
    assert m.trace() == 5
    assert (m ** 2) == m @ m
    assert m.to_strings() == [["1", "2"], ["3", "4"]]
    assert hash(m) == hash(RationalMatrix([["1", "2"], ["6/2", 4]]))
    with pytest.raises(DimensionMismatch):
        RationalMatrix([[1, 2], [3]])
    with pytest.raises(DimensionMismatch):
        m @ RationalMatrix([[1, 2, 3]])
