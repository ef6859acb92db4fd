from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hoinv.errors import MalformedInputError
from hoinv.linalg import RationalMatrix, Subspace, exact_kernel, parse_rational

F = Fraction
rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def matrices(draw, max_dim=5):
    m = draw(st.integers(1, max_dim))
    n = draw(st.integers(1, max_dim))
    rows = draw(st.lists(st.lists(rationals, min_size=n, max_size=n), min_size=m, max_size=m))
    return RationalMatrix.from_rows(rows)


def test_kernel_of_zero_matrix_is_everything():
    assert exact_kernel(RationalMatrix.zeros(2, 2)) == Subspace.full(2)


def test_kernel_of_identity_is_zero():
    assert exact_kernel(RationalMatrix.identity(3)).rank == 0


def test_kernel_of_rank_one():
    k = exact_kernel(RationalMatrix.from_rows([[1, 1], [2, 2]]))
    assert k.rows == ((F(1), F(-1)),)
    assert k.to_strings() == [["1/1"], ["-1/1"]]


def test_ragged_matrix_rejected():
    with pytest.raises(MalformedInputError):
        RationalMatrix.from_rows([[1, 2], [3]])
    with pytest.raises(MalformedInputError):
        exact_kernel([[1, 2], [3]])


def test_parse_rational():
    assert parse_rational("-3/6") == F(-1, 2)
    with pytest.raises(MalformedInputError):
        parse_rational("3/-6")
    assert parse_rational(" 7 ") == 7
    with pytest.raises(MalformedInputError):
        parse_rational("1/0")
    with pytest.raises(MalformedInputError):
        parse_rational(1.5)


@given(matrices())
def test_rank_nullity(m):
    k = exact_kernel(m)
    assert m.rank() + k.rank == m.ncols
    for v in k.rows:
        assert not any(m.apply(v))


@given(matrices(), st.lists(st.lists(st.integers(-3, 3), min_size=5, max_size=5), min_size=1, max_size=4))
def test_canonical_form_independent_of_spanning_set(m, mix):
    k = exact_kernel(m)
    if k.rank == 0:
        return
    combos = [tuple(sum((c * v[j] for c, v in zip(coeffs, k.rows)), F(0)) for j in range(k.dim))
              for coeffs in mix]
    span = Subspace.span(list(k.rows) + combos, k.dim)
    assert span == k
    assert k.contains(Subspace.span(combos, k.dim))


@given(matrices(max_dim=4).filter(lambda m: m.nrows == m.ncols))
def test_inverse_and_determinant(m):
    det = m.determinant()
    if det == 0:
        with pytest.raises(ZeroDivisionError):
            m.inverse()
        return
    assert m @ m.inverse() == RationalMatrix.identity(m.ncols)


def test_determinant_values():
    assert RationalMatrix.from_rows([[F(1, 2), 1], [3, 4]]).determinant() == -1
    assert RationalMatrix.from_rows([[0, 1], [1, 0]]).determinant() == -1
    assert RationalMatrix.from_rows([[1, 2], [2, 4]]).determinant() == 0


@given(matrices(max_dim=4), matrices(max_dim=4))
def test_intersection_matches_definition(a, b):
    if a.ncols != b.ncols:
        return
    ka, kb = exact_kernel(a), exact_kernel(b)
    both = exact_kernel(RationalMatrix(a.rows + b.rows, a.ncols))
    assert ka.intersect(kb) == both
    assert (ka + kb).contains(ka)


def test_reduce_gives_canonical_representative():
    h = Subspace.span([(1, 1, 0)], 3)
    assert h.reduce((2, 5, 1)) == (0, 3, 1)
    assert h.reduce((3, 3, 0)) == (0, 0, 0)
