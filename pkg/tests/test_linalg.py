from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from latvoa.linalg import (EchelonBasis, IrrationalScalarError, Matrix, as_rational, column_space,
                           format_rational, generalized_eigenspaces, in_span, kernel, parse_rational,
                           rank, rref)

small = st.integers(-4, 4)


def matrices(max_dim=4):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(st.lists(small, min_size=c, max_size=c), min_size=r, max_size=r)))


def test_rational_parsing_roundtrip():
    assert parse_rational("1/12") == Fraction(1, 12)
    assert format_rational(parse_rational("-3/6")) == "-1/2"
    assert format_rational(mpq(4)) == "4"
    with pytest.raises(IrrationalScalarError):
        parse_rational("0.5")


def test_floats_rejected():
    with pytest.raises(IrrationalScalarError):
        as_rational(0.5)
    assert as_rational(Fraction(2, 4)) == mpq(1, 2)


def test_rref_identity_and_rank_one():
    m, piv = rref(Matrix.identity(2))
    assert m == Matrix.identity(2) and piv == [0, 1]
    m, piv = rref(Matrix.from_rows([[1, 2], [2, 4]]))
    assert m.tolist() == [[1, 2], [0, 0]] and piv == [0]


def test_in_span_examples():
    assert in_span({}, [])
    assert in_span({0: 1}, [{0: 1, 1: 1}, {1: 1}])
    assert not in_span({0: 1}, [{1: 1}])


def test_matrix_arithmetic():
    a = Matrix.from_rows([[1, 2], [3, 4]])
    assert (a @ Matrix.identity(2)) == a
    assert (a - a) == Matrix.zeros(2, 2)
    assert a.power(3) == a @ a @ a
    assert a.transpose().tolist() == [[1, 3], [2, 4]]
    assert a.apply([1, 1]) == [3, 7]


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_nullity(rows):
    m = Matrix.from_rows(rows)
    ker = kernel(m)
    assert rank(m) + len(ker) == m.cols
    for v in ker:
        assert all(x == 0 for x in m.apply(v))
    assert len(column_space(m)) == rank(m)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.lists(small, min_size=4, max_size=4))
def test_in_span_agrees_with_rank(rows, v):
    cols = len(rows[0])
    gens = [{j: mpq(x) for j, x in enumerate(r) if x} for r in rows]
    vec = {j: mpq(x) for j, x in enumerate(v[:cols]) if x}
    expected = rank(Matrix.from_rows(rows + [v[:cols]])) == rank(Matrix.from_rows(rows))
    assert in_span(vec, gens) == expected


def test_echelon_basis_incremental():
    eb = EchelonBasis()
    assert eb.add({"a": 1, "b": 1})
    assert eb.add({"b": 1})
    assert not eb.add({"a": 2})
    assert len(eb) == 2 and eb.contains({"a": 1})


def test_generalized_eigenspaces_jordan():
    lam = mpq(1, 3)
    res = generalized_eigenspaces(Matrix.from_rows([[lam, 1], [0, lam]]), [lam])
    assert len(res.spaces[lam]) == 2 and not res.residual and res.complete


def test_generalized_eigenspaces_diagonal():
    res = generalized_eigenspaces(Matrix.diagonal([0, 1]), [0, 1])
    assert res.dims == {0: 1, 1: 1}


def test_generalized_eigenspaces_table_weights():
    from latvoa.orbifold import table1
    m = Matrix.diagonal([mpq(1, 12), mpq(1, 3)])
    res = generalized_eigenspaces(m, table1(3).values)
    found = {lam: len(v) for lam, v in res.spaces.items() if v}
    assert found == {mpq(1, 12): 1, mpq(1, 3): 1} and not res.residual


def test_residual_outside_candidates():
    res = generalized_eigenspaces(Matrix.diagonal([0, 5]), [0])
    assert len(res.residual) == 1 and not res.complete
