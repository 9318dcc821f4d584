from itertools import combinations_with_replacement

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from latvoa.fock import (E_vector, F_vector, Sector, State, conformal_vector, enumerate_basis,
                         graded_dimensions, lattice_state, monomial, project_pm, sector_monomials,
                         theta, twisted_state, vacuum, weight)


def test_lowest_weights():
    assert weight(monomial((), 1), 3) == mpq(1, 12)
    assert weight(monomial((1,), 0), 3) == 1
    assert weight(monomial((), "T1"), 3) == mpq(1, 16)
    assert weight(monomial((mpq(1, 2),), "T2"), 3) == mpq(9, 16)


def test_theta_examples():
    one = vacuum(3)
    assert theta(one) == one
    a = lattice_state(3, (1,), 0)
    assert theta(a) == -1 * a
    assert theta(lattice_state(3, (), 6)) == lattice_state(3, (), -6)
    assert theta(E_vector(3)) == E_vector(3)
    assert theta(F_vector(3)) == -1 * F_vector(3)


def test_project_pm_splits():
    s = lattice_state(3, (2, 1), 6) + lattice_state(3, (1,), 0)
    assert project_pm(s, 1) + project_pm(s, -1) == s
    assert theta(project_pm(s, -1)) == -1 * project_pm(s, -1)
    with pytest.raises(ValueError):
        project_pm(lattice_state(3, (), 1), 1)


def _brute_vplus_dims(k, top):
    """Count by hand: theta-even label-0 monomials plus one vector per pair +-r."""
    dims = [0] * (top + 1)
    for w in range(top + 1):
        for length in range(0, w + 1):
            for parts in combinations_with_replacement(range(1, w + 1), length):
                if sum(parts) == w and length % 2 == 0:
                    dims[w] += 1
    for r in range(2 * k, 10 * k, 2 * k):
        base = mpq(r * r, 4 * k)
        for w in range(top + 1):
            rest = w - base
            if rest >= 0 and rest.denominator == 1:
                n = int(rest)
                dims[w] += sum(1 for length in range(n + 1)
                               for parts in combinations_with_replacement(range(1, n + 1), length)
                               if sum(parts) == n)
    return dims


def test_vplus_dims_brute_force():
    got = graded_dimensions(3, Sector.untwisted(3, 0), 3, theta_sign=1)
    assert [got.get(mpq(w), 0) for w in range(4)] == [1, 0, 1, 2] == _brute_vplus_dims(3, 3)
    got6 = graded_dimensions(3, Sector.untwisted(3, 0), 6, theta_sign=1)
    assert [got6.get(mpq(w), 0) for w in range(7)] == _brute_vplus_dims(3, 6)


@pytest.mark.parametrize("k", [2, 3, 5, 7])
def test_vplus_weight_one_is_zero(k):
    assert graded_dimensions(k, Sector.untwisted(k, 0), 1, theta_sign=1).get(mpq(1), 0) == 0


def test_twisted_and_coset_lowest_spaces():
    t = enumerate_basis(3, Sector.twisted(3, 1), mpq(1, 16), theta_sign=1)
    assert {w: len(b) for w, b in t.items()} == {mpq(1, 16): 1}
    v = enumerate_basis(3, Sector.untwisted(3, 1), mpq(1, 12))
    assert {w: len(b) for w, b in v.items()} == {mpq(1, 12): 1}


def test_theta_sign_needs_self_dual_sector():
    with pytest.raises(ValueError):
        enumerate_basis(3, Sector.untwisted(3, 1), 2, theta_sign=1)


def test_conformal_vector_weight():
    assert conformal_vector(4).weights() == [2]


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 5), st.integers(0, 9), st.data())
def test_theta_is_an_involution(k, c, data):
    sector = Sector.untwisted(k, c % (2 * k))
    monos = sector_monomials(k, sector, 4)
    picks = data.draw(st.lists(st.sampled_from(monos), min_size=1, max_size=4))
    coeffs = data.draw(st.lists(st.integers(-5, 5), min_size=len(picks), max_size=len(picks)))
    s = State.zero(sector)
    for m, c_ in zip(picks, coeffs):
        s = s + State.basis(m, k, c_)
    assert theta(theta(s)) == s
    assert theta(s).sector == sector.theta_image()


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.sampled_from(["u0", "u1", "T1", "T2"]), st.data())
def test_json_roundtrip(k, which, data):
    sector = {"u0": Sector.untwisted(k, 0), "u1": Sector.untwisted(k, 1 % (2 * k)),
              "T1": Sector.twisted(k, 1), "T2": Sector.twisted(k, 2)}[which]
    monos = sector_monomials(k, sector, 3)
    m = data.draw(st.sampled_from(monos))
    coeff = mpq(data.draw(st.integers(-9, 9)), data.draw(st.integers(1, 9)))
    s = State.basis(m, k, coeff)
    assert State.from_json(s.to_json()) == s


def test_twisted_state_weight():
    assert twisted_state(3, 2, (mpq(1, 2), mpq(3, 2))).weights() == [mpq(1, 16) + 2]
