import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from latvoa.fock import (E_vector, F_vector, Sector, State, conformal_vector, e_lattice,
                         lattice_state, sector_monomials, theta, twisted_state, vacuum)
from latvoa.modes import (OutOfScopeError, apply_alpha, apply_mode, check_commutator,
                          check_l_minus1_derivative, virasoro)
from latvoa.suites import central_charge, untwisted_pool, virasoro_relation_holds


def _voa_pool(k, top=4):
    return [State.basis(m, k) for m in sorted(sector_monomials(k, Sector.untwisted(k, 0), top))]


def test_alpha_zero_reads_label():
    assert apply_alpha(0, lattice_state(3, (), 2)) == 2 * lattice_state(3, (), 2)


def test_alpha_contraction():
    s = lattice_state(3, (1,), 0)
    assert apply_alpha(1, s) == 6 * vacuum(3)


def test_twisted_heisenberg():
    t = twisted_state(3, 1, (mpq(1, 2),))
    assert apply_alpha(mpq(1, 2), t) == 3 * twisted_state(3, 1)
    with pytest.raises(ValueError):
        apply_alpha(1, t)
    with pytest.raises(ValueError):
        apply_alpha(mpq(1, 2), vacuum(3))


def test_vertex_operator_rejects_twisted_targets():
    with pytest.raises(OutOfScopeError):
        apply_mode(E_vector(3), 0, twisted_state(3, 1))


def test_vacuum_and_alpha_modes():
    a = lattice_state(3, (2, 1), 6)
    assert apply_mode(vacuum(3), -1, a) == a
    assert apply_mode(lattice_state(3, (1,), 0), 0, a) == 6 * a


@pytest.mark.parametrize("k", [2, 3, 5])
def test_proof_identities(k):
    alpha = lattice_state(k, (1,), 0)
    E, F = E_vector(k), F_vector(k)
    assert apply_mode(E, 0, alpha) == -2 * k * F
    for n in range(1, 2 * k + 1):
        assert not apply_mode(E, n, alpha)
    assert apply_mode(E, 2 * k - 2, F) == -2 * alpha
    assert apply_mode(E, 2 * k - 2, apply_mode(E, 0, alpha)) == 4 * k * alpha


def test_e_e_commutator_on_vacuum_label():
    E = E_vector(3)
    assert check_commutator(E, E, 0, 0, lattice_state(3, (), 0))


def test_central_charge_is_computed():
    assert central_charge(3) == 1
    assert virasoro(2, virasoro(-2, vacuum(3))) == mpq(1, 2) * vacuum(3)
    assert not virasoro(-1, vacuum(3))
    assert not virasoro(1, lattice_state(3, (1,), 0))


def test_virasoro_agrees_with_omega_modes():
    k = 3
    w = conformal_vector(k)
    for s in untwisted_pool(k, 3)[::7]:
        for n in range(-2, 4):
            assert virasoro(n, s) == apply_mode(w, n + 1, s)


def test_l0_is_weight_on_twisted():
    t = twisted_state(5, 2, (mpq(3, 2), mpq(1, 2)))
    assert virasoro(0, t) == (mpq(1, 16) + 2) * t


def test_lattice_heisenberg_commutator():
    k = 3
    e = e_lattice(k, 1)
    for s in untwisted_pool(k, 3)[::5]:
        for m in range(-2, 3):
            for n in range(-3, 3):
                lhs = apply_alpha(m, apply_mode(e, n, s)) - apply_mode(e, n, apply_alpha(m, s))
                assert lhs == 2 * k * apply_mode(e, m + n, s)


def test_l_minus1_on_vacuum():
    for n in range(-3, 3):
        assert check_l_minus1_derivative(vacuum(3), n, lattice_state(3, (1,), 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_theta_equivariance(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    a = rng.choice(_voa_pool(k))
    s = rng.choice(untwisted_pool(k, 3))
    n = rng.randint(-3, 4)
    assert theta(apply_mode(a, n, s)) == apply_mode(theta(a), n, theta(s))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_weight_bookkeeping(seed):
    rng = random.Random(seed)
    k = 3
    a = rng.choice(_voa_pool(k))
    s = rng.choice(untwisted_pool(k, 3))
    n = rng.randint(-3, 4)
    out = apply_mode(a, n, s)
    expected = a.weights()[0] + s.weights()[0] - n - 1
    assert all(w == expected for w in out.weights())
    assert out.sector == s.sector


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_truncation_is_sound(seed):
    rng = random.Random(seed)
    k = 3
    a = rng.choice(_voa_pool(k))
    s = rng.choice(untwisted_pool(k, 3))
    n = rng.randint(-2, 4)
    assert apply_mode(a, n, s) == apply_mode(a, n, s, extra_truncation=3)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_virasoro_relations_twisted(seed):
    rng = random.Random(seed)
    k = rng.choice([2, 3])
    sector = Sector.twisted(k, rng.choice([1, 2]))
    v = State.basis(rng.choice(sector_monomials(k, sector, 3)), k)
    m, n = rng.randint(-3, 3), rng.randint(-3, 3)
    assert virasoro_relation_holds(m, n, v, 1)
