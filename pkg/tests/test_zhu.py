import pytest
from gmpy2 import mpq

from latvoa.fock import Sector, State, conformal_vector, lattice_state, vacuum
from latvoa.modes import OutOfScopeError
from latvoa.modules import OVERFLOW, catalogue, catalogue_module, catalogue_names
from latvoa.zhu import (CERTIFIED, NOT_CERTIFIED, OVTruncation, center_certificate,
                        check_module_axioms, circ, omega_subspace, ov_membership, star,
                        vplus_spanning_set)


@pytest.fixture(scope="module")
def ov7():
    return OVTruncation(3, 7)


def test_catalogue_size_and_weights():
    names = catalogue_names(3)
    assert len(names) == 10
    lows = sorted(m.lowest_weight for m in catalogue(3, 0))
    assert lows == sorted([0, 1, mpq(1, 12), mpq(1, 3), mpq(3, 4), mpq(3, 4),
                           mpq(1, 16), mpq(1, 16), mpq(9, 16), mpq(9, 16)])
    assert len(catalogue_names(2)) == 9


def test_catalogue_dims():
    assert catalogue_module(3, "Vplus", 4).dims() == [1, 0, 1, 2, 4]
    assert catalogue_module(3, "Vminus", 4).dims() == [1, 1, 3, 3, 6]
    assert catalogue_module(3, "T1plus", 4).dims() == [1, 0, 1, 0, 2]


def test_vacuum_star_is_unit():
    w = conformal_vector(3)
    assert star(vacuum(3), w) == w
    assert star(w, vacuum(3)) == w


def test_zero_is_certified(ov7):
    assert ov_membership(State.zero(Sector.untwisted(3, 0)), ov7) == CERTIFIED


def test_vacuum_not_certified(ov7):
    assert ov_membership(vacuum(3), ov7) == NOT_CERTIFIED


def test_circ_products_are_in_ov(ov7):
    a = conformal_vector(3)
    assert ov_membership(circ(a, a), ov7) == CERTIFIED


def test_center_certificates_low_weight():
    for a in vplus_spanning_set(3, 3):
        wt = int(a.weights()[0])
        assert center_certificate(a, OVTruncation(3, wt + 3)) == CERTIFIED


@pytest.mark.parametrize("name", ["Vplus", "Vminus", "Vhalfplus", "V(r=1)", "V(r=2)"])
def test_omega_is_lowest_space(name):
    M = catalogue_module(3, name, 2)
    assert omega_subspace(M).dims() == {0: 1}


def test_omega_cap_must_include_conformal_vector():
    with pytest.raises(ValueError):
        omega_subspace(catalogue_module(3, "Vplus", 1), 1)


def test_module_axioms_vminus():
    M = catalogue_module(3, "Vminus", 2)
    rep = check_module_axioms(M, 3)
    assert rep["status"] == "pass"
    assert rep["omega_dims"] == {"0": 1}


def test_twisted_module_scope():
    M = catalogue_module(3, "T1minus", 2)
    assert M.supports(conformal_vector(3))
    assert not M.supports(lattice_state(3, (1, 1, 1, 1), 0))
    with pytest.raises(OutOfScopeError):
        M.act(lattice_state(3, (1, 1, 1, 1), 0), 0, M.basis(0)[0])
    rep = check_module_axioms(M, 4)
    assert rep["status"] == "pass" and rep["reduced_spanning_set"]


def test_overflow_beyond_truncation():
    M = catalogue_module(3, "Vplus", 2)
    u = M.basis(2)[0]
    assert M.act_shifted(conformal_vector(3), -1, u) is OVERFLOW


def test_circ_with_vacuum():
    from latvoa.modes import virasoro
    # Y(1, z) is the identity, so every mode but 1(-1) vanishes
    b = lattice_state(3, (2,), 0)
    assert not circ(vacuum(3), b)
    # a o 1 = (L(-1) + L(0)) a
    assert circ(b, vacuum(3)) == virasoro(-1, b) + virasoro(0, b)


def test_star_conformal_vacuum():
    assert star(conformal_vector(3), vacuum(3)) == conformal_vector(3)


def test_circ_top_weight():
    from latvoa.fock import E_vector, F_vector
    out = circ(E_vector(3), F_vector(3))
    assert max(out.weights()) == 7


def test_omega_additive_on_direct_sums():
    from latvoa.modules import direct_sum, catalogue_summand
    s = catalogue_summand(3, "Vplus")
    M = direct_sum(3, [s, s], 2)
    assert omega_subspace(M).dims() == {0: 2}


def test_zero_modes_on_lowest_spaces():
    from latvoa.fock import E_vector
    M = catalogue_module(3, "V(r=1)", 1)
    u = M.basis(0)[0]
    assert M.zero_mode(conformal_vector(3), u) == {key: c * mpq(1, 12) for key, c in u.items()}
    Mm = catalogue_module(3, "Vminus", 2)
    assert not Mm.zero_mode(circ(E_vector(3), E_vector(3)), Mm.basis(0)[0])
    Mp = catalogue_module(3, "Vplus", 2)
    one = Mp.basis(0)[0]
    for a in vplus_spanning_set(3, 4):
        if a.weights()[0] > 0:
            assert not Mp.zero_mode(a, one)
