"""Exact computations in the rank-one lattice VOA V_L and its charge-conjugation orbifold V_L^+."""

from .fock import Sector, State, conformal_vector, enumerate_basis, lattice_state, twisted_state, vacuum
from .linalg import Matrix, Rational
from .modes import apply_mode, virasoro
from .orbifold import decompose, lemma4_check, table1

__all__ = [
    "Matrix", "Rational", "Sector", "State", "apply_mode", "conformal_vector", "decompose",
    "enumerate_basis", "lattice_state", "lemma4_check", "table1", "twisted_state", "vacuum",
    "virasoro",
]
