"""Zhu's products, truncated O(V) spans and the Omega(M) / A(V)-module checks.

A(V) = V/O(V) is never built.  Everything is tested through the zero-mode
action o(a) on concrete module truncations, which is finite and exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from .fock import Sector, State, conformal_vector, enumerate_basis
from .linalg import EchelonBasis, Matrix, as_rational, format_rational, kernel
from .modes import apply_mode, gbinom
from .modules import OVERFLOW, GradedModuleTruncation

CERTIFIED = "certified-true"
NOT_CERTIFIED = "not-certified"

DEFAULT_OMEGA_CAP = 6


def _residue_product(a: State, b: State, shift: int) -> State:
    """sum_i C(wt a, i) a(i - shift) b, extended linearly in a."""
    out = State.zero(b.sector)
    for w, comp in a.homogeneous_components().items():
        wt = int(w)
        for i in range(wt + 1):
            out = out + gbinom(wt, i) * apply_mode(comp, i - shift, b)
    return out


def circ(a: State, b: State) -> State:
    """a o b = Res_z (1+z)^{wt a} z^{-2} Y(a, z) b."""
    return _residue_product(a, b, 2)


def star(a: State, b: State) -> State:
    """a * b = Res_z (1+z)^{wt a} z^{-1} Y(a, z) b."""
    return _residue_product(a, b, 1)


def vplus_spanning_set(k: int, cap) -> list[State]:
    """Homogeneous theta-even basis of V_L^+ up to weight ``cap``."""
    graded = enumerate_basis(k, Sector.untwisted(k, 0), cap, theta_sign=1)
    return [s for states in graded.values() for s in states]


# -- O(V) truncations ----------------------------------------------------------

@dataclass
class OVTruncation:
    """Span of a o b over theta-even basis pairs with wt a + wt b + 1 <= cap."""

    k: int
    cap: int
    generators: list[State] = field(default_factory=list)

    def __post_init__(self):
        if not self.generators:
            basis = vplus_spanning_set(self.k, self.cap)
            for a in basis:
                wa = a.weights()[0]
                for b in basis:
                    if wa + b.weights()[0] + 1 <= self.cap:
                        g = circ(a, b)
                        if g:
                            self.generators.append(g)
        self._span = EchelonBasis(g.terms for g in self.generators)

    @property
    def rank(self) -> int:
        return len(self._span)

    def contains(self, x: State) -> bool:
        return self._span.contains(x.terms)


def ov_membership(x: State, trunc: OVTruncation) -> str:
    """One-sided certificate: CERTIFIED when x is in the truncated O(V) span."""
    return CERTIFIED if trunc.contains(x) else NOT_CERTIFIED


# -- Omega(M) -----------------------------------------------------------------

@dataclass
class OmegaResult:
    """Joint kernel of the positive shifted modes, per degree, up to testing depth."""

    bases: dict[int, list[dict]]
    cap: int
    spanning_size: int
    reduced_spanning: bool

    def dims(self) -> dict[int, int]:
        return {d: len(b) for d, b in self.bases.items()}

    def vectors(self) -> list[tuple[int, dict]]:
        return [(d, v) for d, b in sorted(self.bases.items()) for v in b]


def module_spanning_set(M: GradedModuleTruncation, cap) -> tuple[list[State], bool]:
    """V_L^+ elements whose modes the module oracle supports; flag if reduced."""
    span = vplus_spanning_set(M.k, cap)
    usable = [a for a in span if M.supports(a)]
    return usable, len(usable) < len(span)


def omega_subspace(M: GradedModuleTruncation, test_weight_cap=DEFAULT_OMEGA_CAP,
                   max_degree: int | None = None) -> OmegaResult:
    cap = as_rational(test_weight_cap)
    if cap < 2:
        raise ValueError("test weight cap must be at least 2 so that omega is included")
    top = M.max_degree if max_degree is None else min(max_degree, M.max_degree)
    span, reduced = module_spanning_set(M, cap)
    bases: dict[int, list[dict]] = {}
    for d in range(top + 1):
        basis = M.basis(d)
        if not basis:
            continue
        rows = []
        for n in range(1, d // M.T + 1):
            target = d - n * M.T
            if not M.basis(target):
                continue
            for a in span:
                cols = []
                for b in basis:
                    img = M.act_shifted(a, n, b)
                    cols.append(M.coordinate_vector(target, img))
                rows.extend([[c[i] for c in cols] for i in range(len(M.basis(target)))])
        if rows:
            ker = kernel(Matrix.from_rows(rows, len(basis)))
        else:
            ker = [[mpq(int(i == j)) for j in range(len(basis))] for i in range(len(basis))]
        vecs = [M.from_coordinates(d, v) for v in ker]
        if vecs:
            bases[d] = vecs
    return OmegaResult(bases, int(cap), len(span), reduced)


# -- A(V)-module axioms on Omega(M) ----------------------------------------------

def _vec_json(M: GradedModuleTruncation, v) -> object:
    return M.vector_to_json(v)


def check_module_axioms(M: GradedModuleTruncation, weight_cap=4, *, omega: OmegaResult | None = None,
                        elements: list[State] | None = None, expected_l0=None) -> dict:
    """Verify o(a o b) = 0, o(a * b) = o(a) o(b) and o(omega) = lowest weight on Omega(M).

    Returns a JSON-ready report; failures carry witnesses.
    """
    k = M.k
    if omega is None:
        omega = omega_subspace(M, DEFAULT_OMEGA_CAP)
    if elements is None:
        elements, _ = module_spanning_set(M, weight_cap)
    if expected_l0 is None:
        expected_l0 = M.lowest_weight
    checks = []
    failures = []
    vectors = omega.vectors()
    w = conformal_vector(k)
    # o(omega) = L(0) acts on Omega(M) cap M_d by lowest weight + d/T; the lowest
    # degree must be present and carry the catalogue scalar
    ok = bool(omega.bases.get(0))
    for d, u in vectors:
        got = M.zero_mode(w, u)
        scalar = expected_l0 + mpq(d, M.T)
        want = {key: c * scalar for key, c in u.items()} if scalar else {}
        if got != want:
            ok = False
            failures.append({"check": "o(omega)", "u": _vec_json(M, u), "got": _vec_json(M, got)})
    checks.append({"check": "o(omega) = lowest weight", "scalar": format_rational(expected_l0),
                   "status": "pass" if ok else "fail"})
    n_circ = n_star = 0
    circ_ok = star_ok = True
    skipped = 0
    for a in elements:
        for b in elements:
            ab_circ = circ(a, b)
            ab_star = star(a, b)
            if not (M.supports(ab_circ) and M.supports(ab_star)):
                skipped += 1
                continue
            for d, u in vectors:
                got = M.zero_mode(ab_circ, u)
                n_circ += 1
                if got is OVERFLOW or got:
                    circ_ok = False
                    failures.append({"check": "o(a o b) = 0", "a": a.to_json(), "b": b.to_json(),
                                     "u": _vec_json(M, u), "got": _vec_json(M, got)})
                lhs = M.zero_mode(ab_star, u)
                ob = M.zero_mode(b, u)
                rhs = OVERFLOW if ob is OVERFLOW else M.zero_mode(a, ob)
                n_star += 1
                if lhs is OVERFLOW or rhs is OVERFLOW or lhs != rhs:
                    star_ok = False
                    failures.append({"check": "o(a * b) = o(a)o(b)", "a": a.to_json(), "b": b.to_json(),
                                     "u": _vec_json(M, u), "lhs": _vec_json(M, lhs),
                                     "rhs": _vec_json(M, rhs)})
    checks.append({"check": "o(a o b) = 0", "cases": n_circ, "status": "pass" if circ_ok else "fail"})
    checks.append({"check": "o(a * b) = o(a) o(b)", "cases": n_star,
                   "status": "pass" if star_ok else "fail"})
    return {
        "module": M.name,
        "k": k,
        "omega_dims": {str(d): n for d, n in omega.dims().items()},
        "omega_cap": omega.cap,
        "reduced_spanning_set": omega.reduced_spanning,
        "weight_cap": int(as_rational(weight_cap)),
        "skipped_pairs": skipped,
        "checks": checks,
        "failures": failures,
        "status": "pass" if not failures else "fail",
    }


def center_certificate(a: State, trunc: OVTruncation) -> str:
    """Certificate for omega * a - a * omega in O(V)."""
    w = conformal_vector(a.k)
    return ov_membership(star(w, a) - star(a, w), trunc)
