"""Finite truncations of admissible V_L^+-modules and the module catalogue.

A :class:`GradedModuleTruncation` is a finite direct sum of summands, each a
theta-eigenspace of a Fock sector (or a synthetic two-dimensional Jordan
block).  Vectors are sparse dicts keyed by ``(summand index, monomial)``;
degree d of the sum sits at weight ``lowest_weight + d/T`` of each summand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

from gmpy2 import mpq

from .fock import (Monomial, Sector, State, conformal_vector, enumerate_basis, theta_monomial,
                   vacuum, weight)
from .linalg import Matrix, as_rational, format_rational, vec_iadd
from .modes import OutOfScopeError, apply_mode, virasoro


class _Overflow:
    """Marker for oracle results that leave the truncation."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "OVERFLOW"

    def __bool__(self):
        return False


OVERFLOW = _Overflow()


@dataclass(frozen=True)
class Summand:
    """One irreducible carrier: a sector, optionally cut to a theta-eigenspace."""

    name: str
    sector: Sector | None
    theta_sign: int | None
    lowest_weight: mpq
    native_T: int
    jordan_degree: int | None = None  # synthetic Jordan block only

    @property
    def synthetic(self) -> bool:
        return self.sector is None

    @property
    def twisted(self) -> bool:
        return self.sector is not None and self.sector.is_twisted


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


@dataclass
class GradedModuleTruncation:
    k: int
    summands: list[Summand]
    max_degree: int
    T: int = field(default=0)

    def __post_init__(self):
        if not self.T:
            self.T = _lcm(s.native_T for s in self.summands)

    # -- structure ------------------------------------------------------------

    @property
    def name(self) -> str:
        counts: dict[str, int] = {}
        for s in self.summands:
            counts[s.name] = counts.get(s.name, 0) + 1
        return " + ".join(n if c == 1 else f"{c}x{n}" for n, c in counts.items())

    @property
    def lowest_weight(self) -> mpq:
        return min(s.lowest_weight for s in self.summands)

    @cached_property
    def _bases(self) -> dict[int, list[dict]]:
        bases: dict[int, list[dict]] = {d: [] for d in range(self.max_degree + 1)}
        for idx, s in enumerate(self.summands):
            if s.synthetic:
                d = s.jordan_degree
                if d <= self.max_degree:
                    bases[d] += [{(idx, 0): mpq(1)}, {(idx, 1): mpq(1)}]
                continue
            cap = s.lowest_weight + mpq(self.max_degree, self.T)
            for w, states in enumerate_basis(self.k, s.sector, cap, s.theta_sign).items():
                d = (w - s.lowest_weight) * self.T
                if d < 0:
                    raise ValueError(f"{s.name}: weight {w} below the lowest weight")
                if d.denominator != 1:
                    continue
                for st in states:
                    bases[int(d)].append({(idx, m): c for m, c in st.terms.items()})
        return bases

    def basis(self, d: int) -> list[dict]:
        if d < 0 or d > self.max_degree:
            return []
        return self._bases[d]

    def dim(self, d: int) -> int:
        return len(self.basis(d))

    def dims(self) -> list[int]:
        return [self.dim(d) for d in range(self.max_degree + 1)]

    def summand_dims(self, idx: int) -> list[int]:
        return [sum(1 for v in self.basis(d) if next(iter(v))[0] == idx)
                for d in range(self.max_degree + 1)]

    def key_degree(self, key) -> mpq:
        idx, mono = key
        s = self.summands[idx]
        if s.synthetic:
            return mpq(s.jordan_degree)
        return (weight(mono, self.k) - s.lowest_weight) * self.T

    def coordinate_key(self, key):
        """Basis coordinate owning a raw key (theta pairs share one coordinate)."""
        idx, mono = key
        s = self.summands[idx]
        if s.synthetic or s.theta_sign is None or mono.twisted or mono.label >= 0:
            return key, mpq(1)
        m2, sign = theta_monomial(mono)
        return (idx, m2), mpq(sign * s.theta_sign)

    def coordinates(self, vec: dict) -> dict:
        """Coordinates of ``vec`` in the module basis (keys are representatives)."""
        out = {}
        for key, c in vec.items():
            rep, _ = self.coordinate_key(key)
            if rep == key:
                out[key] = c
        return out

    def from_coordinates(self, d: int, coords) -> dict:
        """Vector with dense coordinate list ``coords`` in the degree-d basis."""
        out: dict = {}
        for c, b in zip(coords, self.basis(d)):
            if c:
                vec_iadd(out, b, c)
        return out

    def coordinate_vector(self, d: int, vec: dict) -> list:
        """Dense coordinates in the degree-d basis (vec must lie in M_d)."""
        coords = self.coordinates(vec)
        out = []
        for b in self.basis(d):
            rep = next(key for key in b if self.coordinate_key(key)[0] == key)
            out.append(coords.get(rep, mpq(0)))
        return out

    def degree_components(self, vec: dict) -> dict[int, dict]:
        out: dict[int, dict] = {}
        for key, c in vec.items():
            out.setdefault(int(self.key_degree(key)), {})[key] = c
        return out

    # -- operators -------------------------------------------------------------

    def summand_state(self, vec: dict, idx: int) -> State:
        s = self.summands[idx]
        return State({m: c for (i, m), c in vec.items() if i == idx}, s.sector)

    def _jordan_l0(self, idx: int, vec_part: dict) -> dict:
        s = self.summands[idx]
        lam = s.lowest_weight + mpq(s.jordan_degree, self.T)
        c0, c1 = vec_part.get((idx, 0), 0), vec_part.get((idx, 1), 0)
        out = {}
        # [[lam, 1], [0, lam]] in the basis (e0, e1)
        if lam * c0 + c1:
            out[(idx, 0)] = lam * c0 + c1
        if lam * c1:
            out[(idx, 1)] = lam * c1
        return out

    def _split(self, vec: dict) -> dict[int, dict]:
        parts: dict[int, dict] = {}
        for key, c in vec.items():
            parts.setdefault(key[0], {})[key] = c
        return parts

    def l0(self, vec: dict) -> dict:
        out: dict = {}
        for idx, part in self._split(vec).items():
            s = self.summands[idx]
            if s.synthetic:
                vec_iadd(out, self._jordan_l0(idx, part))
            else:
                st = virasoro(0, State({m: c for (_, m), c in part.items()}, s.sector))
                vec_iadd(out, {(idx, m): c for m, c in st.terms.items()})
        return out

    def l0_matrix(self, d: int) -> Matrix:
        cols = [self.coordinate_vector(d, self.l0(b)) for b in self.basis(d)]
        n = len(cols)
        return Matrix.from_rows([[cols[j][i] for j in range(n)] for i in range(n)], n)

    def act(self, a: State, n: int, vec: dict, *, check_overflow: bool = True):
        """a(n) on a module vector; returns OVERFLOW if the result leaves the truncation.

        Twisted summands only see a in span{1, omega}; other elements raise
        :class:`OutOfScopeError`.  Synthetic Jordan summands see 1(-1) = id and
        omega(1) = L(0), every other mode acting as zero.
        """
        out: dict = {}
        for idx, part in self._split(vec).items():
            s = self.summands[idx]
            if s.synthetic:
                vec_iadd(out, self._synthetic_mode(a, n, idx, part))
                continue
            st = State({m: c for (_, m), c in part.items()}, s.sector)
            if s.twisted:
                res = _virasoro_span_mode(a, n, st)
            else:
                res = apply_mode(a, n, st)
            vec_iadd(out, {(idx, m): c for m, c in res.terms.items()})
        if check_overflow and any(self.key_degree(key) > self.max_degree for key in out):
            return OVERFLOW
        return out

    def _synthetic_mode(self, a: State, n: int, idx: int, part: dict) -> dict:
        one, omega = _virasoro_span_coefficients(a)
        out: dict = {}
        if n == -1 and one:
            vec_iadd(out, part, one)
        if n == 1 and omega:
            vec_iadd(out, self._jordan_l0(idx, part), omega)
        return out

    def act_shifted(self, a: State, n: int, vec: dict, **kw):
        """a~(n) = a(wt(a) + n - 1), extended linearly over homogeneous parts of a."""
        out: dict = {}
        for w, comp in a.homogeneous_components().items():
            res = self.act(comp, int(w) + n - 1, vec, **kw)
            if res is OVERFLOW:
                return OVERFLOW
            vec_iadd(out, res)
        return out

    def zero_mode(self, a: State, vec: dict):
        return self.act_shifted(a, 0, vec)

    def degree_operator(self, vec: dict) -> dict:
        """The grading operator, acting on M_d by d/T."""
        out = {}
        for key, c in vec.items():
            g = self.key_degree(key) / self.T
            if g:
                out[key] = g * c
        return out

    def supports(self, a: State) -> bool:
        """Whether the oracle can apply modes of ``a`` on every summand."""
        if any(s.twisted for s in self.summands):
            one, omega = _virasoro_span_coefficients(a)
            rest = a - one * vacuum(a.k) - omega * conformal_vector(a.k)
            return not rest
        return True

    def vector_to_json(self, vec) -> object:
        if vec is OVERFLOW:
            return "overflow"
        return [
            {"summand": idx, "parts": [format_rational(p) for p in m.parts], "label": m.label,
             "coeff": format_rational(c)}
            if not isinstance(m, int) else
            {"summand": idx, "jordan": m, "coeff": format_rational(c)}
            for (idx, m), c in sorted(vec.items(), key=lambda kv: (kv[0][0], str(kv[0][1])))
        ]


def _virasoro_span_coefficients(a: State) -> tuple[mpq, mpq]:
    k = a.k
    one = a.coeff(Monomial((), 0))
    omega = a.coeff(Monomial((1, 1), 0)) * 4 * k
    return one, omega


def _virasoro_span_mode(a: State, n: int, st: State) -> State:
    one, omega = _virasoro_span_coefficients(a)
    rest = a - one * vacuum(a.k) - omega * conformal_vector(a.k)
    if rest:
        raise OutOfScopeError("only 1 and omega act on twisted sectors")
    out = State.zero(st.sector)
    if one and n == -1:
        out = out + one * st
    if omega:
        out = out + omega * virasoro(n - 1, st)
    return out


# -- catalogue ---------------------------------------------------------------

def _summand(k: int, name: str, sector: Sector, sign: int | None, T: int) -> Summand:
    # grow the cap from the smallest label weight until the grading is nonempty
    cap = _label_floor(k, sector)
    while not (probe := enumerate_basis(k, sector, cap, sign)):
        cap += mpq(1, T)
    return Summand(name, sector, sign, min(probe), T)


def _label_floor(k: int, sector: Sector) -> mpq:
    if sector.is_twisted:
        return mpq(1, 16)
    c = sector.coset
    return min(mpq(r * r, 4 * k) for r in (c, c - 2 * k))


def catalogue_names(k: int) -> list[str]:
    names = ["Vplus", "Vminus", "Vhalfplus", "Vhalfminus",
             "T1plus", "T1minus", "T2plus", "T2minus"]
    names += [f"V(r={r})" for r in range(1, k)]
    return names


def catalogue_summand(k: int, name: str) -> Summand:
    """Summand for a catalogue name; the lowest weight is read off the grading."""
    if name in ("Vplus", "Vminus"):
        return _summand(k, name, Sector.untwisted(k, 0), 1 if name == "Vplus" else -1, 1)
    if name in ("Vhalfplus", "Vhalfminus"):
        return _summand(k, name, Sector.untwisted(k, k), 1 if name == "Vhalfplus" else -1, 1)
    if name[:2] in ("T1", "T2") and name[2:] in ("plus", "minus"):
        return _summand(k, name, Sector.twisted(k, int(name[1])), 1 if name[2:] == "plus" else -1, 2)
    if name.startswith("V(r=") and name.endswith(")"):
        r = int(name[4:-1])
        if not 1 <= r <= k - 1:
            raise ValueError(f"{name}: need 1 <= r <= k-1 = {k - 1}")
        return _summand(k, name, Sector.untwisted(k, r), None, 1)
    raise ValueError(f"unknown catalogue module {name!r}")


def catalogue_module(k: int, name: str, max_degree: int) -> GradedModuleTruncation:
    return GradedModuleTruncation(k, [catalogue_summand(k, name)], max_degree)


def catalogue(k: int, max_degree: int) -> list[GradedModuleTruncation]:
    """Truncations of all inequivalent irreducible V_L^+-modules (k + 7 of them)."""
    if k < 1:
        raise ValueError("k must be positive")
    return [catalogue_module(k, name, max_degree) for name in catalogue_names(k)]


def jordan_summand(k: int, degree: int, lam, T: int = 1) -> Summand:
    """Synthetic block with L(0) = [[lam + degree/T, 1], [0, lam + degree/T]]."""
    return Summand("Jordan", None, None, as_rational(lam), T, jordan_degree=degree)


def direct_sum(k: int, summands: list[Summand], max_degree: int) -> GradedModuleTruncation:
    return GradedModuleTruncation(k, list(summands), max_degree)
