"""Fock spaces of the rank-one lattice L = Z*alpha with <alpha, alpha> = 2k.

A basis monomial ``alpha(-n_1)...alpha(-n_l) (x) e_lambda`` is stored as a
:class:`Monomial` with descending ``parts`` and an integer ``label`` r, where
lambda = r*alpha/2k is a point of the dual lattice.  Twisted monomials carry
half-odd-integer parts (exact halves) and the label ``"T1"`` or ``"T2"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping, NamedTuple

from gmpy2 import mpq

from .linalg import as_rational, format_rational, parse_rational, vec_iadd

HALF = mpq(1, 2)
TWISTED_SHIFT = mpq(1, 16)


@dataclass(frozen=True)
class LatticeParams:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def norm(self) -> int:
        """<alpha, alpha>."""
        return 2 * self.k

    def inner(self, r: int, s: int) -> mpq:
        """<r*alpha/2k, s*alpha/2k>."""
        return mpq(r * s, 2 * self.k)

    def coset(self, r: int) -> int:
        return r % (2 * self.k)

    def in_lattice(self, r: int) -> bool:
        return r % (2 * self.k) == 0


@dataclass(frozen=True, order=True)
class Sector:
    """Carrier of a module: an untwisted coset r mod 2k, or twisted sector T_i."""

    k: int
    coset: int | None = None
    twist: int | None = None

    @classmethod
    def untwisted(cls, k: int, coset: int = 0) -> "Sector":
        return cls(k, coset % (2 * k), None)

    @classmethod
    def twisted(cls, k: int, i: int) -> "Sector":
        if i not in (1, 2):
            raise ValueError("twisted sector index must be 1 or 2")
        return cls(k, None, i)

    @property
    def is_twisted(self) -> bool:
        return self.twist is not None

    @property
    def self_dual(self) -> bool:
        """True when theta maps the sector to itself."""
        return self.is_twisted or (2 * self.coset) % (2 * self.k) == 0

    def theta_image(self) -> "Sector":
        if self.is_twisted:
            return self
        return Sector.untwisted(self.k, -self.coset)

    @property
    def name(self) -> str:
        if self.is_twisted:
            return f"T{self.twist}"
        return f"coset{self.coset}"

    def __str__(self) -> str:
        return f"{self.name}(k={self.k})"


class Monomial(NamedTuple):
    parts: tuple
    label: object  # int r for untwisted, "T1"/"T2" for twisted

    @property
    def twisted(self) -> bool:
        return isinstance(self.label, str)

    @property
    def length(self) -> int:
        return len(self.parts)


def monomial(parts=(), label=0) -> Monomial:
    """Canonical constructor: sorts parts descending."""
    if isinstance(label, str):
        ps = tuple(sorted((as_rational(p) for p in parts), reverse=True))
        for p in ps:
            if p <= 0 or (2 * p).denominator != 1 or (2 * p).numerator % 2 == 0:
                raise ValueError(f"twisted parts must be positive half-odd-integers, got {p}")
    else:
        ps = tuple(sorted((int(p) for p in parts), reverse=True))
        if ps and ps[-1] <= 0:
            raise ValueError("untwisted parts must be positive integers")
    return Monomial(ps, label)


def weight(m: Monomial, p: LatticeParams | int) -> mpq:
    """L(0)-eigenvalue of a basis monomial."""
    k = p.k if isinstance(p, LatticeParams) else p
    if m.twisted:
        return sum(m.parts, mpq(0)) + TWISTED_SHIFT
    return mpq(sum(m.parts)) + mpq(m.label * m.label, 4 * k)


def sector_of(m: Monomial, k: int) -> Sector:
    if m.twisted:
        return Sector.twisted(k, int(m.label[1:]))
    return Sector.untwisted(k, m.label)


class State:
    """Finite rational combination of monomials from one sector.

    Treated as immutable: arithmetic returns new States and ``terms`` must not
    be mutated by callers.
    """

    __slots__ = ("terms", "sector")

    def __init__(self, terms: Mapping[Monomial, mpq] | None, sector: Sector):
        clean = {}
        if terms:
            for mono, c in terms.items():
                if c:
                    clean[mono] = c if type(c) is type(HALF) else as_rational(c)
        self.terms = clean
        self.sector = sector

    @classmethod
    def _raw(cls, terms: dict, sector: Sector) -> "State":
        s = object.__new__(cls)
        s.terms = terms
        s.sector = sector
        return s

    @classmethod
    def basis(cls, mono: Monomial, k: int, coeff=1) -> "State":
        return cls({mono: mpq(coeff)}, sector_of(mono, k))

    @classmethod
    def zero(cls, sector: Sector) -> "State":
        return cls._raw({}, sector)

    @property
    def k(self) -> int:
        return self.sector.k

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __len__(self) -> int:
        return len(self.terms)

    def items(self):
        return self.terms.items()

    def coeff(self, mono: Monomial) -> mpq:
        return self.terms.get(mono, mpq(0))

    def _check(self, other: "State"):
        if not isinstance(other, State):
            return NotImplemented
        if other.sector != self.sector and self.terms and other.terms:
            raise ValueError(f"sector mismatch: {self.sector} vs {other.sector}")
        return None

    def __add__(self, other: "State") -> "State":
        if self._check(other) is NotImplemented:
            return NotImplemented
        sector = self.sector if self.terms else other.sector
        return State._raw(vec_iadd(dict(self.terms), other.terms), sector)

    def __sub__(self, other: "State") -> "State":
        if self._check(other) is NotImplemented:
            return NotImplemented
        sector = self.sector if self.terms else other.sector
        return State._raw(vec_iadd(dict(self.terms), other.terms, -1), sector)

    def __neg__(self) -> "State":
        return State._raw({m: -c for m, c in self.terms.items()}, self.sector)

    def __mul__(self, scalar) -> "State":
        scalar = as_rational(scalar)
        if not scalar:
            return State.zero(self.sector)
        return State._raw({m: c * scalar for m, c in self.terms.items()}, self.sector)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "State":
        return self * (1 / as_rational(scalar))

    def __eq__(self, other) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        if not self.terms and not other.terms:
            return True
        return self.sector == other.sector and self.terms == other.terms

    def __hash__(self):
        return hash((self.sector, frozenset(self.terms.items())))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def weights(self) -> list[mpq]:
        return sorted({weight(m, self.k) for m in self.terms})

    def homogeneous_components(self) -> dict[mpq, "State"]:
        out: dict[mpq, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(weight(m, self.k), {})[m] = c
        return {w: State._raw(t, self.sector) for w, t in sorted(out.items())}

    def is_homogeneous(self) -> bool:
        return len(self.weights()) <= 1

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({format_rational(c)})*{_mono_str(m)}" for m, c in self.sorted_terms())

    def to_json(self) -> dict:
        return {
            "sector": self.sector.name,
            "k": self.k,
            "terms": [
                {
                    "parts": [format_rational(p) for p in m.parts],
                    "label": m.label,
                    "coeff": format_rational(c),
                }
                for m, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, obj: dict, k: int | None = None) -> "State":
        k = obj.get("k", k)
        if k is None:
            raise ValueError("state JSON needs k")
        sector_name = obj["sector"]
        if sector_name.startswith("T"):
            sector = Sector.twisted(k, int(sector_name[1:]))
        elif sector_name.startswith("coset"):
            sector = Sector.untwisted(k, int(sector_name[5:]))
        else:
            raise ValueError(f"unknown sector {sector_name!r}")
        terms = {}
        for t in obj["terms"]:
            label = t["label"]
            parts = [parse_rational(str(p)) for p in t["parts"]]
            mono = monomial(parts, label)
            if sector_of(mono, k) != sector:
                raise ValueError(f"term {t} does not belong to sector {sector_name}")
            terms[mono] = terms.get(mono, 0) + parse_rational(str(t["coeff"]))
        return cls(terms, sector)


def _mono_str(m: Monomial) -> str:
    ops = "".join(f"a(-{format_rational(p)})" for p in m.parts)
    tail = m.label if m.twisted else f"e[{m.label}]"
    return ops + tail


# -- named vectors ----------------------------------------------------------

def lattice_state(k: int, parts=(), r: int = 0, coeff=1) -> State:
    """``coeff * alpha(-parts) (x) e_{r alpha/2k}``."""
    return State.basis(monomial(parts, r), k, coeff)


def twisted_state(k: int, i: int, parts=(), coeff=1) -> State:
    return State.basis(monomial(parts, f"T{i}"), k, coeff)


def vacuum(k: int) -> State:
    return lattice_state(k)


def conformal_vector(k: int) -> State:
    """omega = (1/4k) alpha(-1)^2 e_0."""
    return lattice_state(k, (1, 1), 0, mpq(1, 4 * k))


def e_lattice(k: int, m: int) -> State:
    """e_{m alpha}."""
    return lattice_state(k, (), 2 * k * m)


def E_vector(k: int) -> State:
    return e_lattice(k, 1) + e_lattice(k, -1)


def F_vector(k: int) -> State:
    return e_lattice(k, 1) - e_lattice(k, -1)


# -- theta ------------------------------------------------------------------

def theta_monomial(m: Monomial) -> tuple[Monomial, int]:
    sign = -1 if len(m.parts) % 2 else 1
    if m.twisted:
        return m, sign
    return Monomial(m.parts, -m.label), sign


def theta(s: State) -> State:
    terms = {}
    for m, c in s.terms.items():
        m2, sign = theta_monomial(m)
        terms[m2] = c if sign > 0 else -c
    return State._raw(terms, s.sector.theta_image())


def project_pm(s: State, sign: int) -> State:
    """(s + sign*theta(s)) / 2."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if not s.sector.self_dual:
        raise ValueError(f"theta does not preserve {s.sector}")
    t = theta(s)
    out = dict(s.terms)
    vec_iadd(out, t.terms, sign)
    return State._raw({m: c / 2 for m, c in out.items()}, s.sector)


# -- partitions and bases ---------------------------------------------------

@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """All partitions of n into parts <= max_part, each descending."""
    if max_part is None or max_part > n:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(max_part, 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def odd_partitions(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Partitions of n into odd parts."""
    if max_part is None or max_part > n:
        max_part = n
    if max_part % 2 == 0:
        max_part -= 1
    if n == 0:
        return ((),)
    out = []
    for first in range(max_part, 0, -2):
        for rest in odd_partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def twisted_part_sets(depth: mpq) -> Iterator[tuple[mpq, ...]]:
    """Multisets of half-odd-integer depths summing to ``depth``."""
    twice = 2 * depth
    if twice.denominator != 1:
        return
    for parts in odd_partitions(int(twice)):
        yield tuple(mpq(p, 2) for p in parts)


def _labels_in_coset(k: int, coset: int, max_weight: mpq) -> list[int]:
    bound = math.isqrt(int(4 * k * max_weight)) + 1
    return [r for r in range(-bound, bound + 1)
            if r % (2 * k) == coset and mpq(r * r, 4 * k) <= max_weight]


def sector_monomials(p: LatticeParams | int, sector: Sector, max_weight) -> list[Monomial]:
    """All basis monomials of a sector with weight <= max_weight."""
    k = p.k if isinstance(p, LatticeParams) else p
    max_weight = as_rational(max_weight)
    if max_weight < 0:
        raise ValueError("max_weight must be nonnegative")
    out = []
    if sector.is_twisted:
        label = f"T{sector.twist}"
        budget = max_weight - TWISTED_SHIFT
        if budget < 0:
            return out
        for twice in range(0, int(2 * budget) + 1):
            for parts in odd_partitions(twice):
                out.append(Monomial(tuple(mpq(q, 2) for q in parts), label))
        return out
    for r in _labels_in_coset(k, sector.coset, max_weight):
        budget = max_weight - mpq(r * r, 4 * k)
        for n in range(0, math.floor(budget) + 1):
            for parts in partitions(n):
                out.append(Monomial(parts, r))
    return out


def theta_representative(m: Monomial) -> tuple[Monomial, int]:
    """Canonical member of the theta-orbit {m, theta(m)} and the sign relating them.

    Returns ``(rep, s)`` with ``m = s * theta^e(rep)`` for the appropriate e;
    for the self-paired monomials (label 0 or twisted) ``rep = m`` and s = 1.
    """
    if m.twisted or m.label >= 0:
        return m, 1
    m2, sign = theta_monomial(m)
    return m2, sign


def enumerate_basis(p: LatticeParams | int, sector: Sector, max_weight,
                    theta_sign: int | None = None) -> dict[mpq, list[State]]:
    """Weight-graded basis of a sector truncated at max_weight.

    With ``theta_sign`` the basis spans the theta-eigenspace: label-0 and
    twisted monomials are kept when (-1)^length matches, and each pair of
    labels +-r contributes ``m + sign*theta(m)``.
    """
    k = p.k if isinstance(p, LatticeParams) else p
    if theta_sign is not None:
        if theta_sign not in (1, -1):
            raise ValueError("theta_sign must be +1 or -1")
        if not sector.self_dual:
            raise ValueError(f"theta does not preserve {sector}; theta_sign not allowed")
    graded: dict[mpq, list[State]] = {}
    for m in sorted(sector_monomials(k, sector, max_weight), reverse=True):
        w = weight(m, k)
        if theta_sign is None:
            vec = State._raw({m: mpq(1)}, sector)
        else:
            m2, s = theta_monomial(m)
            if m2 == m:
                if s != theta_sign:
                    continue
                vec = State._raw({m: mpq(1)}, sector)
            elif m.label > 0:
                vec = State._raw({m: mpq(1), m2: mpq(s * theta_sign)}, sector)
            else:
                continue
        graded.setdefault(w, []).append(vec)
    return dict(sorted(graded.items()))


def graded_dimensions(p, sector: Sector, max_weight, theta_sign: int | None = None) -> dict:
    return {w: len(b) for w, b in enumerate_basis(p, sector, max_weight, theta_sign).items()}
