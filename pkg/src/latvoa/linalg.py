"""Exact rational linear algebra.

Scalars are ``gmpy2.mpq`` (exact, and equal/hash-compatible with
``fractions.Fraction``).  Sparse vectors are plain dicts mapping a hashable,
totally ordered key to a nonzero rational;
matrices are small dense row-major grids (:class:`Matrix`).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Hashable, Iterable, Mapping, Sequence

from gmpy2 import mpq

Rational = mpq
_MPQ = type(mpq(0))
SparseVector = dict


class IrrationalScalarError(TypeError):
    """Raised when a value cannot be carried exactly as a rational."""


def as_rational(x) -> mpq:
    """Coerce ``x`` to an exact rational, refusing floats and anything inexact."""
    if type(x) is _MPQ:
        return x
    if isinstance(x, bool):
        raise IrrationalScalarError(f"not a scalar: {x!r}")
    if isinstance(x, (int, _RationalABC)):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, str):
        return parse_rational(x)
    raise IrrationalScalarError(f"cannot represent {x!r} exactly over Q")


def parse_rational(s: str) -> mpq:
    s = s.strip()
    if "." in s or "e" in s.lower():
        raise IrrationalScalarError(f"decimal literal {s!r} is not an exact rational")
    return mpq(Fraction(s))


def format_rational(q) -> str:
    """Serialize as ``"p/q"``, or ``"p"`` when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


# -- sparse vectors ---------------------------------------------------------

def vec_add(u: Mapping, v: Mapping, scale=1) -> dict:
    """Return ``u + scale*v`` as a new normalized sparse vector."""
    out = dict(u)
    vec_iadd(out, v, scale)
    return out


def vec_iadd(acc: dict, v: Mapping, scale=1) -> dict:
    """In-place ``acc += scale*v``; drops coefficients that cancel."""
    if not scale:
        return acc
    for key, c in v.items():
        new = acc.get(key, 0) + scale * c
        if new:
            acc[key] = new
        else:
            acc.pop(key, None)
    return acc


def vec_scale(v: Mapping, scale) -> dict:
    if not scale:
        return {}
    return {key: scale * c for key, c in v.items()}


# -- dense matrices ---------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense rational matrix.  ``data`` is a tuple of row tuples."""

    rows: int
    cols: int
    data: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.data) != self.rows or any(len(r) != self.cols for r in self.data):
            raise ValueError("inconsistent matrix dimensions")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], cols: int | None = None) -> "Matrix":
        data = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        one, zero = mpq(1), mpq(0)
        return cls(n, n, tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, tuple((mpq(0),) * cols for _ in range(rows)))

    @classmethod
    def diagonal(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls.from_rows([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def tolist(self) -> list[list[mpq]]:
        return [list(r) for r in self.data]

    def column(self, j: int) -> list[mpq]:
        return [r[j] for r in self.data]

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows, tuple(zip(*self.data)) if self.rows else ())

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.rows, self.cols,
                      tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.data, other.data)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols_t = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            nz = [(j, a) for j, a in enumerate(r) if a]
            out.append(tuple(sum((a * c[j] for j, a in nz), mpq(0)) for c in cols_t))
        return Matrix(self.rows, other.cols, tuple(out))

    def apply(self, v: Sequence) -> list[mpq]:
        return [sum((a * x for a, x in zip(r, v) if a and x), mpq(0)) for r in self.data]

    def shift(self, lam) -> "Matrix":
        """``self - lam*I``."""
        lam = as_rational(lam)
        return Matrix(self.rows, self.cols,
                      tuple(tuple(a - lam if i == j else a for j, a in enumerate(r))
                            for i, r in enumerate(self.data)))

    def power(self, e: int) -> "Matrix":
        result = Matrix.identity(self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    a = m.tolist()
    pivots: list[int] = []
    row = 0
    for col in range(m.cols):
        if row >= m.rows:
            break
        piv = next((i for i in range(row, m.rows) if a[i][col]), None)
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        prow = a[row]
        for i in range(m.rows):
            if i != row and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(col)
        row += 1
    return Matrix(m.rows, m.cols, tuple(tuple(r) for r in a)), pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel(m: Matrix) -> list[list[mpq]]:
    """Basis of the right null space, one list per basis vector."""
    r, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [mpq(0)] * m.cols
        v[f] = mpq(1)
        for i, p in enumerate(pivots):
            v[p] = -r[i, f]
        basis.append(v)
    return basis


def column_space(m: Matrix) -> list[list[mpq]]:
    """Basis of the column space (a subset of the original columns)."""
    _, pivots = rref(m)
    return [m.column(j) for j in pivots]


class EchelonBasis:
    """Incrementally maintained echelon basis of a span of sparse vectors.

    Keys must be totally ordered; each stored row has a distinct leading key
    (its smallest key) with coefficient 1.
    """

    def __init__(self, vectors: Iterable[Mapping] = ()):
        self._rows: dict[Hashable, dict] = {}
        for v in vectors:
            self.add(v)

    def __len__(self) -> int:
        return len(self._rows)

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` after eliminating every leading key."""
        w = dict(v)
        rows = self._rows
        # rows only carry keys >= their leading key, so one ascending sweep suffices
        pending = [key for key in w if key in rows]
        heapq.heapify(pending)
        seen = set()
        while pending:
            key = heapq.heappop(pending)
            if key in seen:
                continue
            seen.add(key)
            c = w.get(key)
            if not c:
                continue
            row = rows[key]
            for k2, x in row.items():
                new = w.get(k2, 0) - c * x
                if new:
                    w[k2] = new
                else:
                    w.pop(k2, None)
                if k2 in rows and k2 not in seen:
                    heapq.heappush(pending, k2)
        return w

    def add(self, v: Mapping) -> bool:
        """Add ``v`` to the span; returns False when it was already inside."""
        w = self.reduce(v)
        if not w:
            return False
        lead = min(w)
        inv = 1 / w[lead]
        w = {key: c * inv for key, c in w.items()}
        for key, row in self._rows.items():
            if lead in row:
                vec_iadd(row, w, -row[lead])
        self._rows[lead] = w
        return True

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def basis(self) -> list[dict]:
        return [dict(self._rows[k]) for k in sorted(self._rows)]


def in_span(v: Mapping, generators: Iterable[Mapping]) -> bool:
    """Exact test of whether ``v`` is a rational combination of ``generators``."""
    return EchelonBasis(generators).contains(v)


@dataclass
class EigenDecomposition:
    """Generalized eigenspaces of a square matrix over a candidate list.

    ``spaces`` maps each candidate to a basis (column vectors as lists);
    ``residual`` spans the sum of all generalized eigenspaces whose
    eigenvalue is not among the candidates.
    """

    spaces: dict
    residual: list
    size: int

    @property
    def dims(self) -> dict:
        return {lam: len(b) for lam, b in self.spaces.items()}

    @property
    def complete(self) -> bool:
        return not self.residual


def generalized_eigenspaces(m: Matrix, candidates: Iterable) -> EigenDecomposition:
    if m.rows != m.cols:
        raise ValueError("generalized eigenspaces need a square matrix")
    n = m.rows
    spaces = {}
    complement = Matrix.identity(n)
    for lam in dict.fromkeys(as_rational(c) for c in candidates):
        p = m.shift(lam).power(n)
        spaces[lam] = kernel(p)
        complement = complement @ p
    residual = column_space(complement) if n else []
    return EigenDecomposition(spaces, residual, n)
