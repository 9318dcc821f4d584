"""Operator actions on the lattice Fock spaces.

Modes follow ``Y(a, z) = sum_n a(n) z^{-n-1}``.  For a basis element
``a = alpha(-n_1)...alpha(-n_l) e_beta`` the vertex operator is the normally
ordered product of the currents ``d^{(n_i - 1)} alpha(z)`` with

    Y(e_beta, z) = exp(sum beta(-n) z^n / n) exp(-sum beta(n) z^{-n} / n) e_beta z^{beta(0)}

where annihilation modes (alpha(j), j >= 0) act first, i.e. to the right of
``e_beta z^{beta(0)}``.  The cocycle is trivial: <m alpha, n alpha> = 2kmn is
always even, so e_beta e_gamma = e_{beta+gamma} is consistent.
"""

from __future__ import annotations

import itertools
from collections import Counter
from functools import lru_cache
from math import comb, factorial

from gmpy2 import mpq

from .fock import HALF, TWISTED_SHIFT, Monomial, State, conformal_vector
from .linalg import as_rational, vec_iadd


class OutOfScopeError(NotImplementedError):
    """Operation deliberately not implemented (e.g. lattice modes on twisted states)."""


def gbinom(m, i: int) -> mpq:
    """Generalized binomial coefficient C(m, i) for integer or rational m."""
    if i < 0:
        return mpq(0)
    num = mpq(1)
    for t in range(i):
        num *= m - t
    return num / factorial(i)


# -- single Heisenberg modes -------------------------------------------------

def _remove_part(parts: tuple, j) -> tuple:
    lst = list(parts)
    lst.remove(j)
    return tuple(lst)


def _add_part(parts: tuple, j) -> tuple:
    return tuple(sorted(parts + (j,), reverse=True))


def _merge_parts(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, reverse=True))


def _alpha_mono(k: int, j, m: Monomial):
    """alpha(j) on one monomial; yields (monomial, coefficient) pairs."""
    if j < 0:
        return ((Monomial(_add_part(m.parts, -j), m.label), 1),)
    if j == 0:
        if m.twisted:
            raise ValueError("alpha(0) does not act on twisted states")
        return ((m, m.label),) if m.label else ()
    c = m.parts.count(j)
    if not c:
        return ()
    return ((Monomial(_remove_part(m.parts, j), m.label), 2 * k * j * c),)


def _check_mode_index(n, twisted: bool):
    n = as_rational(n)
    if twisted:
        if (n - HALF).denominator != 1:
            raise ValueError(f"twisted states take half-odd-integer modes, got {n}")
    elif n.denominator != 1:
        raise ValueError(f"untwisted states take integer modes, got {n}")
    return n if twisted else int(n)


def apply_alpha(n, s: State) -> State:
    """Heisenberg mode alpha(n) with [alpha(m), alpha(n)] = 2k m delta_{m+n,0}."""
    n = _check_mode_index(n, s.sector.is_twisted)
    k = s.k
    out: dict = {}
    for m, c in s.terms.items():
        for m2, x in _alpha_mono(k, n, m):
            new = out.get(m2, 0) + c * x
            if new:
                out[m2] = new
            else:
                out.pop(m2, None)
    return State._raw(out, s.sector)


# -- Virasoro ----------------------------------------------------------------

@lru_cache(maxsize=200_000)
def _virasoro_mono(k: int, n: int, m: Monomial) -> tuple:
    out: dict = {}
    twisted = m.twisted
    top = max(m.parts) if m.parts else None
    if twisted:
        hi = mpq(n, 2)
        hi = hi + HALF if (hi - HALF).denominator != 1 else hi
        hi_max = top if top is not None else -HALF
        step = 1
    else:
        hi = -((-n) // 2)  # ceil(n/2)
        hi_max = max(top, 0) if top is not None else 0
        step = 1
    scale = mpq(1, 4 * k)
    while hi <= hi_max:
        lo = n - hi
        mult = 1 if hi == lo else 2
        for m1, c1 in _alpha_mono(k, hi, m):
            for m2, c2 in _alpha_mono(k, lo, m1):
                new = out.get(m2, 0) + mult * scale * c1 * c2
                if new:
                    out[m2] = new
                else:
                    out.pop(m2, None)
        hi += step
    if twisted and n == 0:
        vec_iadd(out, {m: TWISTED_SHIFT})
    return tuple(out.items())


def virasoro(n: int, s: State) -> State:
    """L(n) = (1/4k) sum_j :alpha(j) alpha(n-j): (+ delta_{n,0}/16 on twisted states)."""
    if int(n) != n:
        raise ValueError("Virasoro modes are integral")
    n = int(n)
    out: dict = {}
    for m, c in s.terms.items():
        for m2, x in _virasoro_mono(s.k, n, m):
            new = out.get(m2, 0) + c * x
            if new:
                out[m2] = new
            else:
                out.pop(m2, None)
    return State._raw(out, s.sector)


# -- general vertex operator modes --------------------------------------------

@lru_cache(maxsize=None)
def _exp_coefficients(m: int, q: int) -> tuple:
    """Coefficient of z^q in exp(m * sum_{n>=1} alpha(-n) z^n / n), as (parts, coeff)."""
    from .fock import partitions
    out = []
    for mu in partitions(q):
        zmu = 1
        for part, mult in Counter(mu).items():
            zmu *= part ** mult * factorial(mult)
        out.append((mu, mpq(m ** len(mu), zmu)))
    return tuple(out)


@lru_cache(maxsize=None)
def _creation_series(m: int, orders: tuple, degree: int) -> tuple:
    """Coefficients z^0..z^degree of prod_i d^{(d_i)} alpha^-(z) * E^-(z).

    Each coefficient is a tuple of (parts, coeff) pairs; alpha^- carries
    alpha(-s) z^{s-1}, so d^{(d)} alpha^- = sum_e C(e+d, d) alpha(-(e+d+1)) z^e.
    """
    series = [dict(_exp_coefficients(m, q)) for q in range(degree + 1)]
    for d in orders:
        new = [dict() for _ in range(degree + 1)]
        for q, poly in enumerate(series):
            if not poly:
                continue
            for e in range(0, degree - q + 1):
                c = comb(e + d, d)
                part = e + d + 1
                tgt = new[q + e]
                for parts, x in poly.items():
                    key = _add_part(parts, part)
                    tgt[key] = tgt.get(key, 0) + c * x
        series = new
    return tuple(tuple(p.items()) for p in series)


def _annihilation_current(k: int, d: int, series: dict) -> dict:
    """Apply d^{(d)} alpha^+(z) = sum_{j>=0} C(-j-1, d) alpha(j) z^{-j-1-d} to a z-series."""
    out: dict = {}
    sign = -1 if d % 2 else 1
    for power, vec in series.items():
        for mono, c in vec.items():
            js = set(mono.parts)
            js.add(0)
            for j in js:
                coef = sign * comb(j + d, d)
                for m2, x in _alpha_mono(k, j, mono):
                    tgt = out.setdefault(power - j - 1 - d, {})
                    new = tgt.get(m2, 0) + coef * c * x
                    if new:
                        tgt[m2] = new
                    else:
                        tgt.pop(m2, None)
    return {p: v for p, v in out.items() if v}


def _annihilation_exponential(k: int, m: int, series: dict) -> dict:
    """Apply exp(-m sum_{n>=1} alpha(n) z^{-n} / n) to a z-series."""
    if m == 0:
        return series
    total = {p: dict(v) for p, v in series.items()}
    term = series
    t = 0
    while term:
        t += 1
        nxt: dict = {}
        for power, vec in term.items():
            for mono, c in vec.items():
                for j in set(mono.parts):
                    coef = mpq(-m, j * t)
                    for m2, x in _alpha_mono(k, j, mono):
                        tgt = nxt.setdefault(power - j, {})
                        new = tgt.get(m2, 0) + coef * c * x
                        if new:
                            tgt[m2] = new
                        else:
                            tgt.pop(m2, None)
        term = {p: v for p, v in nxt.items() if v}
        for power, vec in term.items():
            vec_iadd(total.setdefault(power, {}), vec)
    return {p: v for p, v in total.items() if v}


def _split_counts(counter: Counter):
    """All ways to send j_p of the c_p currents of order p to the annihilation side."""
    keys = sorted(counter)
    for choice in itertools.product(*(range(counter[p] + 1) for p in keys)):
        weight_ = 1
        ann, cre = [], []
        for p, j in zip(keys, choice):
            c = counter[p]
            weight_ *= comb(c, j)
            ann += [p - 1] * j
            cre += [p - 1] * (c - j)
        yield weight_, tuple(ann), tuple(cre)


@lru_cache(maxsize=500_000)
def _mode_mono(k: int, a: Monomial, n: int, s: Monomial, extra: int = 0) -> tuple:
    """a(n) s for basis monomials; ``extra`` widens the creation expansion (test hook)."""
    if a.label % (2 * k):
        raise ValueError(f"{a} is not in the lattice VOA (label not divisible by 2k)")
    m = a.label // (2 * k)
    r = s.label
    shift = m * r  # <beta, lambda>
    new_label = r + a.label
    out: dict = {}
    for mult, ann, cre in _split_counts(Counter(a.parts)):
        series = {0: {s: mpq(1)}}
        for d in ann:
            series = _annihilation_current(k, d, series)
            if not series:
                break
        if not series:
            continue
        series = _annihilation_exponential(k, m, series)
        # e_beta z^{beta(0)}
        needed = {}
        for power, vec in series.items():
            q = -n - 1 - (power + shift)
            if q >= 0:
                needed[q] = vec
        if not needed:
            continue
        creation = _creation_series(m, cre, max(needed) + extra)
        for q, vec in needed.items():
            poly = creation[q]
            if not poly:
                continue
            for mono, c in vec.items():
                for parts, x in poly:
                    key = Monomial(_merge_parts(parts, mono.parts), new_label)
                    new = out.get(key, 0) + mult * c * x
                    if new:
                        out[key] = new
                    else:
                        out.pop(key, None)
    return tuple(out.items())


def _require_voa_element(a: State):
    if a.sector.is_twisted or a.sector.coset != 0:
        raise ValueError("vertex operator argument must lie in V_L (coset 0)")


def apply_mode(a: State, n: int, s: State, *, extra_truncation: int = 0) -> State:
    """The mode a(n) of the vertex operator Y(a, z) applied to an untwisted state."""
    _require_voa_element(a)
    if s.sector.is_twisted:
        raise OutOfScopeError("vertex operators of V_L on twisted sectors are not implemented")
    if int(n) != n:
        raise ValueError("untwisted modes are integral")
    n = int(n)
    k = s.k
    out: dict = {}
    for am, ac in a.terms.items():
        for sm, sc in s.terms.items():
            for m2, x in _mode_mono(k, am, n, sm, extra_truncation):
                new = out.get(m2, 0) + ac * sc * x
                if new:
                    out[m2] = new
                else:
                    out.pop(m2, None)
    return State._raw(out, s.sector)


def apply_lattice_exponential(m: int, n: int, s: State) -> State:
    """e_{m alpha}(n) s."""
    if s.sector.is_twisted:
        raise OutOfScopeError("lattice vertex operators on twisted sectors are not implemented")
    if int(m) != m:
        raise ValueError("beta must be an integer multiple of alpha")
    a = State.basis(Monomial((), 2 * s.k * int(m)), s.k)
    return apply_mode(a, n, s)


def homogeneous_weight(a: State) -> mpq:
    ws = a.weights()
    if len(ws) > 1:
        raise ValueError(f"element is not homogeneous (weights {ws})")
    return ws[0] if ws else mpq(0)


def shifted_mode(a: State, n: int, s: State) -> State:
    """a~(n) = a(wt(a) + n - 1) for homogeneous a."""
    wt = homogeneous_weight(a)
    if wt.denominator != 1:
        raise ValueError("shifted modes need integral weight")
    return apply_mode(a, int(wt) + n - 1, s)


def shifted_mode_linear(a: State, n: int, s: State) -> State:
    """a~(n) extended linearly over the homogeneous components of a."""
    total = State.zero(s.sector)
    for comp in a.homogeneous_components().values():
        total = total + shifted_mode(comp, n, s)
    return total


def zero_mode(a: State, s: State) -> State:
    """o(a) = a~(0), extended linearly to inhomogeneous a."""
    return shifted_mode_linear(a, 0, s)


def mode_product(a: State, i: int, b: State) -> State:
    """a(i) b computed inside V_L."""
    return apply_mode(a, i, b)


def max_weight(a: State) -> mpq:
    ws = a.weights()
    return ws[-1] if ws else mpq(0)


def min_weight(a: State) -> mpq:
    ws = a.weights()
    return ws[0] if ws else mpq(0)


def commutator_sides(a: State, b: State, m: int, n: int, u: State) -> tuple[State, State]:
    """Both sides of [a(m), b(n)] u = sum_i C(m, i) (a(i) b)(m + n - i) u."""
    lhs = apply_mode(a, m, apply_mode(b, n, u)) - apply_mode(b, n, apply_mode(a, m, u))
    rhs = State.zero(u.sector)
    # a(i) b has weight wt a + wt b - i - 1 and V_L has no negative weights
    i_max = int(max_weight(a) + max_weight(b))
    for i in range(0, i_max + 1):
        c = gbinom(m, i)
        if not c:
            continue
        ab = mode_product(a, i, b)
        if ab:
            rhs = rhs + c * apply_mode(ab, m + n - i, u)
    return lhs, rhs


def check_commutator(a: State, b: State, m: int, n: int, u: State) -> bool:
    lhs, rhs = commutator_sides(a, b, m, n, u)
    return lhs == rhs


def check_l_minus1_derivative(a: State, n: int, s: State) -> bool:
    """(L(-1) a)(n) s == -n a(n-1) s."""
    lhs = apply_mode(virasoro(-1, a), n, s)
    rhs = -n * apply_mode(a, n - 1, s)
    return lhs == rhs


def omega_mode(n: int, s: State) -> State:
    """omega(n) = L(n-1); works on both sectors."""
    return virasoro(n - 1, s)


def conformal(k: int) -> State:
    return conformal_vector(k)
