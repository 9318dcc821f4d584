"""Seeded verification suites behind ``latvoa verify`` and ``latvoa character``.

Every suite returns a JSON-ready dict with one record per check; records look
like ``{id, paper_anchor, k, status, witness?, caps}``.
"""

from __future__ import annotations

import random

from gmpy2 import mpq

from .fock import Sector, State, enumerate_basis, sector_monomials, vacuum
from .linalg import format_rational
from .modes import check_l_minus1_derivative, commutator_sides, virasoro
from .modules import (catalogue_module, catalogue_names, catalogue_summand, direct_sum,
                      jordan_summand)
from .orbifold import decompose, identity_suite, lemma5_suite
from .zhu import (CERTIFIED, NOT_CERTIFIED, OVTruncation, center_certificate, check_module_axioms,
                  omega_subspace, ov_membership, vplus_spanning_set)

SUITES = ("commutators", "virasoro", "derivative", "identities", "zhu", "lemma5")


def _pool(k: int, sector: Sector, max_weight) -> list[State]:
    return [State._raw({m: mpq(1)}, sector)
            for m in sorted(sector_monomials(k, sector, max_weight), reverse=True)]


def untwisted_pool(k: int, max_weight) -> list[State]:
    out = []
    for c in range(2 * k):
        out += _pool(k, Sector.untwisted(k, c), max_weight)
    return out


def twisted_pool(k: int, max_weight) -> list[State]:
    return _pool(k, Sector.twisted(k, 1), max_weight) + _pool(k, Sector.twisted(k, 2), max_weight)


def _summary(suite: str, k: int, records: list[dict], caps: dict) -> dict:
    return {
        "suite": suite,
        "k": k,
        "caps": caps,
        "records": records,
        "status": "pass" if all(r["status"] == "pass" for r in records) else "fail",
    }


def _rec(ident, anchor, k, ok, witness=None, caps=None) -> dict:
    rec = {"id": ident, "paper_anchor": anchor, "k": k, "status": "pass" if ok else "fail",
           "caps": caps or {}}
    if witness is not None and not ok:
        rec["witness"] = witness
    return rec


# -- commutator formula ---------------------------------------------------------------

def commutator_suite(k: int = 3, max_weight=6, samples: int = 200, seed: int = 42,
                     mode_range=(-3, 5)) -> dict:
    rng = random.Random(seed)
    voa = _pool(k, Sector.untwisted(k, 0), max_weight)
    targets = untwisted_pool(k, max_weight)
    records = []
    failures = 0
    for i in range(samples):
        a, b, u = rng.choice(voa), rng.choice(voa), rng.choice(targets)
        m, n = rng.randint(*mode_range), rng.randint(*mode_range)
        lhs, rhs = commutator_sides(a, b, m, n, u)
        ok = lhs == rhs
        failures += not ok
        if not ok:
            records.append(_rec(f"sample{i}", "[a(m),b(n)] = sum_i C(m,i)(a(i)b)(m+n-i)", k, False,
                                {"a": a.to_json(), "b": b.to_json(), "u": u.to_json(), "m": m,
                                 "n": n, "lhs": lhs.to_json(), "rhs": rhs.to_json()}))
    records.insert(0, _rec("commutator_formula", "[a(m),b(n)] = sum_i C(m,i)(a(i)b)(m+n-i)", k,
                           failures == 0, {"failures": failures},
                           {"samples": samples, "max_weight": format_rational(max_weight),
                            "seed": seed, "mode_range": list(mode_range)}))
    return _summary("commutators", k, records, {"samples": samples, "seed": seed,
                                                "max_weight": format_rational(max_weight)})


# -- Virasoro relations ------------------------------------------------------------------

def central_charge(k: int) -> mpq:
    """c from L(2)L(-2)1 = (c/2)1."""
    one = vacuum(k)
    v = virasoro(2, virasoro(-2, one))
    c = 2 * v.coeff(next(iter(one.terms)))
    if v != c / 2 * one:
        raise AssertionError("L(2)L(-2)1 is not a multiple of the vacuum")
    return c


def virasoro_relation_holds(m: int, n: int, v: State, c) -> bool:
    lhs = virasoro(m, virasoro(n, v)) - virasoro(n, virasoro(m, v))
    rhs = (m - n) * virasoro(m + n, v)
    if m + n == 0:
        rhs = rhs + mpq(m ** 3 - m, 12) * c * v
    return lhs == rhs


def virasoro_suite(k: int = 3, max_weight=6, samples: int = 200, seed: int = 42, bound: int = 3) -> dict:
    rng = random.Random(seed)
    c = central_charge(k)
    records = [_rec("central_charge", "L(2)L(-2)1 = (c/2)1 with c = 1", k, c == 1,
                    {"c": format_rational(c)})]
    for label, pool in (("untwisted", untwisted_pool(k, max_weight)),
                        ("twisted", twisted_pool(k, max_weight))):
        chosen = [rng.choice(pool) for _ in range(samples)]
        bad = []
        for v in chosen:
            for m in range(-bound, bound + 1):
                for n in range(-bound, bound + 1):
                    if not virasoro_relation_holds(m, n, v, c):
                        bad.append({"m": m, "n": n, "v": v.to_json()})
        records.append(_rec(f"virasoro_{label}", "[L(m),L(n)] = (m-n)L(m+n) + (m^3-m)/12 c", k,
                            not bad, bad[:5], {"samples": samples, "mode_bound": bound,
                                               "max_weight": format_rational(max_weight)}))
    return _summary("virasoro", k, records, {"samples": samples, "seed": seed,
                                             "max_weight": format_rational(max_weight)})


# -- L(-1)-derivative ------------------------------------------------------------------

def derivative_suite(k: int = 3, max_weight=6, samples: int = 100, seed: int = 42,
                     mode_range=(-3, 5)) -> dict:
    rng = random.Random(seed)
    voa = _pool(k, Sector.untwisted(k, 0), max_weight)
    targets = untwisted_pool(k, max_weight)
    bad = []
    for i in range(samples):
        a, s, n = rng.choice(voa), rng.choice(targets), rng.randint(*mode_range)
        if not check_l_minus1_derivative(a, n, s):
            bad.append({"a": a.to_json(), "n": n, "s": s.to_json()})
    records = [_rec("l_minus1_derivative", "Y(L(-1)a, z) = d/dz Y(a, z)", k, not bad, bad[:5],
                    {"samples": samples, "seed": seed, "max_weight": format_rational(max_weight)})]
    return _summary("derivative", k, records, {"samples": samples, "seed": seed,
                                               "max_weight": format_rational(max_weight)})


# -- Zhu algebra ----------------------------------------------------------------------

def untwisted_catalogue(k: int) -> list[str]:
    return [n for n in catalogue_names(k) if not n.startswith("T")]


def zhu_suite(k: int = 3, max_weight=4, omega_cap: int = 6, module_degree: int = 2) -> dict:
    """Module axioms on Omega(M) for every untwisted catalogue module, plus center
    certificates for omega * a - a * omega."""
    records = []
    elements = vplus_spanning_set(k, max_weight)
    for name in untwisted_catalogue(k):
        M = catalogue_module(k, name, module_degree)
        om = omega_subspace(M, omega_cap)
        rep = check_module_axioms(M, max_weight, omega=om, elements=elements)
        lowest_only = set(om.dims()) == {0} and om.dims()[0] == 1
        records.append(_rec(f"omega_{name}", "Omega(M) is the lowest space", k, lowest_only,
                            {"omega_dims": rep["omega_dims"]},
                            {"omega_cap": omega_cap, "module_degree": module_degree}))
        for chk in rep["checks"]:
            records.append(_rec(f"{chk['check']} [{name}]", "o(.) induces an A(V)-module on Omega(M)",
                                k, chk["status"] == "pass", rep["failures"][:3],
                                {"weight_cap": format_rational(max_weight), "omega_cap": omega_cap}))
    bad = []
    for a in elements:
        wt = int(a.weights()[0])
        trunc = OVTruncation(k, wt + 3)
        if center_certificate(a, trunc) != CERTIFIED:
            bad.append(a.to_json())
    records.append(_rec("center", "[omega] is central in A(V)", k, not bad, bad[:3],
                        {"weight_cap": format_rational(max_weight), "ov_cap": "wt(a)+3",
                         "tested": len(elements)}))
    unit = ov_membership(vacuum(k), OVTruncation(k, int(max_weight) + 3))
    records.append(_rec("unit_not_in_ov", "1 is not in O(V)", k, unit == NOT_CERTIFIED,
                        {"certificate": unit}, {"ov_cap": int(max_weight) + 3}))
    return _summary("zhu", k, records, {"weight_cap": format_rational(max_weight),
                                        "omega_cap": omega_cap, "module_degree": module_degree})


# -- identity chains and the pole order of Y(E, z) ------------------------------------

def identities_suite(k: int = 3) -> dict:
    return _summary("identities", k, identity_suite(k), {})


def lemma5_suite_report(k: int = 3, max_weight=5) -> dict:
    return _summary("lemma5", k, lemma5_suite(k, max_weight), {"max_weight": format_rational(max_weight)})


def run_suite(name: str, k: int, max_weight, samples: int, seed: int) -> dict:
    if name == "commutators":
        return commutator_suite(k, max_weight, samples, seed)
    if name == "virasoro":
        return virasoro_suite(k, max_weight, samples, seed)
    if name == "derivative":
        return derivative_suite(k, max_weight, samples, seed)
    if name == "identities":
        return identities_suite(k)
    if name == "zhu":
        return zhu_suite(k, max_weight)
    if name == "lemma5":
        return lemma5_suite_report(k, max_weight)
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


# -- graded characters -------------------------------------------------------------------

def inverse_product_series(exponents, sign: int, n_max: int) -> list[int]:
    """Coefficients x^0..x^n_max of prod_e 1/(1 - sign*x^e)."""
    coeffs = [0] * (n_max + 1)
    coeffs[0] = 1
    for e in exponents:
        if e > n_max:
            continue
        # multiply by 1/(1 - sign x^e): c[n] += sign * c[n - e]
        for n in range(e, n_max + 1):
            coeffs[n] += sign * coeffs[n - e]
    return coeffs


def character_formula(k: int, sector: Sector, max_weight) -> dict:
    """dim and theta-trace per weight from generating functions (no basis enumeration)."""
    out = {}
    if sector.is_twisted:
        n_max = int(2 * (mpq(max_weight) - mpq(1, 16)))
        odd = range(1, n_max + 1, 2)
        dims = inverse_product_series(odd, 1, n_max)
        trace = inverse_product_series(odd, -1, n_max)
        for j in range(n_max + 1):
            if dims[j]:
                out[mpq(1, 16) + mpq(j, 2)] = (dims[j], trace[j])
        return out
    top = int(max_weight)
    part = inverse_product_series(range(1, top + 1), 1, top)
    signed = inverse_product_series(range(1, top + 1), -1, top)
    bound = int((4 * k * top) ** 0.5) + 2
    for r in range(-bound, bound + 1):
        if r % (2 * k) != sector.coset:
            continue
        base = mpq(r * r, 4 * k)
        for n in range(0, top + 1):
            w = base + n
            if w > max_weight:
                break
            dim, tr = out.get(w, (0, 0))
            # theta fixes only label 0 monomials, acting there by (-1)^length
            out[w] = (dim + part[n], tr + (signed[n] if r == 0 else 0))
    return dict(sorted(out.items()))


def character_report(k: int, sector: Sector, theta_sign: int | None, max_weight) -> dict:
    enum = {w: len(b) for w, b in enumerate_basis(k, sector, max_weight, theta_sign).items()}
    formula = character_formula(k, sector, max_weight)
    rows = []
    ok = True
    for w in sorted(set(enum) | set(formula)):
        dim, tr = formula.get(w, (0, 0))
        predicted = dim if theta_sign is None else (dim + theta_sign * tr) // 2
        if theta_sign is not None and (dim + theta_sign * tr) % 2:
            ok = False
        direct = enum.get(w, 0)
        ok &= predicted == direct
        rows.append({"weight": format_rational(w), "direct": direct, "formula": predicted,
                     "dim_full": dim, "theta_trace": tr})
    return {"k": k, "sector": sector.name,
            "theta_sign": theta_sign, "max_weight": format_rational(max_weight),
            "rows": rows, "status": "pass" if ok else "fail"}


# -- decomposition of seeded direct sums -----------------------------------------------

def expected_families(k: int, spec: list[tuple[str, int]], max_degree: int, T: int,
                      jordan: tuple[int, object] | None = None) -> dict:
    """Per-family degree dimensions predicted from the individual catalogue gradings."""
    out: dict = {}
    for name, mult in spec:
        s = catalogue_summand(k, name)
        step = T // s.native_T
        dims = catalogue_module(k, name, max_degree // step).dims()
        fam = out.setdefault(s.lowest_weight, {})
        for j, n in enumerate(dims):
            if n:
                fam[j * step] = fam.get(j * step, 0) + mult * n
    if jordan is not None:
        deg, lam = jordan
        fam = out.setdefault(mpq(lam), {})
        fam[deg] = fam.get(deg, 0) + 2
    return out


def build_sum(k: int, spec: list[tuple[str, int]], max_degree: int,
              jordan: tuple[int, object] | None = None):
    summands = [catalogue_summand(k, name) for name, mult in spec for _ in range(mult)]
    if jordan is not None:
        summands.append(jordan_summand(k, jordan[0], jordan[1], 1))
    return direct_sum(k, summands, max_degree)


def decomposition_suite(k: int = 3, max_degree: int = 6, cases: int = 5, seed: int = 42,
                        check_stability: bool = True) -> dict:
    rng = random.Random(seed)
    names = catalogue_names(k)
    untwisted = [n for n in names if not n.startswith("T")]
    twisted = [n for n in names if n.startswith("T")]
    records = []
    for i in range(cases):
        # alternate between untwisted-only (T = 1) and mixed (T = 2) sums
        pool = untwisted if i % 2 == 0 else names
        chosen = rng.sample(pool, rng.randint(2, 3))
        if i % 2 and not any(n in twisted for n in chosen):
            chosen[0] = rng.choice(twisted)
        spec = [(n, rng.randint(1, 2)) for n in chosen]
        M = build_sum(k, spec, max_degree)
        dec = decompose(M, check_stability=check_stability)
        got = {lam: dict(sorted(d.items())) for lam, d in dec.families.items()}
        want = expected_families(k, spec, max_degree, M.T)
        ok = got == want and dec.complete and dec.stability.get("status", "pass") == "pass"
        records.append(_rec(f"sum{i}", "M = direct sum of families lam + n/T", k, ok,
                            {"got": dec.to_json()["families"], "residual": dec.to_json()["residual"]},
                            {"summands": [f"{m}x{n}" for n, m in spec], "max_degree": max_degree,
                             "T": M.T}))
    spec = [("Vplus", 1)]
    jordan = (2, mpq(0))
    M = build_sum(k, spec, max_degree, jordan)
    dec = decompose(M, [mpq(0)], check_stability=False)
    got = {lam: dict(sorted(d.items())) for lam, d in dec.families.items()}
    ok = got == expected_families(k, spec, max_degree, 1, jordan) and dec.complete
    records.append(_rec("jordan", "generalized eigenspaces absorb a Jordan block", k, ok,
                        dec.to_json(), {"jordan_degree": 2, "lambda": "0", "max_degree": max_degree}))
    return _summary("decomposition", k, records, {"cases": cases, "seed": seed, "max_degree": max_degree})
