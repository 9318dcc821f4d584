"""Acceptance criteria, one test each, with their time budgets.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line.  Run directly with
``python tests/test_acceptance.py`` for just the summary lines.
"""

import contextlib
import io
import json
import sys
import time
from itertools import combinations_with_replacement

import pytest
from gmpy2 import mpq

from latvoa.cli import main as cli_main
from latvoa.fock import Sector
from latvoa.orbifold import composite_counterexample, identity_suite, is_prime, lemma4_check, lemma5_suite
from latvoa.suites import (character_report, commutator_suite, decomposition_suite, derivative_suite,
                           virasoro_suite, zhu_suite)


def _report(label, ok, elapsed, budget, detail=""):
    within = budget is None or elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    limit = f" / {budget:g} s" if budget else ""
    print(f"[{status}] {label}: {detail} ({elapsed:.2f} s{limit})", flush=True)
    return ok and within


def _timed(fn):
    t0 = time.perf_counter()
    ok, detail = fn()
    return ok, detail, time.perf_counter() - t0


# -- criteria ---------------------------------------------------------------------------

def crit_table1():
    bad = []
    for k in (2, 3, 5, 7):
        stream = io.StringIO()
        with contextlib.redirect_stdout(stream):
            code = cli_main(["table1", "--k", str(k), "--format", "json"])
        got = {mpq(v) for v in json.loads(stream.getvalue())["values"]}
        want = {mpq(0), mpq(1), mpq(1, 16), mpq(9, 16)} | {mpq(r * r, 4 * k) for r in range(1, k + 1)}
        if code != 0 or got != want:
            bad.append(k)
    return not bad, "exact sets for k = 2, 3, 5, 7" if not bad else f"mismatch for k in {bad}"


def crit_identities():
    failing = [(k, r["id"]) for k in (2, 3, 5) for r in identity_suite(k) if r["status"] != "pass"]
    return not failing, "8 identity classes for k = 2, 3, 5" if not failing else f"failed {failing}"


def crit_commutators():
    rep = commutator_suite(3, 6, 200, 42)
    n = rep["records"][0]["witness"]["failures"] if "witness" in rep["records"][0] else 0
    return rep["status"] == "pass", f"200 samples, {n} failures"


def crit_virasoro():
    rep = virasoro_suite(3, 6, 200, 42)
    c = rep["records"][0]
    ok = rep["status"] == "pass" and c["status"] == "pass"
    return ok, "c = 1 from L(2)L(-2)1; |m|,|n| <= 3 on untwisted and twisted samples"


def crit_derivative():
    rep = derivative_suite(3, 6, 100, 42)
    return rep["status"] == "pass", "100 samples"


def crit_zhu():
    rep = zhu_suite(3, 4)
    failing = [r["id"] for r in rep["records"] if r["status"] != "pass"]
    return not failing, (f"{len(rep['records'])} checks on all untwisted modules"
                         if not failing else f"failed {failing[:4]}")


def crit_lemma4():
    bad = []
    for k in range(2, 25):
        if is_prime(k):
            rep = lemma4_check(k)
            if not (rep.distinct and rep.all_nonzero_gaps):
                bad.append(k)
        elif k >= 4:
            r, s, n = composite_counterexample(k)
            diff = mpq(s * s - r * r, 4 * k)
            if not (0 <= r < s <= k and diff.denominator == 1 and diff == n):
                bad.append(k)
    return not bad, "primes <= 23 pass, composites 4..24 give integer differences" if not bad else f"{bad}"


def crit_decomposition():
    rep = decomposition_suite(3, 6, 5, 42)
    Ts = {r["caps"].get("T") for r in rep["records"] if r["id"].startswith("sum")}
    ok = rep["status"] == "pass" and Ts == {1, 2}
    return ok, f"5 seeded sums (T in {sorted(Ts)}) plus Jordan insertion"


def _brute_vplus(k, top):
    dims = [0] * (top + 1)
    for w in range(top + 1):
        for length in range(0, w + 1, 2):
            dims[w] += sum(1 for p in combinations_with_replacement(range(1, w + 1), length) if sum(p) == w)
    for r in range(2 * k, 10 * k, 2 * k):
        for w in range(top + 1):
            rest = w - mpq(r * r, 4 * k)
            if rest >= 0 and rest.denominator == 1:
                n = int(rest)
                dims[w] += sum(1 for length in range(n + 1)
                               for p in combinations_with_replacement(range(1, n + 1), length) if sum(p) == n)
    return dims


def crit_character():
    bad = []
    for k in (2, 3, 5):
        cases = [(Sector.untwisted(k, 0), 1), (Sector.untwisted(k, 0), -1),
                 (Sector.untwisted(k, k), 1), (Sector.untwisted(k, k), -1),
                 (Sector.twisted(k, 1), 1), (Sector.twisted(k, 1), -1),
                 (Sector.twisted(k, 2), 1), (Sector.twisted(k, 2), -1)]
        cases += [(Sector.untwisted(k, c), None) for c in range(1, k)]
        for sector, sign in cases:
            rep = character_report(k, sector, sign, 12)
            if rep["status"] != "pass":
                bad.append((k, sector.name, sign))
        plus = character_report(k, Sector.untwisted(k, 0), 1, 1)
        if [r["direct"] for r in plus["rows"]] != [1, 0]:
            bad.append((k, "dim V_L^+ at weight 1"))
    prefix = [r["direct"] for r in character_report(3, Sector.untwisted(3, 0), 1, 3)["rows"]]
    if prefix != [1, 0, 1, 2] or prefix != _brute_vplus(3, 3):
        bad.append("k=3 prefix")
    return not bad, "all sectors, weights <= 12, k = 2, 3, 5" if not bad else f"{bad}"


def crit_lemma5():
    recs = lemma5_suite(3, 5)
    failing = [r["id"] for r in recs if r["status"] != "pass"]
    return not failing, f"{len(recs)} basis vectors of weight <= 5" if not failing else f"{failing}"


CRITERIA = [
    ("1 table of lowest weights", crit_table1, 10),
    ("2 proof identities", crit_identities, 30),
    ("3 commutator formula", crit_commutators, 60),
    ("4 Virasoro relations", crit_virasoro, None),
    ("5 L(-1)-derivative", crit_derivative, None),
    ("6 Zhu algebra checks", crit_zhu, 300),
    ("7 prime-k weight lemma", crit_lemma4, 1),
    ("8 decomposition engine", crit_decomposition, 60),
    ("9 character cross-check", crit_character, None),
    ("10 pole order of Y(E, z)", crit_lemma5, 30),
]


@pytest.mark.parametrize("label,fn,budget", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(label, fn, budget, capsys):
    ok, detail, elapsed = _timed(fn)
    with capsys.disabled():
        print()
        passed = _report(label, ok, elapsed, budget, detail)
    assert passed, detail


if __name__ == "__main__":
    results = []
    for label, fn, budget in CRITERIA:
        ok, detail, elapsed = _timed(fn)
        results.append(_report(label, ok, elapsed, budget, detail))
    sys.exit(0 if all(results) else 1)
