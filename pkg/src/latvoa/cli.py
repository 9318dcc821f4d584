"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a mathematical check fails (the
report carries witnesses), 2 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import fock, modes, orbifold, suites
from .fock import Sector, State
from .linalg import format_rational, parse_rational
from .modules import catalogue_names

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        out = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    else:
        out = text.rstrip("\n") + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


def _need_k(k: int, minimum: int) -> None:
    if k < minimum:
        raise UsageError(f"--k must be at least {minimum}, got {k}")


# -- subcommands ----------------------------------------------------------------------

def cmd_table1(args) -> int:
    _need_k(args.k, 1)
    tbl = orbifold.table1(args.k)
    lines = [f"lowest weights of irreducible V_L^+-modules, k = {args.k}"]
    for v in tbl.values:
        lines.append(f"  {format_rational(v):>6}  {', '.join(tbl.realizers(v))}")
    _emit(args, tbl.to_json(), "\n".join(lines))
    return EXIT_OK


def _report_text(rep: dict) -> str:
    lines = [f"suite {rep['suite']} (k = {rep['k']}): {rep['status'].upper()}"]
    for r in rep["records"]:
        lines.append(f"  [{r['status']}] {r['id']}")
        if "witness" in r:
            lines.append(f"      witness: {json.dumps(r['witness'], sort_keys=True)[:400]}")
    return "\n".join(lines)


def cmd_verify(args) -> int:
    _need_k(args.k, 1)
    if args.suite not in suites.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(suites.SUITES)}")
    max_weight = args.max_weight
    if max_weight is None:
        max_weight = {"zhu": 4, "lemma5": 5}.get(args.suite, 6)
    samples = args.samples
    if samples is None:
        samples = 100 if args.suite == "derivative" else 200
    rep = suites.run_suite(args.suite, args.k, max_weight, samples, args.seed)
    _emit(args, rep, _report_text(rep))
    return EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


def cmd_weights(args) -> int:
    _need_k(args.k, 2)
    rep = orbifold.lemma4_check(args.k)
    payload = {"k": args.k, "prime": orbifold.is_prime(args.k), "lemma": rep.to_json()}
    lines = [f"k = {args.k}: {'prime' if payload['prime'] else 'composite'}",
             f"  distinct lowest weights: {rep.distinct}"]
    if rep.collisions:
        lines.append("  collisions: " + ", ".join(f"{a} = {b}" for a, b in rep.collisions))
    failing = [lam for lam, ok in rep.gap_condition.items() if not ok]
    lines.append("  gap failures (lam + n in P): "
                 + (", ".join(f"{format_rational(l)} (+{format_rational(rep.gap_witnesses[l] - l)})"
                              for l in failing) or "none"))
    lines.append(f"  all nonzero gaps hold: {rep.all_nonzero_gaps}")
    ok = rep.distinct and rep.all_nonzero_gaps
    if not payload["prime"]:
        r, s, n = orbifold.composite_counterexample(args.k)
        payload["counterexample"] = {"r": r, "s": s, "n": n,
                                     "difference": format_rational(Fraction(s * s - r * r, 4 * args.k))}
        lines.append(f"  counterexample (r, s, n) = ({r}, {s}, {n}): s^2/4k - r^2/4k = {n}")
    payload["status"] = "pass" if ok else "fail"
    _emit(args, payload, "\n".join(lines))
    # composite k is expected to break the lemma; reporting it is not a failure
    return EXIT_OK if ok or not payload["prime"] else EXIT_FAIL


def load_sum_spec(path: str, k: int):
    """Parse a direct-sum description; returns ([(name, mult)], jordan or None)."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read module description {path!r}: {exc}") from exc
    if not isinstance(data, list) or not data:
        raise UsageError("module description must be a non-empty JSON list")
    names = catalogue_names(k)
    spec, jordan = [], None
    for entry in data:
        if not isinstance(entry, dict):
            raise UsageError(f"malformed entry {entry!r}")
        if "jordan" in entry:
            j = entry["jordan"]
            try:
                deg = int(j["degree"])
                lam = parse_rational(str(j["lambda"]))
            except (KeyError, TypeError, ValueError) as exc:
                raise UsageError(f"malformed jordan entry {j!r}") from exc
            if jordan is not None or deg < 0:
                raise UsageError("at most one jordan entry with a non-negative degree")
            jordan = (deg, lam)
            continue
        name, mult = entry.get("module"), entry.get("mult", 1)
        if name not in names:
            raise UsageError(f"unknown module {name!r} for k = {k}; choose from {', '.join(names)}")
        if not isinstance(mult, int) or mult < 1:
            raise UsageError(f"multiplicity must be a positive integer, got {mult!r}")
        spec.append((name, mult))
    if not spec and jordan is None:
        raise UsageError("module description has no summands")
    return spec, jordan


def cmd_decompose(args) -> int:
    _need_k(args.k, 1)
    if args.max_degree < 0:
        raise UsageError("--max-degree must be non-negative")
    spec, jordan = load_sum_spec(args.input, args.k)
    M = suites.build_sum(args.k, spec, args.max_degree, jordan)
    candidates = orbifold.table1(args.k).values
    if jordan is not None and jordan[1] not in candidates:
        candidates = sorted(candidates + [jordan[1]])
    dec = orbifold.decompose(M, candidates, check_stability=not args.no_stability)
    payload = dec.to_json()
    payload.update({"k": args.k, "max_degree": args.max_degree,
                    "summands": [{"module": n, "mult": m} for n, m in spec]})
    if jordan is not None:
        payload["jordan"] = {"degree": jordan[0], "lambda": format_rational(jordan[1])}
    ok = dec.complete and dec.stability.get("status", "pass") == "pass"
    payload["status"] = "pass" if ok else "fail"
    lines = [f"decomposition of {' + '.join(f'{m}x{n}' for n, m in spec)} (k = {args.k}, T = {dec.T})"]
    for lam, dims in payload["families"].items():
        lines.append(f"  family {lam}: " + ", ".join(f"deg {d}: {n}" for d, n in dims.items()))
    lines.append(f"  residual: {payload['residual'] or 'none'}")
    if dec.stability:
        lines.append(f"  stability: {dec.stability['status']} ({dec.stability['checked']} checks)")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _parse_sector(text: str, k: int) -> Sector:
    if text in ("T1", "T2"):
        return Sector.twisted(k, int(text[1]))
    aliases = {"plus": 0, "minus": 0, "Vplus": 0, "Vminus": 0}
    try:
        c = aliases[text] if text in aliases else int(text)
    except ValueError as exc:
        raise UsageError(f"sector must be a coset 0..{2 * k - 1}, T1 or T2; got {text!r}") from exc
    if not 0 <= c < 2 * k:
        raise UsageError(f"coset must lie in 0..{2 * k - 1}")
    return Sector.untwisted(k, c)


def cmd_character(args) -> int:
    _need_k(args.k, 1)
    sector = _parse_sector(args.sector, args.k)
    sign = {"+": 1, "plus": 1, "-": -1, "minus": -1, "none": None}[args.theta]
    if args.sector in ("plus", "Vplus"):
        sign = 1
    elif args.sector in ("minus", "Vminus"):
        sign = -1
    if sign is not None and not sector.self_dual:
        raise UsageError(f"theta does not preserve {sector.name}; use --theta none")
    max_weight = 6 if args.max_weight is None else args.max_weight
    rep = suites.character_report(args.k, sector, sign, max_weight)
    label = {1: "+", -1: "-", None: ""}[sign]
    lines = [f"graded dimensions of {sector.name}{label} (k = {args.k}): {rep['status'].upper()}"]
    for row in rep["rows"]:
        flag = "" if row["direct"] == row["formula"] else "   MISMATCH"
        lines.append(f"  wt {row['weight']:>6}: {row['direct']}{flag}")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK if rep["status"] == "pass" else EXIT_FAIL


NAMED_STATES = {
    "vacuum": lambda k: fock.vacuum(k),
    "omega": lambda k: fock.conformal_vector(k),
    "alpha": lambda k: fock.lattice_state(k, (1,), 0),
    "E": lambda k: fock.E_vector(k),
    "F": lambda k: fock.F_vector(k),
    "twisted": lambda k: fock.twisted_state(k, 1),
}


def _load_state(text: str, k: int) -> State:
    if text in NAMED_STATES:
        return NAMED_STATES[text](k)
    try:
        if text.lstrip().startswith("{"):
            obj = json.loads(text)
        else:
            with open(text, encoding="utf-8") as fh:
                obj = json.load(fh)
        return State.from_json(obj, k)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot load state {text!r}: {exc}") from exc


def cmd_mode(args) -> int:
    _need_k(args.k, 1)
    s = _load_state(args.state, args.k)
    op = args.op
    if op in ("alpha", "L", "Y") and args.n is None:
        raise UsageError(f"--op {op} needs --n")
    try:
        if op == "alpha":
            out = modes.apply_alpha(args.n, s)
        elif op == "L":
            out = modes.virasoro(args.n, s)
        elif op == "Y":
            if args.element is None:
                raise UsageError("--op Y needs --element")
            out = modes.apply_mode(_load_state(args.element, args.k), args.n, s)
        elif op == "theta":
            out = fock.theta(s)
        elif op == "plus":
            out = fock.project_pm(s, 1)
        elif op == "minus":
            out = fock.project_pm(s, -1)
        else:
            raise UsageError(f"unknown operator {op!r}")
    except (ValueError, NotImplementedError) as exc:
        raise UsageError(str(exc)) from exc
    payload = out.to_json()
    _emit(args, payload, json.dumps(payload, sort_keys=True))
    return EXIT_OK


# -- parser -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--k", type=int, default=3, help="lattice parameter, <alpha, alpha> = 2k")
    common.add_argument("--max-weight", type=_rational_arg, default=None, help="weight cap (exact rational)")
    common.add_argument("--samples", type=int, default=None, help="number of random samples")
    common.add_argument("--seed", type=int, default=42, help="seed for all sampling")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    p = argparse.ArgumentParser(prog="latvoa", description="Exact computations in V_L and V_L^+.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("table1", parents=[common], help="lowest weights of irreducible V_L^+-modules")
    sp.set_defaults(func=cmd_table1)
    sp = sub.add_parser("verify", parents=[common], help="run a verification suite")
    sp.add_argument("--suite", required=True, help="one of: " + ", ".join(suites.SUITES))
    sp.set_defaults(func=cmd_verify)
    sp = sub.add_parser("weights", parents=[common], help="distinctness and gap check of lowest weights")
    sp.set_defaults(func=cmd_weights)
    sp = sub.add_parser("decompose", parents=[common], help="decompose a direct sum of catalogue modules")
    sp.add_argument("input", help="JSON list of {module, mult} and optional {jordan: {degree, lambda}}")
    sp.add_argument("--max-degree", type=int, default=6)
    sp.add_argument("--no-stability", action="store_true", help="skip the mode-stability check")
    sp.set_defaults(func=cmd_decompose)
    sp = sub.add_parser("character", parents=[common], help="graded dimensions, two independent counts")
    sp.add_argument("--sector", default="plus", help="plus, minus, a coset 0..2k-1, T1 or T2")
    sp.add_argument("--theta", choices=("+", "-", "plus", "minus", "none"), default="none")
    sp.set_defaults(func=cmd_character)
    sp = sub.add_parser("mode", parents=[common], help="apply one operator to a serialized state")
    sp.add_argument("--op", required=True, choices=("alpha", "L", "Y", "theta", "plus", "minus"))
    sp.add_argument("--n", type=int, default=None)
    sp.add_argument("--state", required=True, help="named state, JSON literal or file")
    sp.add_argument("--element", default=None, help="vertex operator argument for --op Y")
    sp.set_defaults(func=cmd_mode)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"latvoa {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
