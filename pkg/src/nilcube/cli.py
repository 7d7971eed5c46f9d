"""Command-line interface.

Commands: zero-test, dim, nildeg, functional-check, amitsur,
trace-decompose, report, verify.  All outputs are UTF-8 JSON with a
schema_version field.  Exit codes: 0 decided/ok, 1 usage or parse
error, 2 undecided within budget, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import cache
from .lincomb import LinComb
from .linalg import certificate_from_json, verify_certificate
from .oracle import (
    DEFAULT_SOLVE_BUDGET,
    FUNCTIONAL_NAMES,
    component_dimension,
    functional_applicable,
    nilpotency_degree,
    verify_functional,
    zero_test,
)
from .words import DEFAULT_COLUMN_BUDGET, parse_word


def _emit(payload: dict, path: str | None) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    sys.stdout.write(text + "\n")


def _prime_or_zero(text: str) -> int:
    p = int(text)
    if p < 0 or p == 1:
        raise argparse.ArgumentTypeError("characteristic must be 0 or a prime")
    return p


def _mdeg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad multidegree {text!r}") from exc


def _read_expression(args, p: int) -> LinComb:
    if args.expr is not None:
        return LinComb.parse(args.expr, p)
    with open(args.file, "r", encoding="utf-8") as fh:
        data = fh.read().strip()
    if data.startswith("["):
        return LinComb.from_json(json.loads(data), p)
    return LinComb.parse(data, p)


def cmd_zero_test(args) -> int:
    try:
        target = _read_expression(args, args.char)
    except ValueError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 1
    request = {
        "cmd": "zero-test",
        "char": args.char,
        "letters": args.letters,
        "target": target.to_json(),
        "budget_cols": args.budget_cols,
        "solve_budget": args.solve_cols,
    }
    cached = cache.get(request)
    if cached is not None and _cached_decision_valid(cached):
        _emit(cached, args.json)
        return 0 if cached["status"] == "decided" else 2
    dec = zero_test(target, d=args.letters, solve_budget=args.solve_cols,
                    column_budget=args.budget_cols)
    payload = dec.to_json()
    if dec.certificate is not None:
        cert_path = cache.write_blob(
            cache.request_key(request), payload["certificate"])
        payload["certificate_path"] = str(cert_path)
    cache.put(request, payload)
    _emit(payload, args.json)
    return 0 if dec.status == "decided" else 2


def _cached_decision_valid(payload: dict) -> bool:
    cert = payload.get("certificate")
    if cert is None:
        return payload.get("status") == "undecided"
    try:
        parsed = certificate_from_json(cert)
        target = LinComb.from_json(payload["target"],
                                   int(payload["system"]["char"]))
        return verify_certificate(payload["system"], target, parsed)
    except (KeyError, ValueError):
        return False


def cmd_dim(args) -> int:
    request = {"cmd": "dim", "char": args.char, "mdeg": list(args.mdeg),
               "n": args.nil, "solve_budget": args.solve_cols}
    cached = cache.get(request)
    if cached is not None:
        _emit(cached, args.json)
        return 0
    dim = component_dimension(args.mdeg, args.char, args.nil,
                              solve_budget=args.solve_cols,
                              column_budget=args.budget_cols)
    payload = {
        "schema_version": 1,
        "char": args.char,
        "mdeg": list(args.mdeg),
        "n": args.nil,
        "dimension": dim,
    }
    cache.put(request, payload)
    _emit(payload, args.json)
    return 0


def cmd_nildeg(args) -> int:
    request = {"cmd": "nildeg", "char": args.char, "letters": args.letters,
               "n": args.nil, "solve_budget": args.solve_cols}
    cached = cache.get(request)
    if cached is not None:
        _emit(cached, args.json)
        return 0 if cached.get("nilpotency_degree") is not None else 2
    report = nilpotency_degree(args.letters, args.char, args.nil,
                               solve_budget=args.solve_cols,
                               column_budget=args.budget_cols)
    payload = report.to_json()
    payload["witnesses"] = _nildeg_witnesses(report, args)
    cache.put(request, payload)
    _emit(payload, args.json)
    return 0 if report.value is not None else 2


def _nildeg_witnesses(report, args) -> list[dict]:
    """Certificate files for the longest certified-nonzero components."""
    from .oracle import component_nonzero_witness_word

    out = []
    best = report.lower - 1
    for comp in report.components:
        if comp.zero is not False or sum(comp.mdeg) != best:
            continue
        if comp.route != "solve":
            out.append({"mdeg": list(comp.mdeg), "route": comp.route})
            continue
        word = component_nonzero_witness_word(
            comp.mdeg, args.char, args.nil, args.solve_cols)
        if word is None:
            continue
        dec = zero_test(LinComb.single(word, args.char), n=args.nil,
                        solve_budget=args.solve_cols,
                        column_budget=args.budget_cols)
        name = cache.request_key({
            "cmd": "nildeg-witness", "char": args.char, "n": args.nil,
            "mdeg": list(comp.mdeg), "word": list(word)})
        path = cache.write_blob(name, dec.to_json()["certificate"])
        out.append({"mdeg": list(comp.mdeg), "route": comp.route,
                    "word": list(word), "certificate_path": str(path)})
    return out


def cmd_functional_check(args) -> int:
    if args.name not in FUNCTIONAL_NAMES:
        sys.stderr.write(f"unknown functional {args.name!r}; "
                         f"choose from {', '.join(FUNCTIONAL_NAMES)}\n")
        return 1
    if not functional_applicable(args.name, args.mdeg, args.char):
        sys.stderr.write(
            f"functional {args.name!r} does not apply to "
            f"mdeg={list(args.mdeg)} char={args.char}\n")
        return 1
    ok = verify_functional(args.name, args.mdeg, args.char,
                           budget=args.budget_cols)
    payload = {
        "schema_version": 1,
        "functional": args.name,
        "mdeg": list(args.mdeg),
        "char": args.char,
        "annihilates_system": ok,
    }
    _emit(payload, args.json)
    return 0 if ok else 3


def cmd_amitsur(args) -> int:
    from .sigma import amitsur_expand, random_matrix, sigma_eval
    from .sigma import char_poly_coeffs, mat_add, mat_mul

    try:
        summands = [parse_word(w.strip())
                    for w in args.summands.split(";") if w.strip()]
    except ValueError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 1
    if not summands:
        sys.stderr.write("need at least one summand word\n")
        return 1
    poly = amitsur_expand(args.k, summands)
    payload = {
        "schema_version": 1,
        "k": args.k,
        "summands": [w.strip() for w in args.summands.split(";") if w.strip()],
        "terms": poly.to_json(),
    }
    if args.check_n:
        rng = random.Random(args.seed)
        n = args.check_n
        agree = True
        letters = sorted({a for w in summands for a in w})
        for _ in range(args.trials):
            mats = {i: random_matrix(n, rng) for i in letters}
            weights = [rng.randint(-3, 3) for _ in summands]
            lhs = sigma_eval(poly, mats, weights)
            total = [[0] * n for _ in range(n)]
            for word, wgt in zip(summands, weights):
                prod = None
                for letter in word:
                    m = mats[letter]
                    prod = m if prod is None else mat_mul(prod, m)
                total = mat_add(total, prod, 1, wgt)
            rhs = char_poly_coeffs(total)[args.k - 1]
            if lhs != rhs:
                agree = False
                break
        payload["numeric_check"] = {
            "matrix_size": n,
            "trials": args.trials,
            "seed": args.seed,
            "agrees": agree,
        }
        if not agree:
            _emit(payload, args.json)
            return 3
    _emit(payload, args.json)
    return 0


def cmd_trace_decompose(args) -> int:
    from .decomp import trace_decomposable_p3

    try:
        combo = LinComb.parse(args.expr, args.char)
    except ValueError as exc:
        sys.stderr.write(f"parse error: {exc}\n")
        return 1
    if args.char != 3:
        sys.stderr.write("the complete trace criterion requires --char 3\n")
        return 1
    terms = [(c, w) for w, c in sorted(combo.terms.items())]
    dec = trace_decomposable_p3(terms, 3, args.solve_cols)
    payload = {"schema_version": 1, **dec.to_json()}
    _emit(payload, args.json)
    if dec.decomposable is None:
        return 2
    return 0


def cmd_report(args) -> int:
    if args.theorem == 1:
        lo, hi = args.letters_range
        request = {"cmd": "report1", "char": args.char,
                   "letters": [lo, hi], "solve_budget": args.solve_cols}
        cached = cache.get(request)
        if cached is not None:
            _emit(cached, args.json)
            return 0
        rows = []
        for d in range(lo, hi + 1):
            rep = nilpotency_degree(d, args.char,
                                    solve_budget=args.solve_cols,
                                    column_budget=args.budget_cols)
            rows.append({
                "letters": d,
                "computed": rep.value,
                "computed_range": [rep.lower, rep.upper],
                "expected": _expected_nildeg(d, args.char),
                "components": [c.to_json() for c in rep.components],
                "evidence": rep.evidence,
            })
        payload = {"schema_version": 1, "report": "nilpotency-degree",
                   "char": args.char, "rows": rows}
        cache.put(request, payload)
        _emit(payload, args.json)
        return 0
    from .decomp import generator_bound_report

    lo, hi = args.letters_range
    request = {"cmd": "report2", "char": args.char,
               "letters": [lo, hi], "solve_budget": args.solve_cols}
    cached = cache.get(request)
    if cached is not None:
        _emit(cached, args.json)
        return 0
    rows = [generator_bound_report(d, args.char, args.solve_cols).to_json()
            for d in range(lo, hi + 1)]
    payload = {"schema_version": 1, "report": "generator-degree-bound",
               "char": args.char, "rows": rows}
    cache.put(request, payload)
    _emit(payload, args.json)
    return 0


def _expected_nildeg(d: int, p: int):
    if d == 1:
        return 3
    if p == 0 or p > 3:
        return 6
    if p == 2:
        return d + 3 if d >= 3 else 6
    if d % 2 == 0:
        return 3 * d + 1
    return [3 * d, 3 * d + 1]


def cmd_verify(args) -> int:
    try:
        with open(args.certificate, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        cert = certificate_from_json(data)
        target = LinComb.from_json(data["target"],
                                   int(data["system"]["char"]))
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"malformed certificate: {exc}\n")
        return 1
    ok = verify_certificate(data["system"], target, cert,
                            budget=args.budget_cols)
    payload = {
        "schema_version": 1,
        "certificate": args.certificate,
        "kind": data.get("kind"),
        "verified": bool(ok),
    }
    _emit(payload, args.json)
    return 0 if ok else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilcube",
        description=("certified computations in the nil algebra with "
                     "x^3 = 0 and for 3x3 matrix invariants"))
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, char=True):
        if char:
            p.add_argument("--char", type=_prime_or_zero, required=True,
                           help="field characteristic: 0 or a prime")
        p.add_argument("--budget-cols", type=int,
                       default=DEFAULT_COLUMN_BUDGET,
                       help="hard cap on words per component")
        p.add_argument("--solve-cols", type=int, default=DEFAULT_SOLVE_BUDGET,
                       help="largest component solved by elimination")
        p.add_argument("--json", metavar="PATH",
                       help="also write the JSON output to PATH")

    p = sub.add_parser("zero-test", help="decide zero-ness in the quotient")
    common(p)
    p.add_argument("--letters", type=int, default=None,
                   help="alphabet size (default: largest letter used)")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--expr", help="combination, e.g. 'x1^2 x2 - 2 * x2 x1^2'")
    g.add_argument("--file", help="file with a combination or LinComb JSON")
    p.set_defaults(func=cmd_zero_test)

    p = sub.add_parser("dim", help="dimension of one component")
    common(p)
    p.add_argument("--mdeg", type=_mdeg, required=True,
                   help="multidegree, e.g. 3,3,1")
    p.add_argument("--nil", type=int, default=3, choices=(2, 3),
                   help="nil exponent (2 only as a cross-check)")
    p.set_defaults(func=cmd_dim)

    p = sub.add_parser("nildeg", help="nilpotency degree for d letters")
    common(p)
    p.add_argument("--letters", type=int, required=True)
    p.add_argument("--nil", type=int, default=3, choices=(2, 3))
    p.set_defaults(func=cmd_nildeg)

    p = sub.add_parser("functional-check",
                       help="verify a known solution functional")
    common(p)
    p.add_argument("--name", required=True,
                   help=f"one of: {', '.join(FUNCTIONAL_NAMES)}")
    p.add_argument("--mdeg", type=_mdeg, required=True)
    p.set_defaults(func=cmd_functional_check)

    p = sub.add_parser("amitsur",
                       help="expand a char-poly coefficient of a sum")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--summands", required=True,
                   help="semicolon-separated words, e.g. 'x1; x2 x3'")
    p.add_argument("--check-n", type=int, default=0,
                   help="validate on random n x n integer matrices")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_amitsur)

    p = sub.add_parser("trace-decompose",
                       help="complete trace decomposability test (char 3)")
    common(p)
    p.add_argument("--expr", required=True,
                   help="trace combination by words, e.g. 'x1^2 x2^2 x1 x2'")
    p.set_defaults(func=cmd_trace_decompose)

    p = sub.add_parser("report", help="reproduce a published value table")
    common(p)
    p.add_argument("--theorem", type=int, choices=(1, 2), required=True,
                   help="1 = nilpotency degrees, 2 = generator degree bounds")
    p.add_argument("--letters-range", type=_mdeg, default=(2, 2),
                   help="inclusive range lo,hi of alphabet sizes")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("verify", help="replay a certificate file")
    p.add_argument("certificate")
    p.add_argument("--budget-cols", type=int, default=DEFAULT_COLUMN_BUDGET)
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
