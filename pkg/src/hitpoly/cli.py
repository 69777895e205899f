"""Command-line frontend.

Subcommands: hit-check, hit-dim, table, info.  Exit codes: 0 success or
hit, 1 not hit, 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .arith import alpha, mu
from .engine import (
    DEFAULT_MEMORY_CAP,
    DEFAULT_TASK_THRESHOLD,
    decide_hit,
    dimension_report,
    kameko_reduces,
    nonuniqueness_witness,
    wood_vanishes,
)
from .errors import InputError, ParseError, ResourceLimitError
from .parsing import format_mono, format_poly, parse_poly
from .poly import PolyF2, weight_vector

EXIT_OK = 0
EXIT_NOT_HIT = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--vars", "-k", type=int, required=True, metavar="K",
                     help="number of variables (x1..xK)")
    sub.add_argument("--json", action="store_true", help="emit JSON instead of text")
    sub.add_argument("--threads", type=int, default=None, metavar="N",
                     help="worker processes for generator evaluation "
                          "(default: all cores)")
    sub.add_argument("--task-threshold", type=int, default=DEFAULT_TASK_THRESHOLD,
                     metavar="M",
                     help="run serially below this many tasks "
                          f"(default {DEFAULT_TASK_THRESHOLD})")
    sub.add_argument("--max-memory-gb", type=float,
                     default=DEFAULT_MEMORY_CAP / 2**30, metavar="G",
                     help="fail fast if a computation projects beyond this "
                          "much memory (default 2.0)")


def _knobs(args) -> dict:
    return {
        "threads": args.threads,
        "task_threshold": args.task_threshold,
        "memory_cap_bytes": int(args.max_memory_gb * 2**30),
    }


def _groups_to_text(poly_text: str, groups) -> str:
    parts = [
        f"Sq^{1 << j}({format_poly(h)})" for j, h in sorted(groups.items())
    ]
    return f"{poly_text} = {' + '.join(parts)}"


def _groups_to_json(groups) -> list[dict]:
    return [
        {"j": j, "terms": [format_mono(m) for m in h.sorted_terms()]}
        for j, h in sorted(groups.items())
    ]


def _cmd_hit_check(args) -> int:
    f = parse_poly(args.poly, args.vars)
    result = decide_hit(f, args.vars, **_knobs(args))
    alternative = None
    if result.hit and args.alt:
        alternative = nonuniqueness_witness(f, args.vars, **_knobs(args))
    canonical = format_poly(f)
    if args.json:
        payload = {
            "hit": result.hit,
            "degree": result.degree,
            "decomposition": (
                _groups_to_json(result.decomposition) if result.hit else None
            ),
        }
        if args.alt:
            payload["alternative"] = (
                _groups_to_json(alternative) if alternative else None
            )
        print(json.dumps(payload, indent=2))
    else:
        if result.hit:
            print("hit")
            print(_groups_to_text(canonical, result.decomposition))
            if args.alt:
                if alternative:
                    print("alternative decomposition:")
                    print(_groups_to_text(canonical, alternative))
                else:
                    print("no alternative decomposition exists")
        else:
            print("not hit")
            print(f"{canonical} is not in the image of the positive Steenrod squares")
    return EXIT_OK if result.hit else EXIT_NOT_HIT


def _cmd_hit_dim(args) -> int:
    report = dimension_report(
        args.vars, args.degree, dump_matrix_path=args.dump_matrix, **_knobs(args)
    )
    if args.json:
        print(json.dumps(
            {
                "k": report["k"],
                "d": report["d"],
                "n_monomials": report["n_monomials"],
                "n_tasks": report["n_tasks"],
                "rank": report["rank"],
                "q_dim": report["q_dim"],
            },
            indent=2,
        ))
    else:
        print(f"k = {report['k']}, d = {report['d']}")
        print(f"monomials (N):      {report['n_monomials']}")
        print(f"generator tasks:    {report['n_tasks']}")
        print(f"nonzero columns:    {report['n_nonzero']}")
        print(f"hit space rank:     {report['rank']}")
        print(f"quotient dimension: {report['q_dim']}")
        if args.dump_matrix:
            print(f"matrix written to {args.dump_matrix}")
    return EXIT_OK


def _parse_degrees(spec: str) -> list[int]:
    spec = spec.strip()
    if ".." in spec:
        lo_text, hi_text = spec.split("..", 1)
        try:
            lo, hi = int(lo_text), int(hi_text)
        except ValueError:
            raise InputError(f"bad degree range {spec!r}; expected like 1..6")
        if lo > hi:
            raise InputError(f"empty degree range {spec!r}")
        return list(range(lo, hi + 1))
    try:
        degrees = [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise InputError(f"bad degree list {spec!r}; expected like 2,4,8")
    if not degrees:
        raise InputError("no degrees given")
    return degrees


def _cmd_table(args) -> int:
    degrees = _parse_degrees(args.degrees)
    rows = []
    any_failed = False
    for d in degrees:
        started = time.perf_counter()
        try:
            report = dimension_report(args.vars, d, **_knobs(args))
            rows.append({
                "d": d,
                "n_monomials": report["n_monomials"],
                "rank": report["rank"],
                "q_dim": report["q_dim"],
                "seconds": round(time.perf_counter() - started, 3),
            })
        except (InputError, ResourceLimitError) as exc:
            any_failed = True
            rows.append({"d": d, "error": str(exc)})
    if args.json:
        print(json.dumps({"k": args.vars, "rows": rows}, indent=2))
    else:
        print(f"k = {args.vars}")
        print(f"{'d':>6} {'N':>12} {'rank':>12} {'q_dim':>10} {'seconds':>9}")
        for row in rows:
            if "error" in row:
                print(f"{row['d']:>6} error: {row['error']}")
            else:
                print(
                    f"{row['d']:>6} {row['n_monomials']:>12} {row['rank']:>12} "
                    f"{row['q_dim']:>10} {row['seconds']:>9.3f}"
                )
    return EXIT_RESOURCE if any_failed else EXIT_OK


def _cmd_info(args) -> int:
    if (args.degree is None) == (args.poly is None):
        raise InputError("give exactly one of --degree or --poly")
    terms = None
    if args.poly is not None:
        f = parse_poly(args.poly, args.vars)
        if f.is_zero():
            raise InputError("the zero polynomial has no degree to analyze")
        d = f.degree
        terms = [
            {"monomial": format_mono(m), "weight_vector": list(weight_vector(m))}
            for m in f.sorted_terms()
        ]
    else:
        d = args.degree
        if d < 1:
            raise InputError(f"degree must be >= 1, got {d}")
    k = args.vars
    payload = {
        "k": k,
        "d": d,
        "alpha_d_plus_k": alpha(d + k),
        "mu": mu(d),
        "wood_vanishes": wood_vanishes(k, d),
        "kameko_target": kameko_reduces(k, d),
    }
    if terms is not None:
        payload["terms"] = terms
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(f"k = {k}, d = {d}")
        print(f"alpha(d + k) = alpha({d + k}) = {payload['alpha_d_plus_k']}")
        print(f"mu(d) = {payload['mu']}")
        verdict = "yes" if payload["wood_vanishes"] else "no"
        print(f"Wood vanishing (alpha(d+k) > k): {verdict}")
        if payload["kameko_target"] is not None:
            print(f"Kameko reduction target: {payload['kameko_target']}")
        else:
            print("Kameko reduction target: none (mu(d) != k)")
        if terms is not None:
            for t in terms:
                w = tuple(t["weight_vector"])
                print(f"  {t['monomial']}: weight vector {w}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hitpoly",
        description="Decide hit polynomials over F2 and compute hit/quotient "
                    "space dimensions by exact GF(2) linear algebra.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hit-check", help="decide whether a polynomial is hit")
    _add_common(p)
    p.add_argument("--poly", required=True, metavar="EXPR",
                   help="polynomial, e.g. 'x1^2*x2 + x2^3'")
    p.add_argument("--alt", action="store_true",
                   help="also print a second decomposition when one exists")
    p.set_defaults(func=_cmd_hit_check)

    p = sub.add_parser("hit-dim", help="dimension of the hit space at a degree")
    _add_common(p)
    p.add_argument("--degree", "-d", type=int, required=True, metavar="D")
    p.add_argument("--dump-matrix", metavar="PATH",
                   help="write the assembled matrix in SMS triple format")
    p.set_defaults(func=_cmd_hit_dim)

    p = sub.add_parser("table", help="hit/quotient dimensions for many degrees")
    _add_common(p)
    p.add_argument("--degrees", required=True, metavar="LIST|RANGE",
                   help="comma list '2,4,8' or range '1..6'")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("info", help="arithmetic diagnostics for a degree or polynomial")
    _add_common(p)
    p.add_argument("--degree", "-d", type=int, default=None, metavar="D")
    p.add_argument("--poly", default=None, metavar="EXPR")
    p.set_defaults(func=_cmd_info)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        source = getattr(args, "poly", None)
        if source:
            print(f"    {source}", file=sys.stderr)
            print(f"    {' ' * exc.position}^", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
