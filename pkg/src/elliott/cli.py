"""Command line entry point.

    elliott invariant SPEC
    elliott compare SPEC_A SPEC_B [--search-bound B]
    elliott family P1 P2 ...
    elliott rouhani --depth K
    elliott --paper-examples

Every command prints a human report, or with ``--json`` a single JSON
document carrying ``schema_version``.  Exit codes: 0 ok, 2 input error,
3 unsupported spec, 4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import combinations

from .classify import (
    DEFAULT_SEARCH_BOUND,
    CompareKind,
    ConjugacyKind,
    compare_transformations,
    family_from_primes,
    torus3,
)
from .crossed import crossed_ktheory, elliott, trace_functional
from .ktheory import SphereTimesCircle, UnsupportedSpecError
from .report import (
    comparison_doc,
    envelope,
    group_doc,
    invariant_doc,
    render_comparison,
    render_family,
    render_invariant,
    render_paper_examples,
    render_rouhani,
    rouhani_doc,
)
from .rouhani import MAX_DEPTH, rouhani_parameters, theta_symbol
from .specfile import SpecError, load_spec, spec_to_doc

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4


class InputError(Exception):
    pass


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


# --- commands ---------------------------------------------------------------


def cmd_invariant(path: str) -> dict:
    spec = load_spec(path)
    ck = crossed_ktheory(spec)
    inv = trace_functional(ck, spec)
    return envelope("invariant", invariant=invariant_doc(spec, inv, ck))


def cmd_compare(path_a: str, path_b: str, bound: int) -> dict:
    s1, s2 = load_spec(path_a), load_spec(path_b)
    cmp = compare_transformations(s1, s2, bound)
    return envelope("compare", specs=[spec_to_doc(s1), spec_to_doc(s2)], comparison=comparison_doc(cmp))


def _pair_ok(cmp) -> bool:
    return (
        cmp.elliott.kind is CompareKind.ISOMORPHIC
        and cmp.flip is not None
        and cmp.flip.kind is ConjugacyKind.DISTINCT
    )


def cmd_family(primes: list[int], bound: int) -> dict:
    try:
        pairs = family_from_primes(primes)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    theta = theta_symbol(3)
    specs = [torus3(m, n, theta) for m, n in pairs]
    invs = [elliott(s) for s in specs]
    size = len(specs)
    matrix = [["-"] * size for _ in range(size)]
    results = []
    for i, j in combinations(range(size), 2):
        cmp = compare_transformations(specs[i], specs[j], bound, invs[i], invs[j])
        cell = f"{cmp.elliott.kind.value} / {cmp.flip.kind.value if cmp.flip else 'N/A'}"
        matrix[i][j] = matrix[j][i] = cell
        results.append({
            "i": i,
            "j": j,
            "elliott": cmp.elliott.kind.value,
            "flip": cmp.flip.kind.value if cmp.flip else None,
            "summary": cmp.summary(),
            "ok": _pair_ok(cmp),
        })
    members = [
        {"m": m, "n": n, "k0": str(inv.k0), "k1": str(inv.k1), "k0_group": group_doc(inv.k0)}
        for (m, n), inv in zip(pairs, invs)
    ]
    return envelope(
        "family",
        primes=[int(p) for p in primes],
        members=members,
        pairs=results,
        matrix=matrix,
        all_ok=all(r["ok"] for r in results),
    )


def cmd_rouhani(depth: int) -> dict:
    if not 1 <= depth <= MAX_DEPTH:
        raise InputError(f"--depth must be between 1 and {MAX_DEPTH}, got {depth}")
    return envelope("rouhani", **rouhani_doc(rouhani_parameters(depth)))


def _check(name: str, expected: str, observed: str, ok: bool) -> dict:
    return {"name": name, "expected": expected, "observed": observed, "pass": bool(ok)}


def cmd_paper_examples(bound: int) -> dict:
    checks = []
    theta = theta_symbol(3)

    rh = rouhani_doc(rouhani_parameters(3))
    tails_ok = all(s["tail_below_tolerance"] and s["monotone"] for s in rh["derivative_series"])
    checks.append(_check(
        "Rouhani parameters (K=3)",
        "nu = (1, 4, 21); theta_3 = 1179649/2097152; beta bound holds; tails < 1e-6 at n = 60",
        f"nu = {tuple(rh['nu'])}; theta_3 = {rh['theta_partial']['exact']}; "
        f"beta bound {'holds' if rh['beta_bound_ok'] else 'fails'}; tails ok = {tails_ok}",
        rh["nu"] == [1, 4, 21] and rh["theta_partial"]["exact"] == "1179649/2097152"
        and rh["beta_bound_ok"] and tails_ok,
    ))

    cmp = compare_transformations(torus3(2, 3, theta), torus3(3, 2, theta), bound)
    expected = "Elliott: ISOMORPHIC; Flip-conjugacy: DISTINCT (ladder 2 vs 3)"
    checks.append(_check("Ex2a: T^3 (2,3) vs (3,2)", expected, cmp.summary(), cmp.summary() == expected))

    fam = cmd_family([2, 3, 5], bound)
    tors = {m["k0"] for m in fam["members"]}
    checks.append(_check(
        "Ex2b: primes 2 3 5",
        "6 pairs ISOMORPHIC / DISTINCT; every K0 = Z^4 + Z/30",
        f"{sum(p['ok'] for p in fam['pairs'])}/{len(fam['pairs'])} pairs ok; K0 in {sorted(tors)}",
        fam["all_ok"] and len(fam["pairs"]) == 6 and tors == {"Z^4 + Z/30"},
    ))

    s1, s2 = torus3(1, 1, theta), SphereTimesCircle(2, theta)
    i1, i2 = elliott(s1), elliott(s2)
    cmp = compare_transformations(s1, s2, bound, i1, i2)
    rows = [str(t) for t in i1.free_trace], [str(t) for t in i2.free_trace]
    checks.append(_check(
        "Ex3: T^3 (1,1) vs S^2 x S^1",
        "ISOMORPHIC; K0 = K1 = Z^4; traces (1, 0, theta, 0)",
        f"{cmp.elliott.kind.value}; K0 {i1.k0} / {i2.k0}; K1 {i1.k1} / {i2.k1}; traces {rows[0]} / {rows[1]}",
        cmp.elliott.kind is CompareKind.ISOMORPHIC
        and {str(i1.k0), str(i1.k1), str(i2.k0), str(i2.k1)} == {"Z^4"}
        and rows[0] == rows[1] == ["1", "0", "theta", "0"],
    ))

    spheres = [SphereTimesCircle(d, theta) for d in (3, 5, 7)]
    verdicts = [
        compare_transformations(a, b, bound).elliott.kind.value for a, b in combinations(spheres, 2)
    ]
    checks.append(_check(
        "Ex4: S^n x S^1, n = 3, 5, 7",
        "all pairs ISOMORPHIC",
        ", ".join(verdicts),
        all(v == "ISOMORPHIC" for v in verdicts),
    ))
    return envelope("paper-examples", checks=checks, all_pass=all(c["pass"] for c in checks))


# --- argument handling ------------------------------------------------------


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--json", action="store_true", default=default or False,
                        help="emit one JSON document instead of text")
    parser.add_argument("--search-bound", type=int, metavar="B", default=default or DEFAULT_SEARCH_BOUND,
                        help=f"entry bound for the conjugator search (default {DEFAULT_SEARCH_BOUND})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="elliott",
        description="K-theoretic invariants of crossed products by minimal torus and sphere-circle maps.",
    )
    _common(parser, suppress=False)
    parser.add_argument("--paper-examples", action="store_true",
                        help="run the built-in example batch and report pass/fail")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("invariant", help="Elliott invariant of one spec file")
    p.add_argument("spec")
    _common(p, suppress=True)

    p = sub.add_parser("compare", help="compare two spec files")
    p.add_argument("spec_a")
    p.add_argument("spec_b")
    _common(p, suppress=True)

    p = sub.add_parser("family", help="pairwise comparisons for a family built from distinct primes")
    p.add_argument("primes", nargs="+", type=int)
    _common(p, suppress=True)

    p = sub.add_parser("rouhani", help="recurrence, theta partial sum and bounds for the smooth cocycle")
    p.add_argument("--depth", type=int, required=True, metavar="K")
    _common(p, suppress=True)
    return parser


def _run(args) -> tuple[dict, str, int]:
    bound = args.search_bound
    if bound < 0:
        raise InputError(f"--search-bound must be >= 0, got {bound}")
    if args.paper_examples:
        if args.command:
            raise InputError("--paper-examples takes no subcommand")
        doc = cmd_paper_examples(bound)
        return doc, render_paper_examples(doc), EXIT_OK if doc["all_pass"] else EXIT_INTERNAL
    if args.command == "invariant":
        doc = cmd_invariant(args.spec)
        return doc, render_invariant(doc), EXIT_OK
    if args.command == "compare":
        doc = cmd_compare(args.spec_a, args.spec_b, bound)
        return doc, render_comparison(doc), EXIT_OK
    if args.command == "family":
        doc = cmd_family(args.primes, bound)
        return doc, render_family(doc), EXIT_OK if doc["all_ok"] else EXIT_INTERNAL
    if args.command == "rouhani":
        doc = cmd_rouhani(args.depth)
        return doc, render_rouhani(doc), EXIT_OK
    raise InputError("a subcommand or --paper-examples is required")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2 already
        return int(exc.code or 0)
    try:
        doc, text, code = _run(args)
    except (SpecError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedSpecError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write((dumps(doc) if args.json else text) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
