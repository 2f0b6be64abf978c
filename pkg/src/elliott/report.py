"""Structured reports (one JSON document per CLI invocation) and their text rendering."""

from __future__ import annotations

from fractions import Fraction

from .classify import (
    CompareKind,
    ConjugacyKind,
    ConjugacyVerdict,
    TransformationComparison,
)
from .crossed import CrossedKTheory, ElliottInvariant, dense_range
from .ktheory import InducedMap, SpaceKTheory, TransformationSpec
from .rouhani import RouhaniParameters, dominating_sum_limit
from .specfile import fraction_str, spec_to_doc
from .zlinalg import FgAbGroup, IntMatrix

SCHEMA_VERSION = 1

_group = {
    "type": "object",
    "required": ["text", "rank", "invariant_factors"],
    "properties": {
        "text": {"type": "string"},
        "rank": {"type": "integer", "minimum": 0},
        "invariant_factors": {"type": "array", "items": {"type": "integer", "minimum": 2}},
    },
    "additionalProperties": False,
}
_matrix = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_trace = {
    "type": "object",
    "required": ["a", "b", "text"],
    "properties": {"a": {"type": "string"}, "b": {"type": "string"}, "text": {"type": "string"}},
    "additionalProperties": False,
}
_invariant = {
    "type": "object",
    "required": ["spec", "space", "k0", "k1", "generators", "unit", "dense_range", "positive_cone",
                 "extrapolated", "hstar", "notes"],
    "properties": {
        "spec": {"type": "object"},
        "space": {"type": "string"},
        "k0": _group,
        "k1": _group,
        "generators": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "kind", "order", "representative", "trace"],
                "properties": {
                    "name": {"type": "string"},
                    "kind": {"enum": ["coker", "kernel"]},
                    "order": {"type": "integer", "minimum": 0},
                    "representative": {"type": "array", "items": {"type": "integer"}},
                    "trace": _trace,
                },
                "additionalProperties": False,
            },
        },
        "k1_generators": {"type": "array", "items": {"type": "string"}},
        "unit": {"type": "array", "items": {"type": "integer"}},
        "dense_range": {"type": "boolean"},
        "positive_cone": {"type": "string"},
        "extrapolated": {"type": "boolean"},
        "hstar": {
            "type": "object",
            "required": ["k0_basis", "k1_basis", "on_k0", "on_k1"],
            "properties": {
                "k0_basis": {"type": "array", "items": {"type": "string"}},
                "k1_basis": {"type": "array", "items": {"type": "string"}},
                "on_k0": _matrix,
                "on_k1": _matrix,
            },
        },
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}
_elliott_verdict = {
    "type": "object",
    "required": ["verdict", "reason", "witness", "k1_witness"],
    "properties": {
        "verdict": {"enum": [k.value for k in CompareKind]},
        "reason": {"type": "string"},
        "witness": {"anyOf": [_matrix, {"type": "null"}]},
        "k1_witness": {"anyOf": [_matrix, {"type": "null"}]},
    },
}
_flip_verdict = {
    "anyOf": [
        {"type": "null"},
        {
            "type": "object",
            "required": ["verdict", "separations", "witness", "relation", "reason"],
            "properties": {
                "verdict": {"enum": [k.value for k in ConjugacyKind]},
                "separations": {"type": "array"},
                "witness": {"anyOf": [_matrix, {"type": "null"}]},
                "relation": {"anyOf": [{"type": "string"}, {"type": "null"}]},
                "reason": {"type": "string"},
            },
        },
    ]
}
_comparison = {
    "type": "object",
    "required": ["elliott", "flip", "summary", "headline", "notes"],
    "properties": {
        "elliott": _elliott_verdict,
        "flip": _flip_verdict,
        "summary": {"type": "string"},
        "headline": {"type": "string"},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema_version", "command"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["invariant", "compare", "family", "rouhani", "paper-examples"]},
    },
    "allOf": [
        {
            "if": {"properties": {"command": {"const": "invariant"}}},
            "then": {"required": ["invariant"], "properties": {"invariant": _invariant}},
        },
        {
            "if": {"properties": {"command": {"const": "compare"}}},
            "then": {
                "required": ["specs", "comparison"],
                "properties": {"specs": {"type": "array", "minItems": 2, "maxItems": 2},
                               "comparison": _comparison},
            },
        },
        {
            "if": {"properties": {"command": {"const": "family"}}},
            "then": {
                "required": ["primes", "members", "pairs", "matrix", "all_ok"],
                "properties": {
                    "primes": {"type": "array", "items": {"type": "integer"}},
                    "members": {"type": "array"},
                    "pairs": {"type": "array"},
                    "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                    "all_ok": {"type": "boolean"},
                },
            },
        },
        {
            "if": {"properties": {"command": {"const": "rouhani"}}},
            "then": {"required": ["depth", "nu", "n_exponents", "theta_partial", "beta_bound_ok",
                                  "beta_rows", "derivative_series"]},
        },
        {
            "if": {"properties": {"command": {"const": "paper-examples"}}},
            "then": {
                "required": ["checks", "all_pass"],
                "properties": {
                    "checks": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "expected", "observed", "pass"],
                            "properties": {"pass": {"type": "boolean"}},
                        },
                    },
                    "all_pass": {"type": "boolean"},
                },
            },
        },
    ],
}


def envelope(command: str, **payload) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command, **payload}


def group_doc(g: FgAbGroup) -> dict:
    return {"text": str(g), "rank": g.rank, "invariant_factors": list(g.invariant_factors)}


def matrix_doc(M: IntMatrix | None):
    return None if M is None else M.to_rows()


def _basis_label(label) -> str:
    if isinstance(label, tuple):
        return "{" + ",".join(str(i) for i in label) + "}"
    return str(label)


def invariant_doc(spec: TransformationSpec, inv: ElliottInvariant, ck: CrossedKTheory) -> dict:
    gens = []
    for g, t in zip(ck.k0_generators, inv.trace):
        gens.append({
            "name": g.name,
            "kind": g.kind,
            "order": g.order,
            "representative": list(g.vector),
            "trace": {"a": fraction_str(t.a), "b": fraction_str(t.b), "text": str(t)},
        })
    space: SpaceKTheory = ck.space
    hstar: InducedMap = ck.hstar
    return {
        "spec": spec_to_doc(spec),
        "space": inv.space_tag,
        "k0": group_doc(inv.k0),
        "k1": group_doc(inv.k1),
        "generators": gens,
        "k1_generators": [g.name for g in ck.k1_generators],
        "unit": list(inv.unit),
        "dense_range": dense_range(inv),
        "positive_cone": inv.cone_statement(),
        "extrapolated": inv.extrapolated,
        "hstar": {
            "k0_basis": [f"{n}={_basis_label(b)}" for n, b in zip(space.k0_names, space.k0_basis)],
            "k1_basis": [f"{n}={_basis_label(b)}" for n, b in zip(space.k1_names, space.k1_basis)],
            "on_k0": hstar.on_k0.to_rows(),
            "on_k1": hstar.on_k1.to_rows(),
        },
        "notes": list(inv.notes),
    }


def flip_doc(v: ConjugacyVerdict | None):
    if v is None:
        return None
    return {
        "verdict": v.kind.value,
        "separations": [
            {"invariant": s.invariant, "value": _jsonable(s.value), "other": _jsonable(s.other)}
            for s in v.separations
        ],
        "witness": matrix_doc(v.witness),
        "relation": v.relation,
        "reason": v.reason,
    }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(e) for e in x]
    return x


def comparison_doc(cmp: TransformationComparison) -> dict:
    e = cmp.elliott
    return {
        "elliott": {
            "verdict": e.kind.value,
            "reason": e.reason,
            "witness": matrix_doc(e.witness),
            "k1_witness": matrix_doc(e.k1_witness),
        },
        "flip": flip_doc(cmp.flip),
        "summary": cmp.summary(),
        "headline": cmp.headline,
        "notes": list(cmp.notes),
    }


def rouhani_doc(p: RouhaniParameters, check_at: int = 60, tol: Fraction = Fraction(1, 10**6)) -> dict:
    series = []
    for m, partials in enumerate(p.derivative_partials):
        N = min(check_at, len(partials))
        tail = p.tail(m, N)
        series.append({
            "order": m,
            "terms": N,
            "partial_sum": fraction_str(partials[N - 1]),
            "limit": fraction_str(dominating_sum_limit(m)),
            "tail": float(tail),
            "tail_below_tolerance": tail < tol,
            "monotone": all(a < b for a, b in zip(partials, partials[1:])),
        })
    theta = p.theta_partial
    small = theta.denominator.bit_length() <= 4096
    beta_rows = []
    for row, nu in zip(p.beta_rows, p.nu):
        exp = row["frac_exponent_bound"]
        doc = {"k": row["k"], "nu_k": nu, "ok": row["ok"]}
        # the exponent is -2^nu_k, far too long to print as an integer for k >= 4
        doc["frac_exponent_bound"] = f"-2^{nu}" if exp == -(2**nu) else str(exp)
        for key in ("n_k", "beta_abs", "bound"):
            if key in row:
                doc[key] = row[key]
        beta_rows.append(doc)
    return {
        "depth": p.depth,
        "nu": list(p.nu),
        "n_exponents": [f"2^{v}" for v in p.nu],
        "theta_partial": {
            "exact": f"{theta.numerator}/{theta.denominator}" if small else None,
            "decimal": fraction_str(theta) if small else None,
            "dyadic_exponents": list(p.nu),
            "approx": float(theta),
        },
        "beta_bound_ok": p.beta_bound_ok,
        "beta_rows": beta_rows,
        "derivative_series": series,
    }


# --- text rendering ---------------------------------------------------------


def render_invariant(doc: dict) -> str:
    inv = doc["invariant"]
    spec = inv["spec"]
    theta = spec["theta"]
    lines = [
        f"Space: {inv['space']}" + (f"  exponents {spec['exponents']}" if "exponents" in spec else ""),
        f"theta: {theta['label']} in [{theta['interval'][0]}, {theta['interval'][1]}]",
        f"K0 = {inv['k0']['text']}",
        f"K1 = {inv['k1']['text']}",
        "K0 generators (trace):",
    ]
    for g in inv["generators"]:
        order = f"  [order {g['order']}]" if g["order"] else ""
        lines.append(f"  {g['name']}: {g['trace']['text']}{order}")
    lines.append(f"unit [1] = generator {inv['unit'].index(1) + 1} ({inv['generators'][0]['name']})")
    lines.append(f"dense range: {'yes' if inv['dense_range'] else 'no'}")
    lines.append(f"positive cone: {inv['positive_cone']}")
    lines.append("K1 generators: " + ", ".join(inv["k1_generators"]))
    if inv["extrapolated"]:
        lines.append("NOTE: extrapolated (induced map beyond the 3-torus)")
    lines.extend(f"note: {n}" for n in inv["notes"] if not inv["extrapolated"])
    return "\n".join(lines)


def render_comparison(doc: dict) -> str:
    c = doc["comparison"]
    lines = [c["summary"]]
    e = c["elliott"]
    lines.append(f"Elliott verdict: {e['verdict']}" + (f" ({e['reason']})" if e["reason"] else ""))
    if e["witness"] is not None:
        lines.append("  K0 witness f0 (columns = images of generators):")
        lines.extend("    " + " ".join(f"{x:3d}" for x in row) for row in e["witness"])
    f = c["flip"]
    if f is None:
        lines.append("Flip-conjugacy: not computed")
    else:
        lines.append(f"Flip-conjugacy verdict: {f['verdict']}")
        for target, s in zip(("A2", "A2^-1"), f["separations"]):
            lines.append(f"  separated from {target} by {s['invariant']}: {s['value']} vs {s['other']}")
        if f["witness"] is not None:
            lines.append(f"  conjugator (U A1 = {f['relation']} U):")
            lines.extend("    " + " ".join(f"{x:3d}" for x in row) for row in f["witness"])
        if f["reason"]:
            lines.append(f"  {f['reason']}")
    lines.append(f"Headline: {c['headline']}")
    lines.extend(f"note: {n}" for n in c["notes"])
    return "\n".join(lines)


def render_family(doc: dict) -> str:
    lines = [f"Primes: {doc['primes']}"]
    for i, mem in enumerate(doc["members"]):
        lines.append(f"  h{i}: (m, n) = ({mem['m']}, {mem['n']})  K0 = {mem['k0']}  K1 = {mem['k1']}")
    lines.append("Verdict matrix (Elliott / flip):")
    for row in doc["matrix"]:
        lines.append("  " + " | ".join(f"{cell:>22}" for cell in row))
    lines.append(f"{len(doc['pairs'])} pairs; all ISOMORPHIC / DISTINCT: {'yes' if doc['all_ok'] else 'NO'}")
    return "\n".join(lines)


def render_rouhani(doc: dict) -> str:
    lines = [
        f"depth K = {doc['depth']}",
        f"nu = {tuple(doc['nu'])}",
        f"n_k = {', '.join(doc['n_exponents'])}",
    ]
    th = doc["theta_partial"]
    lines.append(f"theta_K = {th['exact'] or 'sum of 2^-nu_k'} ~ {th['approx']:.12f}")
    lines.append(f"beta_k bound for |k| <= {doc['depth']}: {'holds' if doc['beta_bound_ok'] else 'FAILS'}")
    for s in doc["derivative_series"]:
        lines.append(
            f"  m={s['order']}: sum_(n<={s['terms']}) n^m/2^n = {float(Fraction(s['partial_sum'])):.12g}"
            f" (limit {s['limit']}, tail {s['tail']:.3e}, monotone {s['monotone']})"
        )
    return "\n".join(lines)


def render_paper_examples(doc: dict) -> str:
    lines = []
    for c in doc["checks"]:
        lines.append(f"[{'PASS' if c['pass'] else 'FAIL'}] {c['name']}: expected {c['expected']}; observed {c['observed']}")
    lines.append(f"{sum(c['pass'] for c in doc['checks'])}/{len(doc['checks'])} passed")
    return "\n".join(lines)
