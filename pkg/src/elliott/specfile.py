"""Reading transformation specs from YAML (or JSON) documents.

Example::

    space: torus
    dimension: 3
    exponents: [2, 3]
    theta:
      label: theta
      interval: ["0.5624", "0.5626"]

Interval endpoints must be decimal strings; they are parsed exactly as
rationals and never pass through binary floating point.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

import yaml

from .ktheory import (
    AffineFurstenbergTorus,
    SphereTimesCircle,
    ThetaSymbol,
    TransformationSpec,
    UnsupportedSpecError,
)

SPACES = ("torus", "sphere_circle")
_TOP_KEYS = {"space", "dimension", "exponents", "theta", "cocycle_perturbed"}
_THETA_KEYS = {"label", "interval"}


class SpecError(ValueError):
    """The document does not satisfy the spec schema."""


def _decimal(value, where: str) -> Fraction:
    if not isinstance(value, str):
        raise SpecError(f"{where} must be a quoted decimal string, got {value!r}")
    try:
        d = Decimal(value.strip())
    except InvalidOperation:
        raise SpecError(f"{where} is not a decimal number: {value!r}") from None
    if not d.is_finite():
        raise SpecError(f"{where} must be finite, got {value!r}")
    return Fraction(d)


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SpecError(f"{where} must be an integer, got {value!r}")
    return value


def parse_theta(doc) -> ThetaSymbol:
    if not isinstance(doc, dict):
        raise SpecError("theta must be a mapping with 'label' and 'interval'")
    unknown = set(doc) - _THETA_KEYS
    if unknown:
        raise SpecError(f"unknown field(s) in theta: {sorted(unknown)}")
    missing = _THETA_KEYS - set(doc)
    if missing:
        raise SpecError(f"theta is missing field(s): {sorted(missing)}")
    label = doc["label"]
    if not isinstance(label, str) or not label.isidentifier():
        raise SpecError(f"theta.label must be an identifier, got {label!r}")
    interval = doc["interval"]
    if not isinstance(interval, list) or len(interval) != 2:
        raise SpecError("theta.interval must be a list [lo, hi] of two decimal strings")
    lo = _decimal(interval[0], "theta.interval lo")
    hi = _decimal(interval[1], "theta.interval hi")
    if lo <= 0:
        raise SpecError(f"theta.interval lo = {interval[0]} violates lo > 0")
    if hi >= 1:
        raise SpecError(f"theta.interval hi = {interval[1]} violates hi < 1")
    if not lo < hi:
        raise SpecError(f"theta.interval lo = {interval[0]} and hi = {interval[1]} violate lo < hi")
    return ThetaSymbol(label, lo, hi)


def parse_spec(doc) -> TransformationSpec:
    """Validate a decoded document and build the transformation spec.

    Raises SpecError for schema violations and UnsupportedSpecError for
    well-formed documents describing spaces outside the catalog.
    """
    if not isinstance(doc, dict):
        raise SpecError("spec document must be a mapping")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise SpecError(f"unknown field(s): {sorted(unknown)}")
    for key in ("space", "dimension", "theta"):
        if key not in doc:
            raise SpecError(f"missing required field '{key}'")
    space = doc["space"]
    if not isinstance(space, str):
        raise SpecError(f"space must be a string, got {space!r}")
    dim = _int(doc["dimension"], "dimension")
    theta = parse_theta(doc["theta"])

    if space == "torus":
        if "exponents" not in doc:
            raise SpecError("torus spec needs 'exponents'")
        exps = doc["exponents"]
        if not isinstance(exps, list):
            raise SpecError("exponents must be a list of integers")
        exps = [_int(m, f"exponents[{i}]") for i, m in enumerate(exps)]
        flag = doc.get("cocycle_perturbed", False)
        if not isinstance(flag, bool):
            raise SpecError(f"cocycle_perturbed must be a boolean, got {flag!r}")
        if dim < 2:
            raise UnsupportedSpecError(f"torus dimension {dim} is not supported (need >= 2)")
        if len(exps) != dim - 1:
            raise SpecError(f"a {dim}-torus needs {dim - 1} exponents, got {len(exps)}")
        return AffineFurstenbergTorus(dim, tuple(exps), theta, flag)
    if space == "sphere_circle":
        for key in ("exponents", "cocycle_perturbed"):
            if key in doc:
                raise SpecError(f"field '{key}' is not allowed for sphere_circle")
        return SphereTimesCircle(dim, theta)
    raise UnsupportedSpecError(f"unsupported space {space!r}; expected one of {list(SPACES)}")


def load_spec(path) -> TransformationSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise SpecError(f"{path}: not valid YAML/JSON: {exc}") from None
    return parse_spec(doc)


def spec_to_doc(spec: TransformationSpec) -> dict:
    """Inverse of :func:`parse_spec`, with exact interval strings."""
    theta = {"label": spec.theta.label, "interval": [fraction_str(spec.theta.lo), fraction_str(spec.theta.hi)]}
    if isinstance(spec, AffineFurstenbergTorus):
        return {
            "space": "torus",
            "dimension": spec.n,
            "exponents": list(spec.exponents),
            "theta": theta,
            "cocycle_perturbed": spec.cocycle_perturbed,
        }
    return {"space": "sphere_circle", "dimension": spec.sphere_dim, "theta": theta}


def fraction_str(q: Fraction) -> str:
    """Exact decimal string when q has a terminating expansion, else 'p/q'."""
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10**digits
    s = str(abs(scaled.numerator)).rjust(digits + 1, "0")
    body = s[:-digits] + "." + s[-digits:] if digits else s
    return ("-" if q < 0 else "") + body
