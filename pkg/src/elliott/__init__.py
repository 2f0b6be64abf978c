"""Exact K-theoretic invariants of crossed products by minimal affine
Furstenberg transformations and sphere-circle diffeomorphisms, with
flip-conjugacy obstructions from the action on first cohomology."""

from .classify import (
    CompareKind,
    ConjugacyKind,
    compare_transformations,
    elliott_compare,
    family_from_primes,
    flip_conjugacy_verdict,
    torus3,
    unipotent_invariants,
)
from .crossed import TraceValue, crossed_ktheory, dense_range, elliott, rotation_number
from .ktheory import AffineFurstenbergTorus, SphereTimesCircle, ThetaSymbol, UnsupportedSpecError
from .rouhani import rouhani_parameters
from .specfile import SpecError, load_spec, parse_spec
from .zlinalg import FgAbGroup, IntMatrix, cokernel, snf

__version__ = "0.1.0"

__all__ = [
    "AffineFurstenbergTorus",
    "CompareKind",
    "ConjugacyKind",
    "FgAbGroup",
    "IntMatrix",
    "SpecError",
    "SphereTimesCircle",
    "ThetaSymbol",
    "TraceValue",
    "UnsupportedSpecError",
    "cokernel",
    "compare_transformations",
    "crossed_ktheory",
    "dense_range",
    "elliott",
    "elliott_compare",
    "family_from_primes",
    "flip_conjugacy_verdict",
    "load_spec",
    "parse_spec",
    "rotation_number",
    "rouhani_parameters",
    "snf",
    "torus3",
    "unipotent_invariants",
]
