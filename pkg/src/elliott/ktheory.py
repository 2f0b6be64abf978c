"""Topological K-theory of tori and sphere-times-circle, with induced maps.

Torus classes are indexed by subsets S of {1..n}: the class of the
product of the coordinate unitaries z_i, i in S, taken in increasing
order.  Even subsets span K^0, odd subsets span K^1.  A map acting on
degree-one classes by the matrix A acts on the class of S through the
minors of A (the exterior-power, or compound, matrix), which is where the
anticommutation signs of the wedge product are resolved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Union

from .zlinalg import IntMatrix, det

__all__ = [
    "ThetaSymbol",
    "AffineFurstenbergTorus",
    "SphereTimesCircle",
    "TransformationSpec",
    "SpaceKTheory",
    "InducedMap",
    "UnsupportedSpecError",
    "torus_ktheory",
    "furstenberg_degree1_matrix",
    "furstenberg_induced_map",
    "sphere_circle_ktheory",
    "space_ktheory",
    "exterior_power",
]


class UnsupportedSpecError(ValueError):
    """The requested space or map lies outside the supported catalog."""


def _to_fraction(x) -> Fraction:
    if isinstance(x, float):
        # floats are accepted only through their decimal repr
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ThetaSymbol:
    """An irrational number known only through a label and an enclosing interval.

    Irrationality is the caller's assumption; it is what makes ``a + b*theta``
    vanish only when ``a == b == 0``.
    """

    label: str
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = _to_fraction(self.lo), _to_fraction(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not self.label or not isinstance(self.label, str):
            raise ValueError("theta label must be a nonempty string")
        if not lo < hi:
            raise ValueError(f"theta interval needs lo < hi, got [{lo}, {hi}]")
        if lo <= 0:
            raise ValueError(f"theta interval lower bound {lo} must be > 0")
        if hi >= 1:
            raise ValueError(f"theta interval upper bound {hi} must be < 1")

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class AffineFurstenbergTorus:
    """h(z_1, ..., z_n) = (e^{2 pi i theta} z_1, z_1^{m_1} z_2, ..., z_{n-1}^{m_{n-1}} z_n).

    ``cocycle_perturbed`` records an extra null-homotopic factor
    exp(2 pi i r(z_1)) in the second coordinate; it never changes h^*.
    """

    n: int
    exponents: tuple[int, ...]
    theta: ThetaSymbol
    cocycle_perturbed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(m) for m in self.exponents))
        if self.n < 2:
            raise UnsupportedSpecError(f"torus dimension must be >= 2, got {self.n}")
        if len(self.exponents) != self.n - 1:
            raise ValueError(f"a {self.n}-torus needs {self.n - 1} exponents, got {len(self.exponents)}")

    @property
    def kind(self) -> str:
        return "torus"


@dataclass(frozen=True)
class SphereTimesCircle:
    """A minimal diffeomorphism of S^d x S^1 homotopic to the identity,
    rotating the circle-coordinate class by theta."""

    sphere_dim: int
    theta: ThetaSymbol

    def __post_init__(self):
        d = self.sphere_dim
        if not (d == 2 or (d >= 3 and d % 2 == 1)):
            raise UnsupportedSpecError(
                f"sphere dimension must be 2 or odd >= 3, got {d}"
            )

    @property
    def kind(self) -> str:
        return "sphere_circle"


TransformationSpec = Union[AffineFurstenbergTorus, SphereTimesCircle]


@dataclass(frozen=True)
class SpaceKTheory:
    """Ordered bases of K^0(X) and K^1(X).

    ``k0_basis[0]`` is always the class of the unit.  ``rotation_index`` is
    the position in ``k1_basis`` of the class of the rotated circle coordinate.
    """

    space_tag: str
    k0_basis: tuple
    k1_basis: tuple
    k0_names: tuple[str, ...]
    k1_names: tuple[str, ...]
    rotation_index: int = 0

    def basis(self, parity: int) -> tuple:
        return self.k0_basis if parity == 0 else self.k1_basis

    def names(self, parity: int) -> tuple[str, ...]:
        return self.k0_names if parity == 0 else self.k1_names


@dataclass(frozen=True)
class InducedMap:
    """h^* on K^0 and K^1 in the bases of a :class:`SpaceKTheory`."""

    on_k0: IntMatrix
    on_k1: IntMatrix
    degree1_matrix: IntMatrix | None = None
    extrapolated: bool = False
    notes: tuple[str, ...] = field(default=())

    def on(self, parity: int) -> IntMatrix:
        return self.on_k0 if parity == 0 else self.on_k1


def _subsets_by_parity(n: int, parity: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(parity, n + 1, 2):
        out.extend(combinations(range(1, n + 1), size))
    return out


def torus_ktheory(n: int) -> SpaceKTheory:
    """K-theory of the n-torus, bases ordered by subset size then lexicographically."""
    if n < 1:
        raise ValueError(f"torus dimension must be >= 1, got {n}")
    even = _subsets_by_parity(n, 0)
    odd = _subsets_by_parity(n, 1)
    return SpaceKTheory(
        space_tag=f"Torus({n})",
        k0_basis=tuple(even),
        k1_basis=tuple(odd),
        k0_names=tuple(f"eta{i + 1}" for i in range(len(even))),
        k1_names=tuple(f"gamma{i + 1}" for i in range(len(odd))),
        rotation_index=0,
    )


def exterior_power(A: IntMatrix, subsets_rows, subsets_cols) -> IntMatrix:
    """Matrix of the induced map on wedge classes: entry (T, S) is the minor A[T, S].

    Subsets are 1-based index tuples; only equal sizes pair up.
    """
    out = []
    for T in subsets_rows:
        row = []
        for S in subsets_cols:
            if len(T) != len(S):
                row.append(0)
            elif not S:
                row.append(1)
            else:
                row.append(det(A.submatrix([t - 1 for t in T], [s - 1 for s in S])))
        out.append(row)
    return IntMatrix.from_rows(out, cols=len(subsets_cols))


def furstenberg_degree1_matrix(exponents) -> IntMatrix:
    """Unit upper triangular matrix with superdiagonal ``exponents``; column i is h^*(gamma_i)."""
    n = len(exponents) + 1
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for i, m in enumerate(exponents):
        rows[i][i + 1] = int(m)
    return IntMatrix.from_rows(rows)


def furstenberg_induced_map(spec: AffineFurstenbergTorus) -> InducedMap:
    if not isinstance(spec, AffineFurstenbergTorus):
        raise TypeError("expected an AffineFurstenbergTorus")
    kt = torus_ktheory(spec.n)
    A = furstenberg_degree1_matrix(spec.exponents)
    notes = []
    extrapolated = spec.n > 3
    if extrapolated:
        notes.append(f"h* on the {spec.n}-torus uses the multiplicative extension rule beyond dimension 3 (extrapolated)")
    return InducedMap(
        on_k0=exterior_power(A, kt.k0_basis, kt.k0_basis),
        on_k1=exterior_power(A, kt.k1_basis, kt.k1_basis),
        degree1_matrix=A,
        extrapolated=extrapolated,
        notes=tuple(notes),
    )


def sphere_circle_ktheory(spec: SphereTimesCircle) -> tuple[SpaceKTheory, InducedMap]:
    """Generator model for S^d x S^1; the map is homotopic to the identity so h^* = id."""
    if not isinstance(spec, SphereTimesCircle):
        raise TypeError("expected a SphereTimesCircle")
    d = spec.sphere_dim
    if d == 2:
        # beta the Bott element of S^2, z the circle coordinate
        k0 = ("[1]x[1]", "beta x [1]")
        k1 = ("[1]x[z]", "beta x [z]")
    else:
        # gamma the generator of K^1(S^d), d odd
        k0 = ("[1]x[1]", "gamma x [z]")
        k1 = ("[1]x[z]", "gamma x [1]")
    kt = SpaceKTheory(
        space_tag=f"SphereCircle({d})",
        k0_basis=k0,
        k1_basis=k1,
        k0_names=("eta1", "eta2"),
        k1_names=("gamma1", "gamma2"),
        rotation_index=0,
    )
    ident = IntMatrix.identity(2)
    return kt, InducedMap(on_k0=ident, on_k1=ident)


def space_ktheory(spec: TransformationSpec) -> tuple[SpaceKTheory, InducedMap]:
    if isinstance(spec, AffineFurstenbergTorus):
        return torus_ktheory(spec.n), furstenberg_induced_map(spec)
    if isinstance(spec, SphereTimesCircle):
        return sphere_circle_ktheory(spec)
    raise UnsupportedSpecError(f"unsupported transformation spec {spec!r}")
