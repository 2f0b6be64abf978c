"""K-theory of crossed products C*(Z, X, h) and their Elliott invariants.

The six-term Pimsner-Voiculescu sequence splits here because kernels of
id - h^* on K^*(X) are free, so

    K_j(C*(Z, X, h)) = coker(id - h^* on K^j) + ker(id - h^* on K^{1-j}).

The trace on the cokernel part is the rank of a K^0 class (only [1] has
nonzero rank in our bases); a kernel class gamma is lifted through the
connecting map and gets trace equal to its rotation number, normalized
into [0, 1) by subtracting multiples of [1].
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Sequence

from .ktheory import (
    AffineFurstenbergTorus,
    InducedMap,
    SpaceKTheory,
    SphereTimesCircle,
    ThetaSymbol,
    TransformationSpec,
    UnsupportedSpecError,
    space_ktheory,
)
from .zlinalg import (
    CokernelMap,
    FgAbGroup,
    IntMatrix,
    cokernel,
    hermite_rows,
    kernel_basis,
    unimodular_inverse,
)

__all__ = [
    "TraceValue",
    "Sign",
    "sign",
    "CrossedGenerator",
    "CrossedKTheory",
    "ElliottInvariant",
    "NotFixedError",
    "pv_assemble",
    "rotation_number",
    "trace_functional",
    "dense_range",
    "crossed_ktheory",
    "elliott",
]


class NotFixedError(ValueError):
    """A K^1 class handed to the rotation number is not fixed by h^*."""


class Sign(enum.Enum):
    POSITIVE = "positive"
    ZERO = "zero"
    NEGATIVE = "negative"
    NEED_TIGHTER_THETA = "need_tighter_theta"


@dataclass(frozen=True)
class TraceValue:
    """The real number a + b*theta, with a and b rational and theta symbolic."""

    a: Fraction
    b: Fraction
    theta: ThetaSymbol

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @classmethod
    def zero(cls, theta: ThetaSymbol) -> TraceValue:
        return cls(Fraction(0), Fraction(0), theta)

    def _check(self, other: TraceValue) -> None:
        if self.theta.label != other.theta.label:
            raise ValueError(f"cannot combine values over {self.theta.label} and {other.theta.label}")

    def __add__(self, other: TraceValue) -> TraceValue:
        self._check(other)
        return TraceValue(self.a + other.a, self.b + other.b, self.theta)

    def __neg__(self) -> TraceValue:
        return TraceValue(-self.a, -self.b, self.theta)

    def __sub__(self, other: TraceValue) -> TraceValue:
        return self + (-other)

    def __mul__(self, k: int) -> TraceValue:
        if isinstance(k, bool) or not isinstance(k, int):
            return NotImplemented
        return TraceValue(k * self.a, k * self.b, self.theta)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, TraceValue):
            return NotImplemented
        return (self.a, self.b, self.theta.label) == (other.a, other.b, other.theta.label)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.theta.label))

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def interval(self) -> tuple[Fraction, Fraction]:
        ends = (self.a + self.b * self.theta.lo, self.a + self.b * self.theta.hi)
        return (min(ends), max(ends))

    def __str__(self) -> str:
        return format_trace(self.a, self.b, self.theta.label)


def _fmt_coeff(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_trace(a: Fraction, b: Fraction, label: str) -> str:
    parts = []
    if a:
        parts.append(_fmt_coeff(a))
    if b:
        mag = abs(b)
        term = label if mag == 1 else f"{_fmt_coeff(mag)}*{label}"
        if parts:
            parts.append(("- " if b < 0 else "+ ") + term)
        else:
            parts.append(("-" if b < 0 else "") + term)
    return " ".join(parts) if parts else "0"


def sign(v: TraceValue) -> Sign:
    """Sign of a + b*theta, decided exactly from theta's interval when possible."""
    if v.is_zero():
        return Sign.ZERO
    lo, hi = v.interval()
    if lo > 0:
        return Sign.POSITIVE
    if hi < 0:
        return Sign.NEGATIVE
    # theta is irrational and lies strictly inside its interval, so an
    # endpoint zero still decides when the other endpoint agrees
    if lo == 0 and hi > 0 and v.b != 0:
        return Sign.POSITIVE
    if hi == 0 and lo < 0 and v.b != 0:
        return Sign.NEGATIVE
    return Sign.NEED_TIGHTER_THETA


# --- Pimsner-Voiculescu assembly -------------------------------------------


@dataclass(frozen=True)
class CrossedGenerator:
    """One generator of K_j of the crossed product.

    ``kind`` is ``"coker"`` for the image of a K^j(X) class (``vector`` is a
    representative in the K^j basis) or ``"kernel"`` for a lift through the
    connecting map of an h^*-fixed K^{1-j} class (``vector`` is that class).
    ``order`` is 0 for infinite order.
    """

    name: str
    kind: str
    source_parity: int
    vector: tuple[int, ...]
    order: int = 0


@dataclass(frozen=True)
class CrossedKTheory:
    """Split K_0 and K_1 of C*(Z, X, h) with generator provenance.

    Generators of each K_j are ordered: cokernel free (for K_0 the unit
    first), kernel lifts, then cokernel torsion.  ``coker_maps[j]`` turns a
    K^j(X) vector into coordinates on the cokernel generators of K_j.
    """

    space: SpaceKTheory
    hstar: InducedMap
    k0_generators: tuple[CrossedGenerator, ...]
    k0_group: FgAbGroup
    k1_generators: tuple[CrossedGenerator, ...]
    k1_group: FgAbGroup
    coker_maps: tuple[CokernelMap, CokernelMap]

    def generators(self, j: int) -> tuple[CrossedGenerator, ...]:
        return self.k0_generators if j == 0 else self.k1_generators

    def group(self, j: int) -> FgAbGroup:
        return self.k0_group if j == 0 else self.k1_group

    @property
    def unit_index(self) -> int:
        return 0

    def image_of(self, j: int, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates in K_j of the image of the K^j(X) class x."""
        gens = self.generators(j)
        coker_coords = self.coker_maps[j].project(x)
        out = []
        it = iter(coker_coords)
        for g in gens:
            out.append(next(it) if g.kind == "coker" else 0)
        return tuple(out)


def _vector_expr(v: Sequence[int], names: Sequence[str]) -> str:
    terms = []
    for c, nm in zip(v, names):
        if not c:
            continue
        mag = abs(c)
        t = nm if mag == 1 else f"{mag}*{nm}"
        if terms:
            terms.append(("- " if c < 0 else "+ ") + t)
        else:
            terms.append(("-" if c < 0 else "") + t)
    return " ".join(terms) if terms else "0"


def _reduce_mod_image(v: Sequence[int], image_hnf: IntMatrix) -> tuple[int, ...]:
    """Canonical representative of v modulo a lattice given by its row Hermite form."""
    v = list(v)
    for i in range(image_hnf.rows):
        row = image_hnf.row(i)
        p = next(k for k, x in enumerate(row) if x)
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def _unit_adapted(cmap: CokernelMap, group: FgAbGroup, unit: Sequence[int], rank_fn: Sequence[int]):
    """Re-base the free part of a cokernel so the unit's image is generator 0.

    ``rank_fn`` is an integral functional on K^0(X) that vanishes on the
    image of id - h^* and takes value 1 on the unit.  The remaining free
    generators span the kernel of that functional.
    """
    k = group.rank
    ntor = len(group.invariant_factors)
    u = cmap.project(unit)
    f, s = list(u[:k]), list(u[k:])
    t = [sum(a * b for a, b in zip(rank_fn, cmap.lifts.col(i))) for i in range(k)]
    if sum(a * b for a, b in zip(t, f)) != 1:
        raise AssertionError("rank functional does not take value 1 on the unit")
    Kb = kernel_basis(IntMatrix.from_rows([t], cols=k))
    W = IntMatrix.from_columns([f] + [list(c) for c in Kb.columns()], rows=k)
    Winv = unimodular_inverse(W)
    # new free coords = Winv @ old free coords
    # new torsion coords = old torsion coords - s * (first new free coord)
    proj_rows = []
    old_free = cmap.projection.submatrix(range(k), range(cmap.projection.cols))
    new_free = Winv @ old_free
    proj_rows.extend(new_free.to_rows())
    first = new_free.row(0)
    for i in range(ntor):
        old = cmap.projection.row(k + i)
        proj_rows.append([a - s[i] * b for a, b in zip(old, first)])
    projection = IntMatrix.from_rows(proj_rows, cols=cmap.projection.cols)
    old_free_lifts = cmap.lifts.submatrix(range(cmap.lifts.rows), range(k))
    free_lifts = old_free_lifts @ W
    lift_cols = [tuple(unit)] + [free_lifts.col(i) for i in range(1, k)]
    lift_cols += [cmap.lifts.col(k + i) for i in range(ntor)]
    lifts = IntMatrix.from_columns(lift_cols, rows=cmap.lifts.rows)
    return CokernelMap(projection=projection, lifts=lifts, moduli=cmap.moduli)


def _canonical_lifts(cmap: CokernelMap, M: IntMatrix) -> CokernelMap:
    hnf = hermite_rows(M.transpose())
    cols = [_reduce_mod_image(c, hnf) for c in cmap.lifts.columns()]
    return CokernelMap(
        projection=cmap.projection,
        lifts=IntMatrix.from_columns(cols, rows=cmap.lifts.rows),
        moduli=cmap.moduli,
    )


def pv_assemble(kt: SpaceKTheory, hstar: InducedMap) -> CrossedKTheory:
    """Assemble K_0 and K_1 of the crossed product from the split PV sequence."""
    maps = []
    groups = []
    gens_by_parity = []
    for j in (0, 1):
        h = hstar.on(j)
        n_j = len(kt.basis(j))
        if h.shape != (n_j, n_j):
            raise ValueError(f"h* on K^{j} has shape {h.shape}, basis has {n_j} elements")
        M = IntMatrix.identity(n_j) - h
        group, cmap = cokernel(M)
        if j == 0:
            unit = tuple(1 if i == 0 else 0 for i in range(n_j))
            rank_fn = unit
            if any(M.row(0)):
                raise ValueError("h* must preserve the rank of K^0 classes")
            cmap = _unit_adapted(cmap, group, unit, rank_fn)
        cmap = _canonical_lifts(cmap, M)
        if j == 0:
            # the unit's own representative is kept exactly
            cols = cmap.lifts.columns()
            cols[0] = tuple(1 if i == 0 else 0 for i in range(n_j))
            cmap = CokernelMap(cmap.projection, IntMatrix.from_columns(cols, rows=n_j), cmap.moduli)
        maps.append(cmap)

        names = kt.names(j)
        coker_free, coker_tors = [], []
        for i, (col, mod) in enumerate(zip(cmap.lifts.columns(), cmap.moduli)):
            label = "[1]" if (j == 0 and i == 0) else f"bar({_vector_expr(col, names)})"
            g = CrossedGenerator(name=label, kind="coker", source_parity=j, vector=col, order=mod)
            (coker_tors if mod else coker_free).append(g)

        other = 1 - j
        Mo = IntMatrix.identity(len(kt.basis(other))) - hstar.on(other)
        K = kernel_basis(Mo)
        lifts = []
        prefix = "nu" if j == 0 else "xi"
        for col in K.columns():
            pivot = next(i for i, x in enumerate(col) if x)
            lifts.append(
                CrossedGenerator(
                    name=f"{prefix}{pivot + 1}",
                    kind="kernel",
                    source_parity=other,
                    vector=col,
                )
            )
        gens_by_parity.append(tuple(coker_free + lifts + coker_tors))
        groups.append(group + FgAbGroup(K.cols))

    return CrossedKTheory(
        space=kt,
        hstar=hstar,
        k0_generators=gens_by_parity[0],
        k0_group=groups[0],
        k1_generators=gens_by_parity[1],
        k1_group=groups[1],
        coker_maps=(maps[0], maps[1]),
    )


# --- traces -----------------------------------------------------------------


def rotation_number(odd_class: Sequence[int], spec: TransformationSpec) -> TraceValue:
    """Rotation number of an h^*-fixed K^1 class, as c*theta modulo Z.

    c is the coefficient of the rotated circle coordinate's class; all
    other fixed basis classes have rotation number 1 (value 0 mod Z).
    """
    kt, hstar = space_ktheory(spec)
    x = tuple(int(c) for c in odd_class)
    if len(x) != len(kt.k1_basis):
        raise ValueError(f"expected {len(kt.k1_basis)} coordinates, got {len(x)}")
    if hstar.on_k1.apply(x) != x:
        raise NotFixedError(f"class {x} is not fixed by h*")
    return TraceValue(Fraction(0), Fraction(x[kt.rotation_index]), spec.theta)


def _reduce_unit_interval(v: TraceValue) -> TraceValue:
    """Subtract the integer part so that the value lies in [0, 1)."""
    if v.b == 0:
        return TraceValue(v.a - floor(v.a), Fraction(0), v.theta)
    lo, hi = v.interval()
    k = floor(lo)
    if floor(hi) != k and not (hi == k + 1):
        raise ValueError(
            f"theta interval [{v.theta.lo}, {v.theta.hi}] too wide to normalize {v} into [0, 1)"
        )
    return TraceValue(v.a - k, v.b, v.theta)


@dataclass(frozen=True)
class ElliottInvariant:
    """Ordered K_0 with unit and trace, plus K_1.

    Coordinates on K_0 follow ``k0_names``: free generators first (the unit,
    other cokernel classes, kernel lifts), torsion generators last.  The
    order is the strict-trace cone: x > 0 iff trace(x) > 0.
    """

    k0: FgAbGroup
    k1: FgAbGroup
    k0_names: tuple[str, ...]
    k1_names: tuple[str, ...]
    unit: tuple[int, ...]
    trace: tuple[TraceValue, ...]
    theta: ThetaSymbol
    space_tag: str = ""
    extrapolated: bool = False
    notes: tuple[str, ...] = field(default=())

    @property
    def free_trace(self) -> tuple[TraceValue, ...]:
        return self.trace[: self.k0.rank]

    @property
    def torsion_orders(self) -> tuple[int, ...]:
        return self.k0.invariant_factors

    def trace_of(self, x: Sequence[int]) -> TraceValue:
        if len(x) != len(self.trace):
            raise ValueError(f"expected {len(self.trace)} coordinates, got {len(x)}")
        total = TraceValue.zero(self.theta)
        for c, t in zip(x, self.trace):
            total = total + int(c) * t
        return total

    def is_zero(self, x: Sequence[int]) -> bool:
        r = self.k0.rank
        free_zero = not any(x[:r])
        tors_zero = all(c % d == 0 for c, d in zip(x[r:], self.k0.invariant_factors))
        return free_zero and tors_zero

    def positivity(self, x: Sequence[int]) -> Sign:
        """POSITIVE if x > 0, ZERO if x = 0, NEGATIVE if x is not >= 0."""
        if self.is_zero(x):
            return Sign.ZERO
        s = sign(self.trace_of(x))
        if s is Sign.ZERO:
            # nonzero class of trace zero: not in the cone
            return Sign.NEGATIVE
        return s

    def is_positive(self, x: Sequence[int]) -> bool:
        s = self.positivity(x)
        if s is Sign.NEED_TIGHTER_THETA:
            raise ValueError("theta interval too wide to decide positivity")
        return s is Sign.POSITIVE

    def cone_statement(self) -> str:
        """The positive cone in coordinates r1, r2, ... on the free generators."""
        terms = []
        for i, t in enumerate(self.free_trace):
            r = f"r{i + 1}"
            if t.a:
                terms.append(r if t.a == 1 else f"{_fmt_coeff(t.a)}*{r}")
            if t.b:
                coeff = self.theta.label if t.b == 1 else f"{_fmt_coeff(t.b)}*{self.theta.label}"
                terms.append(f"{coeff}*{r}")
        expr = " + ".join(terms) if terms else "0"
        return f"x >= 0 iff x = 0 or {expr} > 0"


def trace_functional(ck: CrossedKTheory, spec: TransformationSpec) -> ElliottInvariant:
    """Attach the trace on K_0 and package the Elliott invariant."""
    theta = spec.theta
    trace = []
    for g in ck.k0_generators:
        if g.kind == "coker":
            if g.order:
                trace.append(TraceValue.zero(theta))
            else:
                # rank of the representative; only [1] has nonzero rank
                trace.append(TraceValue(Fraction(g.vector[0]), Fraction(0), theta))
        else:
            trace.append(_reduce_unit_interval(rotation_number(g.vector, spec)))
    unit = tuple(1 if i == 0 else 0 for i in range(len(ck.k0_generators)))
    return ElliottInvariant(
        k0=ck.k0_group,
        k1=ck.k1_group,
        k0_names=tuple(g.name for g in ck.k0_generators),
        k1_names=tuple(g.name for g in ck.k1_generators),
        unit=unit,
        trace=tuple(trace),
        theta=theta,
        space_tag=ck.space.space_tag,
        extrapolated=ck.hstar.extrapolated,
        notes=ck.hstar.notes,
    )


def dense_range(inv: ElliottInvariant) -> bool:
    """The trace image is Z + theta*Z (dense) as soon as some value involves theta."""
    return any(t.b != 0 for t in inv.trace)


def check_minimal(spec: TransformationSpec) -> None:
    """Reject specs outside the minimal, uniquely ergodic catalog."""
    if isinstance(spec, AffineFurstenbergTorus):
        if any(m == 0 for m in spec.exponents):
            raise UnsupportedSpecError(
                f"exponents {list(spec.exponents)} include 0; the map is not minimal"
            )
    elif not isinstance(spec, SphereTimesCircle):
        raise UnsupportedSpecError(f"unsupported transformation spec {spec!r}")


def crossed_ktheory(spec: TransformationSpec) -> CrossedKTheory:
    check_minimal(spec)
    kt, hstar = space_ktheory(spec)
    return pv_assemble(kt, hstar)


def elliott(spec: TransformationSpec) -> ElliottInvariant:
    """Elliott invariant of C*(Z, X, h) for a catalog transformation."""
    return trace_functional(crossed_ktheory(spec), spec)
