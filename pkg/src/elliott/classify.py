"""Comparing Elliott invariants and separating maps up to flip conjugacy.

Two kinds of verdict live here.  :func:`elliott_compare` checks the
hypotheses of the classification theorem for uniquely ergodic minimal
diffeomorphisms: a unit- and trace-preserving isomorphism of K_0, an
isomorphism of K_1, and dense trace range.  :func:`flip_conjugacy_verdict`
looks for GL(n, Z)-similarity invariants of the action on H^1 that
separate A1 from both A2 and A2^{-1}.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from math import gcd, isqrt, lcm
from typing import Sequence

from .crossed import ElliottInvariant, dense_range, elliott
from .ktheory import (
    AffineFurstenbergTorus,
    ThetaSymbol,
    TransformationSpec,
    furstenberg_degree1_matrix,
)
from .zlinalg import (
    FgAbGroup,
    IntMatrix,
    check_square,
    complete_to_unimodular,
    det,
    image_basis,
    is_unimodular,
    kernel_basis,
    lattice_index,
    snf,
    solve,
    unimodular_inverse,
)

DEFAULT_SEARCH_BOUND = 5
MAX_SEARCH_NODES = 2_000_000


# --- similarity invariants --------------------------------------------------


@dataclass(frozen=True)
class SimilarityInvariants:
    """GL(n, Z)-conjugation invariants of A, built from c = A - I.

    ``snf_powers[k-1]`` is the Smith diagonal of c^k.  ``ladder_multiplier``
    is the index of c(Ker c^2) in Ker c, or None when that index is
    infinite.  ``nilpotency_index`` is the largest k with c^k != 0 (0 for
    A = I), or None when c is not nilpotent.
    """

    size: int
    snf_powers: tuple[tuple[int, ...], ...]
    ladder_multiplier: int | None
    nilpotency_index: int | None
    charpoly: tuple[int, ...]

    def coker_power(self, k: int) -> FgAbGroup:
        """coker(c^k) as an abelian group."""
        diag = self.snf_powers[k - 1]
        return FgAbGroup.from_orders(self.size - len(diag), diag)

    def items(self) -> list[tuple[str, object]]:
        """Named invariants in the order used to report a separation."""
        out: list[tuple[str, object]] = [("ladder", self.ladder_multiplier)]
        out += [(f"coker(c^{k + 1})", str(self.coker_power(k + 1))) for k in range(len(self.snf_powers))]
        out += [("nilpotency", self.nilpotency_index), ("charpoly", self.charpoly)]
        return out


def charpoly(A: IntMatrix) -> tuple[int, ...]:
    """Coefficients of det(xI - A), leading first (Faddeev-LeVerrier, exact)."""
    A = check_square(A)
    n = A.rows
    coeffs = [1]
    M = IntMatrix.zeros(n, n)
    I = IntMatrix.identity(n)
    for k in range(1, n + 1):
        M = A @ M + I.scale(coeffs[-1])
        AM = A @ M
        tr = sum(AM[i, i] for i in range(n))
        coeffs.append(-tr // k)
    return tuple(coeffs)


def unipotent_invariants(A) -> SimilarityInvariants:
    A = check_square(A, "A")
    n = A.rows
    c = A - IntMatrix.identity(n)
    powers = []
    P = IntMatrix.identity(n)
    nil = None
    for k in range(1, n + 1):
        P = P @ c
        powers.append(snf(P).diagonal)
        if nil is None and P.is_zero():
            nil = k - 1
    if nil is None and n == 0:
        nil = 0

    ladder = None
    K1 = kernel_basis(c)
    K2 = kernel_basis(c @ c)
    image = c @ K2
    if K1.cols and snf(image).rank == K1.cols:
        ladder = lattice_index(image, K1)
    return SimilarityInvariants(
        size=n,
        snf_powers=tuple(powers),
        ladder_multiplier=ladder,
        nilpotency_index=nil,
        charpoly=charpoly(A),
    )


class ConjugacyKind(enum.Enum):
    DISTINCT = "DISTINCT"
    POSSIBLY_CONJUGATE = "POSSIBLY_CONJUGATE"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Separation:
    invariant: str
    value: object
    other: object

    def __str__(self) -> str:
        return f"{self.invariant} {_fmt(self.value)} vs {_fmt(self.other)}"


def _fmt(v) -> str:
    return "none" if v is None else str(v)


@dataclass(frozen=True)
class ConjugacyVerdict:
    """Outcome of the flip-conjugacy test for A1 against A2 and A2^{-1}.

    For DISTINCT, ``separations`` holds one separating invariant against A2
    and one against A2^{-1}.  For POSSIBLY_CONJUGATE, ``witness`` U satisfies
    U A1 = target U where target is A2 (``relation == "A2"``) or A2^{-1}.
    """

    kind: ConjugacyKind
    separations: tuple[Separation, ...] = ()
    witness: IntMatrix | None = None
    relation: str | None = None
    reason: str = ""

    def summary(self) -> str:
        if self.kind is ConjugacyKind.DISTINCT:
            direct, inverse = self.separations
            if direct.invariant == inverse.invariant and direct.other == inverse.other:
                return f"DISTINCT ({direct})"
            return f"DISTINCT ({direct}; vs inverse: {inverse})"
        if self.kind is ConjugacyKind.POSSIBLY_CONJUGATE:
            return f"POSSIBLY_CONJUGATE (witness conjugates to {self.relation})"
        return f"UNKNOWN ({self.reason})" if self.reason else "UNKNOWN"


def _first_difference(a: SimilarityInvariants, b: SimilarityInvariants) -> Separation | None:
    for (name, va), (_, vb) in zip(a.items(), b.items()):
        if va != vb:
            return Separation(name, va, vb)
    return None


def _intertwiner_lattice(A1: IntMatrix, A2: IntMatrix) -> IntMatrix:
    """Rows: Hermite basis of {U : U A1 = A2 U}, U flattened row-major."""
    n = A1.rows
    rows = []
    for i in range(n):
        for j in range(n):
            eq = [0] * (n * n)
            for k in range(n):
                eq[i * n + k] += A1[k, j]
                eq[k * n + j] -= A2[i, k]
            rows.append(eq)
    return kernel_basis(IntMatrix.from_rows(rows)).transpose()


def search_intertwiner(A1: IntMatrix, A2: IntMatrix, bound: int, max_nodes: int = MAX_SEARCH_NODES):
    """Exhaustively look for unimodular U with entries in [-bound, bound] and U A1 = A2 U.

    Returns (U or None, complete) where ``complete`` is False when the
    node budget ran out before the box was covered.
    """
    n = A1.rows
    basis = _intertwiner_lattice(A1, A2)
    r = basis.rows
    if r == 0:
        return None, True
    rows = [basis.row(i) for i in range(r)]
    pivots = [next(k for k, x in enumerate(row) if x) for row in rows]
    nodes = 0

    def rec(level: int, acc: list[int]):
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise _Budget
        if level == r:
            if all(abs(x) <= bound for x in acc):
                U = IntMatrix(n, n, acc)
                if abs(det(U)) == 1:
                    return U
            return None
        p = pivots[level]
        piv = rows[level][p]
        s = acc[p]
        lo = -((bound + s) // piv)  # ceil((-bound - s) / piv)
        hi = (bound - s) // piv
        for cval in sorted(range(lo, hi + 1), key=lambda v: (abs(v), v)):
            nxt = [x + cval * y for x, y in zip(acc, rows[level])]
            # entries at earlier pivots are final once their level is passed
            found = rec(level + 1, nxt)
            if found is not None:
                return found
        return None

    try:
        return rec(0, [0] * (n * n)), True
    except _Budget:
        return None, False


class _Budget(Exception):
    pass


def flip_conjugacy_verdict(A1, A2, bound: int = DEFAULT_SEARCH_BOUND) -> ConjugacyVerdict:
    A1, A2 = check_square(A1, "A1"), check_square(A2, "A2")
    if A1.shape != A2.shape:
        raise ValueError(f"size mismatch: {A1.shape} vs {A2.shape}")
    for name, M in (("A1", A1), ("A2", A2)):
        if not is_unimodular(M):
            raise ValueError(f"{name} is not unimodular")
    A2inv = unimodular_inverse(A2)
    inv1 = unipotent_invariants(A1)
    sep_direct = _first_difference(inv1, unipotent_invariants(A2))
    sep_inverse = _first_difference(inv1, unipotent_invariants(A2inv))
    if sep_direct is not None and sep_inverse is not None:
        return ConjugacyVerdict(ConjugacyKind.DISTINCT, separations=(sep_direct, sep_inverse))

    ident = IntMatrix.identity(A1.rows)
    for relation, target, sep in (("A2", A2, sep_direct), ("A2^-1", A2inv, sep_inverse)):
        if sep is None and A1 == target:
            return ConjugacyVerdict(ConjugacyKind.POSSIBLY_CONJUGATE, witness=ident, relation=relation)
    incomplete = False
    for relation, target, sep in (("A2", A2, sep_direct), ("A2^-1", A2inv, sep_inverse)):
        if sep is not None:
            continue
        U, complete = search_intertwiner(A1, target, bound)
        if U is not None:
            return ConjugacyVerdict(ConjugacyKind.POSSIBLY_CONJUGATE, witness=U, relation=relation)
        incomplete |= not complete
    reason = f"no conjugator with entries <= {bound}"
    if incomplete:
        reason += " (search budget exhausted)"
    return ConjugacyVerdict(ConjugacyKind.UNKNOWN, reason=reason)


# --- Elliott invariant comparison ------------------------------------------


class CompareKind(enum.Enum):
    ISOMORPHIC = "ISOMORPHIC"
    NOT_ISOMORPHIC = "NOT_ISOMORPHIC"
    UNDECIDED = "UNDECIDED"


@dataclass(frozen=True)
class CompareVerdict:
    """Result of :func:`elliott_compare`.

    For ISOMORPHIC, ``witness`` is the matrix of f_0 on K_0 coordinates
    (free block unimodular, torsion generators matched in order) and
    ``k1_witness`` the matrix of f_1.
    """

    kind: CompareKind
    reason: str = ""
    witness: IntMatrix | None = None
    free_witness: IntMatrix | None = None
    torsion_correspondence: tuple[tuple[int, int], ...] = ()
    k1_witness: IntMatrix | None = None

    def summary(self) -> str:
        return self.kind.value if not self.reason or self.kind is CompareKind.ISOMORPHIC else f"{self.kind.value} ({self.reason})"


def _trace_matrix(inv: ElliottInvariant, denom: int) -> IntMatrix:
    cols = []
    for t in inv.free_trace:
        a, b = t.a * denom, t.b * denom
        if a.denominator != 1 or b.denominator != 1:
            raise ValueError("denominator does not clear trace values")
        cols.append((int(a), int(b)))
    return IntMatrix.from_columns(cols, rows=2)


def _adapted_basis(T: IntMatrix, H: IntMatrix) -> IntMatrix | None:
    """Basis of Z^r: e_0, lifts of a trace-lattice basis starting at T e_0, then ker T."""
    r = T.cols
    t0 = T.col(0)
    c = solve(H, t0)
    if c is None or (len(c) and gcd(*c) != 1) or not any(c):
        return None
    C = complete_to_unimodular(c)
    Hp = H @ C
    e0 = tuple(1 if i == 0 else 0 for i in range(r))
    cols = [e0]
    for j in range(1, Hp.cols):
        p = solve(T, Hp.col(j))
        if p is None:
            return None
        cols.append(p)
    cols.extend(kernel_basis(T).columns())
    W = IntMatrix.from_columns(cols, rows=r)
    return W if is_unimodular(W) else None


def check_isomorphism_witness(inv1: ElliottInvariant, inv2: ElliottInvariant, verdict: CompareVerdict) -> bool:
    """Re-verify an ISOMORPHIC witness: unimodular, unit to unit, trace preserved."""
    U = verdict.free_witness
    if U is None or not is_unimodular(U):
        return False
    r = inv1.k0.rank
    e0 = tuple(1 if i == 0 else 0 for i in range(r))
    if U.apply(e0) != tuple(inv2.unit[:r]):
        return False
    for j in range(r):
        ej = tuple(1 if i == j else 0 for i in range(r))
        image = U.apply(ej) + (0,) * len(inv2.k0.invariant_factors)
        if inv2.trace_of(image) != inv1.trace[j]:
            return False
    W = verdict.witness
    full_unit = W.apply(inv1.unit)
    if full_unit != inv2.unit:
        return False
    return verdict.k1_witness is not None and is_unimodular(verdict.k1_witness)


def elliott_compare(inv1: ElliottInvariant, inv2: ElliottInvariant) -> CompareVerdict:
    """Decide whether the Elliott invariants are isomorphic, with a witness when they are."""
    if inv1.k0 != inv2.k0:
        return CompareVerdict(CompareKind.NOT_ISOMORPHIC, f"K0 {inv1.k0} vs {inv2.k0}")
    if inv1.k1 != inv2.k1:
        return CompareVerdict(CompareKind.NOT_ISOMORPHIC, f"K1 {inv1.k1} vs {inv2.k1}")
    if inv1.theta.label != inv2.theta.label:
        return CompareVerdict(
            CompareKind.UNDECIDED,
            f"theta labels differ ({inv1.theta.label} vs {inv2.theta.label})",
        )
    denom = lcm(*(t.a.denominator for t in inv1.free_trace + inv2.free_trace),
                *(t.b.denominator for t in inv1.free_trace + inv2.free_trace), 1)
    T1, T2 = _trace_matrix(inv1, denom), _trace_matrix(inv2, denom)
    H1, H2 = image_basis(T1), image_basis(T2)
    if H1 != H2:
        return CompareVerdict(CompareKind.NOT_ISOMORPHIC, "trace images in Z + theta*Z differ")
    if not dense_range(inv1):
        return CompareVerdict(CompareKind.UNDECIDED, "trace range is not dense")
    W1, W2 = _adapted_basis(T1, H1), _adapted_basis(T2, H2)
    if W1 is None or W2 is None:
        return CompareVerdict(CompareKind.UNDECIDED, "the unit's trace is not primitive in the trace image")
    U = W2 @ unimodular_inverse(W1)
    ntor = len(inv1.k0.invariant_factors)
    witness = IntMatrix.block_diag(U, IntMatrix.identity(ntor))
    verdict = CompareVerdict(
        CompareKind.ISOMORPHIC,
        witness=witness,
        free_witness=U,
        torsion_correspondence=tuple((i, i) for i in range(ntor)),
        k1_witness=IntMatrix.identity(inv1.k1.ngens),
    )
    if not check_isomorphism_witness(inv1, inv2, verdict):
        raise AssertionError("constructed Elliott witness failed verification")
    return verdict


# --- prime families --------------------------------------------------------


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, isqrt(p) + 1))


def family_from_primes(primes: Sequence[int]) -> list[tuple[int, int]]:
    """Pairs (p_1...p_k, p_{k+1}...p_r) for k = 0..r."""
    primes = [int(p) for p in primes]
    if not primes:
        raise ValueError("need at least one prime")
    bad = [p for p in primes if not is_prime(p)]
    if bad:
        raise ValueError(f"not prime: {bad}")
    if len(set(primes)) != len(primes):
        raise ValueError(f"primes must be distinct, got {primes}")
    out = []
    for k in range(len(primes) + 1):
        m = n = 1
        for p in primes[:k]:
            m *= p
        for p in primes[k:]:
            n *= p
        out.append((m, n))
    return out


# --- whole-transformation comparison ------------------------------------------


@dataclass(frozen=True)
class TransformationComparison:
    elliott: CompareVerdict
    flip: ConjugacyVerdict | None
    notes: tuple[str, ...] = field(default=())

    @property
    def headline(self) -> str:
        iso = self.elliott.kind is CompareKind.ISOMORPHIC
        if iso and self.flip is not None and self.flip.kind is ConjugacyKind.DISTINCT:
            return "isomorphic C*-algebras, not flip conjugate"
        if iso and self.flip is None:
            return "isomorphic C*-algebras, spaces not homeomorphic"
        if iso:
            return "isomorphic C*-algebras"
        return f"Elliott invariants {self.elliott.kind.value.lower().replace('_', ' ')}"

    def summary(self) -> str:
        flip = self.flip.summary() if self.flip is not None else "NOT COMPUTED (spaces differ)"
        return f"Elliott: {self.elliott.summary()}; Flip-conjugacy: {flip}"


def _space_key(spec: TransformationSpec) -> tuple:
    if isinstance(spec, AffineFurstenbergTorus):
        return ("torus", spec.n)
    return ("sphere_circle", spec.sphere_dim)


def _space_name(spec: TransformationSpec) -> str:
    if isinstance(spec, AffineFurstenbergTorus):
        return f"T^{spec.n}"
    return f"S^{spec.sphere_dim} x S^1"


def compare_transformations(
    spec1: TransformationSpec,
    spec2: TransformationSpec,
    bound: int = DEFAULT_SEARCH_BOUND,
    inv1: ElliottInvariant | None = None,
    inv2: ElliottInvariant | None = None,
) -> TransformationComparison:
    inv1 = inv1 or elliott(spec1)
    inv2 = inv2 or elliott(spec2)
    verdict = elliott_compare(inv1, inv2)
    notes = []
    flip = None
    if _space_key(spec1) != _space_key(spec2):
        d1 = spec1.n if isinstance(spec1, AffineFurstenbergTorus) else spec1.sphere_dim + 1
        d2 = spec2.n if isinstance(spec2, AffineFurstenbergTorus) else spec2.sphere_dim + 1
        why = "dimensions differ" if d1 != d2 else "spaces are not homeomorphic"
        notes.append(
            f"flip conjugacy excluded: {_space_name(spec1)} and {_space_name(spec2)} {why} (reported, not computed)"
        )
    elif isinstance(spec1, AffineFurstenbergTorus):
        flip = flip_conjugacy_verdict(
            furstenberg_degree1_matrix(spec1.exponents),
            furstenberg_degree1_matrix(spec2.exponents),
            bound,
        )
        if flip.kind is ConjugacyKind.DISTINCT:
            notes.append("not flip conjugate; for minimal maps of connected spaces this rules out topological orbit equivalence")
        if spec1.cocycle_perturbed != spec2.cocycle_perturbed:
            notes.append(
                "maps differ by a null-homotopic cocycle; the H^1 action cannot separate them"
            )
    else:
        # H^1(S^d x S^1) = Z and both maps act trivially on it
        notes.append("both maps are homotopic to the identity; H^1 gives no obstruction")
        flip = flip_conjugacy_verdict(IntMatrix.identity(1), IntMatrix.identity(1), bound)
    for inv in (inv1, inv2):
        notes.extend(inv.notes)
    return TransformationComparison(elliott=verdict, flip=flip, notes=tuple(notes))


def torus3(m: int, n: int, theta: ThetaSymbol) -> AffineFurstenbergTorus:
    """h(z1, z2, z3) = (e^{2 pi i theta} z1, z1^m z2, z2^n z3)."""
    return AffineFurstenbergTorus(3, (m, n), theta)
