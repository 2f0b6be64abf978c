"""Exact integer linear algebra.

Everything here works on Python ints, so there is no overflow: Smith form
pivots can grow without silently corrupting invariant factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix stored row-major.

    Zero-row and zero-column matrices are legal; they stand for the maps
    to and from the zero group.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        if len(entries) != rows * cols:
            raise ValueError(
                f"expected {rows * cols} entries for a {rows}x{cols} matrix, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [list(r) for r in rows]
        if not rows:
            return cls(0, cols or 0, ())
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), width, (e for r in rows for e in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        columns = [list(c) for c in columns]
        if any(len(c) != rows for c in columns):
            raise ValueError("column length mismatch")
        return cls(rows, len(columns), (columns[j][i] for i in range(rows) for j in range(len(columns))))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, diag: Sequence[int], rows: int | None = None, cols: int | None = None) -> IntMatrix:
        rows = len(diag) if rows is None else rows
        cols = len(diag) if cols is None else cols
        out = [[0] * cols for _ in range(rows)]
        for i, d in enumerate(diag):
            out[i][i] = d
        return cls(rows, cols, (e for r in out for e in r))

    @classmethod
    def block_diag(cls, *blocks: IntMatrix) -> IntMatrix:
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        out = [[0] * cols for _ in range(rows)]
        r0 = c0 = 0
        for b in blocks:
            for i in range(b.rows):
                for j in range(b.cols):
                    out[r0 + i][c0 + j] = b[i, j]
            r0 += b.rows
            c0 += b.cols
        return cls(rows, cols, (e for r in out for e in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(index)
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, (self[i, j] for j in range(self.cols) for i in range(self.rows)))

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(rows), len(cols), (self[i, j] for i in rows for j in cols))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        ocols = other.columns()
        return IntMatrix(
            self.rows,
            other.cols,
            (sum(a * b for a, b in zip(self.row(i), ocols[j])) for i in range(self.rows) for j in range(other.cols)),
        )

    def apply(self, vector: Sequence[int]) -> tuple[int, ...]:
        if len(vector) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(sum(a * b for a, b in zip(self.row(i), vector)) for i in range(self.rows))

    def _elementwise(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(self.rows, self.cols, (op(a, b) for a, b in zip(self.entries, other.entries)))

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, (-a for a in self.entries))

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, (k * a for a in self.entries))

    def __pow__(self, k: int) -> IntMatrix:
        if not self.is_square:
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return unimodular_inverse(self) ** (-k)
        result = IntMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix(0x{self.cols})"


def as_int_matrix(data) -> IntMatrix:
    """Coerce nested sequences (or an IntMatrix) to an IntMatrix, rejecting non-integers."""
    if isinstance(data, IntMatrix):
        return data
    rows = [list(r) for r in data]
    for r in rows:
        for e in r:
            if isinstance(e, bool) or not isinstance(e, int):
                # numpy integer scalars expose __index__
                if not hasattr(e, "__index__"):
                    raise TypeError(f"non-integer entry {e!r}")
    return IntMatrix.from_rows([[int(e) for e in r] for r in rows])


def check_square(M: IntMatrix, what: str = "matrix") -> IntMatrix:
    M = as_int_matrix(M)
    if not M.is_square:
        raise ValueError(f"{what} must be square, got shape {M.shape}")
    return M


def det(M: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    M = check_square(M)
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(M: IntMatrix) -> bool:
    """True iff M is square with determinant +1 or -1."""
    return abs(det(check_square(M))) == 1


# --- Smith normal form ------------------------------------------------------


@dataclass(frozen=True)
class SmithDecomposition:
    """``M == U @ D @ V`` with U, V unimodular and D in Smith form.

    ``U_inv`` and ``V_inv`` are carried along so callers never have to
    invert: ``U_inv @ M @ V_inv == D``.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.D[i, i] for i in range(min(self.D.rows, self.D.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nonzero diagonal entries different from 1."""
        return tuple(d for d in self.diagonal if d > 1)


class _Tracker:
    """Mutable working copy of a matrix together with the four transforms."""

    def __init__(self, M: IntMatrix):
        self.a = M.to_rows()
        self.r, self.c = M.rows, M.cols
        # P @ M @ Q = a;  U = P^{-1}, V = Q^{-1}
        self.P = IntMatrix.identity(self.r).to_rows()
        self.U = IntMatrix.identity(self.r).to_rows()
        self.Q = IntMatrix.identity(self.c).to_rows()
        self.V = IntMatrix.identity(self.c).to_rows()

    # row_i += k * row_j
    def add_row(self, i: int, j: int, k: int) -> None:
        if not k:
            return
        for rows in (self.a, self.P):
            ri, rj = rows[i], rows[j]
            for t in range(len(ri)):
                ri[t] += k * rj[t]
        for row in self.U:  # col_j -= k * col_i
            row[j] -= k * row[i]

    def swap_rows(self, i: int, j: int) -> None:
        if i == j:
            return
        for rows in (self.a, self.P):
            rows[i], rows[j] = rows[j], rows[i]
        for row in self.U:
            row[i], row[j] = row[j], row[i]

    def negate_row(self, i: int) -> None:
        for rows in (self.a, self.P):
            rows[i] = [-x for x in rows[i]]
        for row in self.U:
            row[i] = -row[i]

    # col_i += k * col_j
    def add_col(self, i: int, j: int, k: int) -> None:
        if not k:
            return
        for rows in (self.a, self.Q):
            for row in rows:
                row[i] += k * row[j]
        vi, vj = self.V[i], self.V[j]  # row_j -= k * row_i
        for t in range(len(vj)):
            vj[t] -= k * vi[t]

    def swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for rows in (self.a, self.Q):
            for row in rows:
                row[i], row[j] = row[j], row[i]
        self.V[i], self.V[j] = self.V[j], self.V[i]


def _nearest_quotient(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if 2 * abs(r) > abs(b):
        q += 1 if (r > 0) == (b > 0) else -1
    return q


def snf(M) -> SmithDecomposition:
    """Smith normal form with transforms.

    Pivots are chosen by minimal absolute value to keep coefficients
    small.  The diagonal is nonnegative with d_i | d_{i+1}; zeros trail.
    """
    M = as_int_matrix(M)
    w = _Tracker(M)
    a = w.a
    r, c = w.r, w.c
    t = 0
    while t < min(r, c):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        w.swap_rows(t, best[0])
        w.swap_cols(t, best[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, r):
                if a[i][t]:
                    w.add_row(i, t, -_nearest_quotient(a[i][t], p))
            for j in range(t + 1, c):
                if a[t][j]:
                    w.add_col(j, t, -_nearest_quotient(a[t][j], p))
            rest = [(i, t) for i in range(t + 1, r) if a[i][t]] + [(t, j) for j in range(t + 1, c) if a[t][j]]
            if rest:
                i, j = min(rest, key=lambda ij: abs(a[ij[0]][ij[1]]))
                if abs(a[i][j]) < abs(p):
                    w.swap_rows(t, i)
                    w.swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            w.add_row(t, bad, 1)
        if a[t][t] < 0:
            w.negate_row(t)
        t += 1

    def mk(rows, n_rows, n_cols):
        return IntMatrix(n_rows, n_cols, (e for row in rows for e in row))

    return SmithDecomposition(
        U=mk(w.U, r, r),
        D=mk(a, r, c),
        V=mk(w.V, c, c),
        U_inv=mk(w.P, r, r),
        V_inv=mk(w.Q, c, c),
    )


def invariant_factors(M) -> tuple[int, ...]:
    """Full Smith diagonal (length min(rows, cols)), including 1s and trailing 0s."""
    return snf(M).diagonal


def rank(M) -> int:
    return snf(M).rank


# --- finitely generated abelian groups ---------------------------------------


@dataclass(frozen=True)
class FgAbGroup:
    """Z^rank + Z/d_1 + ... + Z/d_k with 2 <= d_1 | d_2 | ... | d_k.

    Construction normalizes, so structural equality is group isomorphism.
    """

    rank: int = 0
    invariant_factors: tuple[int, ...] = ()

    def __post_init__(self):
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        factors = _normalize_torsion(self.invariant_factors)
        object.__setattr__(self, "invariant_factors", factors)

    @classmethod
    def from_orders(cls, rank: int, orders: Iterable[int]) -> FgAbGroup:
        """Group Z^rank + sum of Z/n for arbitrary cyclic orders n (0 means Z)."""
        orders = [abs(int(n)) for n in orders]
        extra = sum(1 for n in orders if n == 0)
        return cls(rank + extra, tuple(n for n in orders if n))

    @property
    def torsion(self) -> FgAbGroup:
        return FgAbGroup(0, self.invariant_factors)

    @property
    def torsion_order(self) -> int:
        return reduce(lambda x, y: x * y, self.invariant_factors, 1)

    @property
    def ngens(self) -> int:
        return self.rank + len(self.invariant_factors)

    def is_free(self) -> bool:
        return not self.invariant_factors

    def __add__(self, other: FgAbGroup) -> FgAbGroup:
        return FgAbGroup.from_orders(self.rank + other.rank, self.invariant_factors + other.invariant_factors)

    def __str__(self) -> str:
        parts = []
        if self.rank == 1:
            parts.append("Z")
        elif self.rank > 1:
            parts.append(f"Z^{self.rank}")
        parts.extend(f"Z/{d}" for d in self.invariant_factors)
        return " + ".join(parts) if parts else "0"


def _normalize_torsion(orders: Iterable[int]) -> tuple[int, ...]:
    """Invariant-factor chain of a direct sum of finite cyclic groups."""
    orders = [abs(int(n)) for n in orders]
    if any(n == 0 for n in orders):
        raise ValueError("torsion orders must be nonzero")
    orders = [n for n in orders if n > 1]
    if all(orders[i] % orders[i - 1] == 0 for i in range(1, len(orders))):
        return tuple(orders)
    return tuple(d for d in snf(IntMatrix.diagonal(orders)).diagonal if d > 1)


# --- cokernels, kernels, solving -------------------------------------------


@dataclass(frozen=True)
class CokernelMap:
    """Coordinates on coker(M) = Z^rows / M Z^cols.

    Generators are ordered free first, then torsion by increasing order.
    ``projection`` sends x in Z^rows to coordinates (reduce torsion ones
    with :meth:`project`); column i of ``lifts`` is a representative of
    generator i.
    """

    projection: IntMatrix
    lifts: IntMatrix
    moduli: tuple[int, ...]

    def project(self, x: Sequence[int]) -> tuple[int, ...]:
        y = self.projection.apply(x)
        return tuple(v % m if m else v for v, m in zip(y, self.moduli))


def cokernel(M) -> tuple[FgAbGroup, CokernelMap]:
    """Canonical form of coker(M) plus the coordinate change onto it."""
    M = as_int_matrix(M)
    dec = snf(M)
    diag = list(dec.diagonal) + [0] * (M.rows - min(M.rows, M.cols))
    free = [i for i, d in enumerate(diag) if d == 0]
    tors = [i for i, d in enumerate(diag) if d > 1]
    order = free + tors
    projection = dec.U_inv.submatrix(order, range(dec.U_inv.cols))
    lifts = dec.U.submatrix(range(dec.U.rows), order)
    moduli = tuple(diag[i] for i in order)
    group = FgAbGroup(len(free), tuple(diag[i] for i in tors))
    return group, CokernelMap(projection=projection, lifts=lifts, moduli=moduli)


def hermite_rows(B) -> IntMatrix:
    """Row-style Hermite normal form of the row lattice of B, zero rows dropped.

    Pivots are positive, strictly increasing in column, and entries above
    each pivot are reduced into [0, pivot).
    """
    B = as_int_matrix(B)
    a = B.to_rows()
    ncols = B.cols
    out: list[list[int]] = []
    col = 0
    while a and col < ncols:
        nz = [row for row in a if row[col]]
        if not nz:
            col += 1
            continue
        others = [row for row in a if not row[col]]
        while len(nz) > 1:
            nz.sort(key=lambda row: abs(row[col]))
            p = nz[0]
            nxt = [p]
            for row in nz[1:]:
                q = row[col] // p[col]
                row = [x - q * y for x, y in zip(row, p)]
                (nxt if row[col] else others).append(row)
            nz = nxt
        pivot = nz[0]
        if pivot[col] < 0:
            pivot = [-x for x in pivot]
        for prev in out:
            q = prev[col] // pivot[col]
            if q:
                for t in range(ncols):
                    prev[t] -= q * pivot[t]
        out.append(pivot)
        a = [row for row in others if any(row)]
        col += 1
    return IntMatrix.from_rows(out, cols=ncols)


def kernel_basis(M) -> IntMatrix:
    """Columns form a saturated Z-basis of {x : M x = 0}, in Hermite form."""
    M = as_int_matrix(M)
    dec = snf(M)
    k = dec.rank
    raw = dec.V_inv.submatrix(range(M.cols), range(k, M.cols))
    if raw.cols == 0:
        return IntMatrix.zeros(M.cols, 0)
    return hermite_rows(raw.transpose()).transpose()


def image_basis(M) -> IntMatrix:
    """Columns form a Hermite-normalized Z-basis of the column lattice of M."""
    M = as_int_matrix(M)
    H = hermite_rows(M.transpose())
    if H.rows == 0:
        return IntMatrix.zeros(M.rows, 0)
    return H.transpose()


def solve(M, b: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer x with M x = b, or None when no integer solution exists."""
    M = as_int_matrix(M)
    if len(b) != M.rows:
        raise ValueError("right-hand side length mismatch")
    dec = snf(M)
    c = dec.U_inv.apply(b)
    diag = dec.diagonal
    y = [0] * M.cols
    for i, ci in enumerate(c):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if ci:
                return None
        else:
            if ci % d:
                return None
            y[i] = ci // d
    return dec.V_inv.apply(y)


def unimodular_inverse(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular matrix."""
    M = check_square(M)
    dec = snf(M)
    if any(d != 1 for d in dec.diagonal):
        raise ValueError("matrix is not unimodular")
    # M = U V  =>  M^{-1} = V^{-1} U^{-1}
    return dec.V_inv @ dec.U_inv


def complete_to_unimodular(v: Sequence[int]) -> IntMatrix:
    """A unimodular matrix whose first column is the primitive vector v."""
    v = list(v)
    if not v:
        raise ValueError("empty vector")
    if reduce(gcd, v, 0) != 1:
        raise ValueError(f"vector {v} is not primitive")
    dec = snf(IntMatrix.from_columns([v], rows=len(v)))
    # v = U @ D @ V with D = e_1 and V = [s], s = +-1
    s = dec.V[0, 0]
    rows = dec.U.to_rows()
    for row in rows:
        row[0] *= s
    return IntMatrix.from_rows(rows)


def lattice_index(sub, ambient) -> int | None:
    """Index of the column lattice of ``sub`` inside that of ``ambient``.

    ``ambient`` must have independent columns.  Returns None when the
    index is infinite; raises if ``sub`` is not contained in ``ambient``.
    """
    sub, ambient = as_int_matrix(sub), as_int_matrix(ambient)
    coords = []
    for col in sub.columns():
        x = solve(ambient, col)
        if x is None:
            raise ValueError("sublattice is not contained in the ambient lattice")
        coords.append(x)
    if ambient.cols == 0:
        return 1
    X = IntMatrix.from_columns(coords, rows=ambient.cols)
    dec = snf(X)
    if dec.rank < ambient.cols:
        return None
    return reduce(lambda x, y: x * y, dec.diagonal[: ambient.cols], 1)
