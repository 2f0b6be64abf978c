"""Parameters of the smooth cocycle r(t) = sum_k beta_k e^{2 pi i n_k t} on the 2-torus.

nu_1 = 1, nu_{k+1} = 2^{nu_k} + nu_k + 1, n_k = sgn(k) 2^{nu_|k|},
theta = sum_k 2^{-nu_k}, beta_k = (e^{2 pi i n_k theta} - 1) / |k|.

All quantities are exact rationals or integers.  n_4 = 2^{nu_4} already
has about two million binary digits, so depths beyond 4 are refused.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .ktheory import ThetaSymbol

MAX_DEPTH = 4


def nu_sequence(K: int) -> list[int]:
    nu = [1]
    while len(nu) < K:
        prev = nu[-1]
        nu.append(2**prev + prev + 1)
    return nu[:K]


def theta_partial(K: int) -> Fraction:
    return sum((Fraction(1, 2**v) for v in nu_sequence(K)), Fraction(0))


def theta_symbol(K: int = 3, label: str = "theta") -> ThetaSymbol:
    """Interval [theta_K, theta_K + 2^{1 - nu_{K+1}}] that provably contains theta."""
    if not 1 <= K < MAX_DEPTH:
        raise ValueError(f"depth must be in [1, {MAX_DEPTH - 1}] for an enclosure")
    nu = nu_sequence(K + 1)
    lo = theta_partial(K)
    return ThetaSymbol(label, lo, lo + Fraction(2, 2 ** nu[K]))


def fubini(m: int) -> int:
    """Ordered Bell number a(m), with a(0) = 1 and a(m) = sum_k C(m, k) a(m - k)."""
    a = [1]
    for j in range(1, m + 1):
        a.append(sum(comb(j, k) * a[j - k] for k in range(1, j + 1)))
    return a[m]


def dominating_sum_limit(m: int) -> Fraction:
    """Exact value of sum_{n>=1} n^m / 2^n."""
    return Fraction(1) if m == 0 else Fraction(2 * fubini(m))


def dominating_partials(m: int, terms: int) -> list[Fraction]:
    """Partial sums of sum_{n=1}^N n^m / 2^n for N = 1..terms."""
    out = []
    s = Fraction(0)
    for n in range(1, terms + 1):
        s += Fraction(n**m, 2**n)
        out.append(s)
    return out


def derivative_bound_prefactor(m: int) -> float:
    """2 (2 pi)^{m+1}, the factor in front of sum n^m / 2^n bounding the m-th derivative series."""
    return 2 * (2 * math.pi) ** (m + 1)


def beta_bound_certificate(K: int) -> list[dict]:
    """Check |beta_k| <= 2 pi 2^{-|n_k|} / |k| for 1 <= |k| <= K, exactly.

    The fractional part of n_k theta is 2^{nu_k} sum_{j>k} 2^{-nu_j}, which
    is at most 2^{nu_k + 1 - nu_{k+1}} = 2^{-n_k}; with |e^{2 pi i x} - 1| <=
    2 pi |x| this gives the bound.  beta_{-k} is the conjugate of beta_k, so
    negative k are covered too.
    """
    nu = nu_sequence(K + 1)
    theta = theta_partial(min(K + 1, 3))
    rows = []
    for k in range(1, K + 1):
        nk = 2 ** nu[k - 1]
        exponent = nu[k - 1] + 1 - nu[k]
        row = {"k": k, "frac_exponent_bound": exponent, "ok": exponent <= -nk}
        if nk < 64:
            # direct floating check where the numbers are representable
            frac = (nk * theta) % 1
            beta = 2 * abs(math.sin(math.pi * float(frac))) / k
            bound = 2 * math.pi * 2.0**-nk / k
            row.update(n_k=nk, beta_abs=beta, bound=bound, ok=row["ok"] and beta <= bound)
        rows.append(row)
    return rows


@dataclass(frozen=True)
class RouhaniParameters:
    depth: int
    nu: tuple[int, ...]
    n: tuple[int, ...]
    theta_partial: Fraction
    beta_bound_ok: bool
    beta_rows: tuple[dict, ...]
    derivative_partials: tuple[tuple[Fraction, ...], ...]

    def tail(self, m: int, N: int) -> Fraction:
        """Exact remainder sum_{n > N} n^m / 2^n."""
        return dominating_sum_limit(m) - self.derivative_partials[m][N - 1]


def rouhani_parameters(K: int, max_order: int = 6, terms: int = 60) -> RouhaniParameters:
    """Recurrence values, theta partial sum, beta bound check and dominating partial sums."""
    if K < 1:
        raise ValueError(f"depth must be >= 1, got {K}")
    if K > MAX_DEPTH:
        raise ValueError(f"depth {K} is impractical; nu_{K + 1} is astronomically large")
    nu = nu_sequence(K)
    rows = beta_bound_certificate(K)
    return RouhaniParameters(
        depth=K,
        nu=tuple(nu),
        n=tuple(2**v for v in nu),
        theta_partial=theta_partial(K),
        beta_bound_ok=all(r["ok"] for r in rows),
        beta_rows=tuple(rows),
        derivative_partials=tuple(tuple(dominating_partials(m, terms)) for m in range(max_order + 1)),
    )
