"""Floating-point rotation numbers for affine Furstenberg maps.

This is an independent numerical check of the symbolic rule used by
:func:`elliott.crossed.rotation_number`.  For a degree-one K^1 class c on
the n-torus, represented by the unitary z(x) = prod_i zeta_i^{c_i}, it
evaluates z(h^{-1}(x))^* z(x) = exp(2 pi i a(x)) on a low-discrepancy
sample, picks a continuous branch of a, and averages it against Lebesgue
measure (the unique invariant measure).
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np
from scipy.stats import qmc

from .ktheory import furstenberg_degree1_matrix


def inverse_map(x: np.ndarray, exponents: Sequence[int], theta: float,
                perturbation: Callable[[np.ndarray], np.ndarray] | None = None) -> np.ndarray:
    """h^{-1} in angle coordinates (x_i in [0, 1) with zeta_i = e^{2 pi i x_i})."""
    y = np.empty_like(x)
    y[:, 0] = x[:, 0] - theta
    for i, m in enumerate(exponents):
        y[:, i + 1] = x[:, i + 1] - m * y[:, i]
        if i == 0 and perturbation is not None:
            y[:, 1] -= perturbation(y[:, 0])
    return np.mod(y, 1.0)


def forward_map(x: np.ndarray, exponents: Sequence[int], theta: float,
                perturbation: Callable[[np.ndarray], np.ndarray] | None = None) -> np.ndarray:
    y = np.empty_like(x)
    y[:, 0] = x[:, 0] + theta
    for i, m in enumerate(exponents):
        y[:, i + 1] = x[:, i + 1] + m * x[:, i]
        if i == 0 and perturbation is not None:
            y[:, 1] += perturbation(x[:, 0])
    return np.mod(y, 1.0)


def winding_rotation_number(
    odd_class: Sequence[int],
    exponents: Sequence[int],
    theta: float,
    samples: int = 10**6,
    seed: int = 0,
    perturbation: Callable[[np.ndarray], np.ndarray] | None = None,
) -> float:
    """Rotation number in [0, 1) of a fixed degree-one class, by quasi-Monte Carlo."""
    c = np.asarray(odd_class, dtype=np.int64)
    n = len(exponents) + 1
    if c.shape != (n,):
        raise ValueError(f"expected {n} coefficients, got {len(odd_class)}")
    A = furstenberg_degree1_matrix(exponents)
    if A.apply(tuple(int(v) for v in c)) != tuple(int(v) for v in c):
        raise ValueError(f"class {list(odd_class)} is not fixed by h*")

    x = qmc.Halton(d=n, scramble=True, seed=seed).random(samples)
    z = np.exp(2j * np.pi * (x @ c))
    z_back = np.exp(2j * np.pi * (inverse_map(x, exponents, theta, perturbation) @ c))
    raw = np.angle(np.conj(z_back) * z) / (2 * np.pi)
    # continuous branch: stay within half a turn of the first sample
    ref = raw[0]
    a = ref + np.mod(raw - ref + 0.5, 1.0) - 0.5
    return float(np.mod(a.mean(), 1.0))


def circle_distance(s: float, t: float) -> float:
    d = (s - t) % 1.0
    return min(d, 1.0 - d)
