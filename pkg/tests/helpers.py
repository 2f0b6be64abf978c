"""Shared random generators for the tests."""

import random

from elliott.zlinalg import IntMatrix


def random_unimodular(rng: random.Random, n: int, steps: int = 8, bound: int | None = None) -> IntMatrix:
    """Product of random elementary matrices; with ``bound``, entries stay within it."""
    while True:
        M = IntMatrix.identity(n)
        for _ in range(steps):
            E = [[int(a == b) for b in range(n)] for a in range(n)]
            if n > 1 and rng.random() < 0.8:
                i, j = rng.sample(range(n), 2)
                E[i][j] = rng.choice([-2, -1, 1, 2])
            else:
                i = rng.randrange(n)
                E[i][i] = -1
            nxt = IntMatrix.from_rows(E) @ M
            if bound is not None and max(abs(x) for row in nxt.to_rows() for x in row) > bound:
                continue
            M = nxt
        return M
