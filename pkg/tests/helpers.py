"""Shared generators for randomized tests."""

from __future__ import annotations

import random

from realh1.fgab import FgAbGroup, GammaModule
from realh1.intmat import IntMatrix


def random_unimodular(rng: random.Random, n: int, steps: int = 4, bound: int = 2) -> IntMatrix:
    """A product of random elementary and sign-change operations."""
    rows = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(steps):
        if n == 1 or rng.random() < 0.2:
            i = rng.randrange(n)
            rows[i] = [-a for a in rows[i]]
            continue
        i, j = rng.sample(range(n), 2)
        q = rng.choice([k for k in range(-bound, bound + 1) if k])
        rows[i] = [a + q * b for a, b in zip(rows[i], rows[j])]
    return IntMatrix.from_rows(rows)


def unimodular_inverse(U: IntMatrix) -> IntMatrix:
    from realh1.intmat import solve
    n = U.nrows
    return IntMatrix.from_columns([solve(U, tuple(int(i == j) for i in range(n))) for j in range(n)], n)


def random_involution(rng: random.Random, n: int) -> IntMatrix:
    """U D U^-1 with D a block sum of (1), (-1) and swap blocks."""
    blocks = []
    k = 0
    while k < n:
        if k + 1 < n and rng.random() < 0.35:
            blocks.append("swap")
            k += 2
        else:
            blocks.append(rng.choice([1, -1]))
            k += 1
    D = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        if b == "swap":
            D[k][k + 1] = D[k + 1][k] = 1
            k += 2
        else:
            D[k][k] = b
            k += 1
    U = random_unimodular(rng, n, steps=2, bound=1)
    return U @ IntMatrix.from_rows(D) @ unimodular_inverse(U)


def random_gamma_module(rng: random.Random, max_rank: int = 3, max_entry: int = 4) -> GammaModule:
    """A free module with a random involution, divided by a sigma-stable sublattice."""
    n = rng.randint(1, max_rank)
    sigma = random_involution(rng, n)
    relators = []
    for _ in range(rng.randint(0, n)):
        v = tuple(rng.randint(-max_entry, max_entry) for _ in range(n))
        if any(v):
            relators += [v, sigma @ v]
    return GammaModule(FgAbGroup.from_relators(n, relators), sigma)
