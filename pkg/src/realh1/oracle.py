"""Independent oracles for cross-checking the engine.

Nothing here calls the Smith normal form or the orbit engine.  Module
elements are reduced with a naive echelon form of a lattice, cohomology
classes are counted by enumeration, orbits of a full group are merged by
union-find, and form classifications are counted from signatures.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Any, Sequence


class OracleBoundsExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    value: Any
    method: str
    cost: float


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _echelon(relators: Sequence[Sequence[int]], n: int) -> dict[int, list[int]]:
    """Row echelon basis of the relation lattice: leading column -> row, leading entry > 0."""
    rows = [list(r) for r in relators if any(r)]
    pivots: dict[int, list[int]] = {}
    for c in range(n):
        active = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[c]))
            p = active[0]
            nxt = [p]
            for r in active[1:]:
                q = r[c] // p[c]
                r = [a - q * b for a, b in zip(r, p)]
                (nxt if r[c] else rest).append(r)
            active = nxt
        if active:
            p = active[0]
            if p[c] < 0:
                p = [-a for a in p]
            pivots[c] = p
        rows = [r for r in rest if any(r)]
    return pivots


def _reducer(pivots: dict[int, list[int]], n: int):
    order = sorted(pivots)

    def reduce(v):
        v = list(v)
        for c in order:
            row = pivots[c]
            q = v[c] // row[c]
            if q:
                v = [a - q * b for a, b in zip(v, row)]
        return tuple(v)

    return reduce


def _matvec(m: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def brute_h1_gamma(relators: Sequence[Sequence[int]], ambient_rank: int, sigma: Sequence[Sequence[int]],
                   box: int = 4, max_points: int = 400_000) -> OracleResult:
    """|ker(1 + sigma) / im(sigma - 1)| by enumeration.

    Elements of M = Z^n / R are enumerated as canonical vectors: pivot
    coordinates of the echelon basis of R in [0, pivot), the others in
    [-b, b].  Each one in ker(1 + sigma) is reduced modulo the lattice
    L = im(sigma - 1) + R by a second echelon basis, and the distinct
    reduced vectors are counted.  The half-width b starts at ``box`` and
    grows until two successive enlargements find no new class; the count
    is a lower bound that is exact once the box reaches every class.
    """
    t0 = time.perf_counter()
    n = ambient_rank
    pivots = _echelon(relators, n)
    reduce_R = _reducer(pivots, n)
    moves = [tuple(sigma[i][j] - int(i == j) for i in range(n)) for j in range(n)]
    reduce_L = _reducer(_echelon(list(relators) + moves, n), n)
    free = [c for c in range(n) if c not in pivots]
    torsion = 1
    for c in pivots:
        torsion *= pivots[c][c]
    norm = [[int(i == j) + sigma[i][j] for j in range(n)] for i in range(n)]
    zero = tuple([0] * n)

    def count(b: int) -> int | None:
        if (2 * b + 1) ** len(free) * torsion > max_points:
            return None
        ranges = [range(pivots[c][c]) if c in pivots else range(-b, b + 1) for c in range(n)]
        return len({reduce_L(v) for v in itertools.product(*ranges)
                    if reduce_R(_matvec(norm, v)) == zero})

    counts = [count(box)]
    if counts[0] is None:
        raise OracleBoundsExceeded(f"free rank {len(free)}, torsion size {torsion}")
    b = box
    while len(free) and not (len(counts) >= 3 and counts[-1] == counts[-2] == counts[-3]):
        b *= 2
        c = count(b)
        if c is None:
            break
        counts.append(c)
    return OracleResult(counts[-1], "enumeration+echelon", time.perf_counter() - t0)


def brute_orbits_full_group(dim: int, elements: Sequence[tuple[Sequence[Sequence[int]], Sequence[int]]],
                            cap: int = 10**4) -> OracleResult:
    """Orbit partition from applying every group element to every point.

    ``elements`` lists ``(L, d)`` for each element of the group.  Returns
    the sorted list of orbits, each a sorted tuple of 0/1 strings.  A point
    is stored as an int whose bit k is coordinate k; row i of L is the mask
    of the coordinates that feed output coordinate i.
    """
    t0 = time.perf_counter()
    if len(elements) > cap:
        raise OracleBoundsExceeded(f"{len(elements)} group elements > {cap}")
    size = 1 << dim
    uf = _UnionFind(size)
    for L, d in elements:
        rows = [sum(bit << k for k, bit in enumerate(row)) for row in L]
        dmask = sum((bit & 1) << k for k, bit in enumerate(d))
        for x in range(size):
            y = dmask
            for i, r in enumerate(rows):
                if (r & x).bit_count() & 1:
                    y ^= 1 << i
            uf.union(x, y)
    orbits: dict[int, list[str]] = {}
    for x in range(size):
        orbits.setdefault(uf.find(x), []).append("".join(str((x >> k) & 1) for k in range(dim)))
    part = sorted(tuple(sorted(o)) for o in orbits.values())
    return OracleResult(part, "full-group+union-find", time.perf_counter() - t0)


def _signatures(n: int):
    return [(n - q, q) for q in range(n + 1)]


def classification_count(family: str, **params) -> OracleResult:
    """Number of isomorphism classes of the forms that H^1 classifies.

    hermitian(n)                -- Hermitian forms of rank n: U(n)
    hermitian-det1(n, q)        -- rank n with negative index of parity q: SU(p, q)
    quadratic-odd(m)            -- dim 2m+1 with discriminant fixed: SO(2m+1)
    quadratic-even(m)           -- dim 2m with discriminant fixed: SO(2m)
    quaternionic-hermitian(n)   -- rank n: Sp(n), Sp(p, q)
    symplectic(n), sl(n)        -- a single class
    power-sign(k)               -- R^x / (R^x)^k, i.e. H^1 of mu_k or of {det^k = 1} in GL_n
    torus(kind)                 -- Gm (Hilbert 90), U1 ({+-1}), RCGm (Shapiro)
    """
    t0 = time.perf_counter()
    if family == "hermitian":
        value = len(_signatures(params["n"]))
    elif family == "hermitian-det1":
        value = sum(1 for p, q in _signatures(params["n"]) if q % 2 == params.get("q", 0) % 2)
    elif family == "quadratic-odd":
        value = sum(1 for p, q in _signatures(2 * params["m"] + 1) if q % 2 == 0)
    elif family == "quadratic-even":
        value = sum(1 for p, q in _signatures(2 * params["m"]) if q % 2 == 0)
    elif family == "quaternionic-hermitian":
        value = len(_signatures(params["n"]))
    elif family in ("symplectic", "sl"):
        value = 1
    elif family == "power-sign":
        kth_powers = {s ** params["k"] for s in (1, -1)}
        value = 2 // len(kth_powers)
    elif family == "torus":
        value = {"Gm": 1, "U1": 2, "RCGm": 1}[params["kind"]]
    else:
        raise KeyError(f"unknown classification family {family!r}")
    return OracleResult(value, "signature-count", time.perf_counter() - t0)
