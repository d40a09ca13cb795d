"""Based root data and Weyl groups as groups of integer matrices.

A Weyl group element is stored as its matrix on the character lattice
X^*(T) (column vectors, ``x -> W @ x``).  The dual action on cocharacters
is the inverse transpose.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .intmat import IntMatrix, Vector, _dot

DEFAULT_CAP = 10**7


class GroupTooLarge(RuntimeError):
    pass


class InvalidRootDatum(ValueError):
    pass


# Cartan matrices, A[i][j] = <alpha_i, alpha_j^vee>, Bourbaki numbering.

def _chain(n: int) -> list[list[int]]:
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for i in range(n - 1):
        A[i][i + 1] = A[i + 1][i] = -1
    return A


def cartan_matrix_of_type(letter: str, n: int) -> list[list[int]]:
    if letter == "A" and n >= 1:
        return _chain(n)
    if letter == "B" and n >= 1:
        A = _chain(n)
        if n >= 2:
            A[n - 2][n - 1] = -2
        return A
    if letter == "C" and n >= 1:
        A = _chain(n)
        if n >= 2:
            A[n - 1][n - 2] = -2
        return A
    if letter == "D" and n >= 2:
        A = _chain(n)
        if n >= 3:
            A[n - 2][n - 1] = A[n - 1][n - 2] = 0
            A[n - 3][n - 1] = A[n - 1][n - 3] = -1
        else:
            A[0][1] = A[1][0] = 0
        return A
    if letter == "E" and n in (6, 7, 8):
        A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(k, k + 1) for k in range(4, n - 1)]
        for i, j in edges:
            A[i][j] = A[j][i] = -1
        return A
    if letter == "F" and n == 4:
        return [[2, -1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
    if letter == "G" and n == 2:
        return [[2, -1], [-3, 2]]
    raise InvalidRootDatum(f"unknown Cartan type {letter}{n}")


_LABEL_PART = re.compile(r"^([A-G])(\d+)$")


def parse_cartan_label(label: str) -> list[tuple[str, int]]:
    """``"B2xG2"`` -> ``[("B", 2), ("G", 2)]``."""
    parts = []
    for tok in label.split("x"):
        m = _LABEL_PART.match(tok.strip())
        if not m:
            raise InvalidRootDatum(f"bad Cartan label {label!r}")
        letter, n = m.group(1), int(m.group(2))
        cartan_matrix_of_type(letter, n)
        parts.append((letter, n))
    return parts


def cartan_matrix_of_label(label: str) -> list[list[int]]:
    blocks = [cartan_matrix_of_type(l, n) for l, n in parse_cartan_label(label)]
    size = sum(len(b) for b in blocks)
    A = [[0] * size for _ in range(size)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            A[off + i][off:off + len(row)] = row
        off += len(b)
    return A


@dataclass(frozen=True)
class BasedRootDatum:
    rank: int
    simple_roots: tuple[Vector, ...]
    simple_coroots: tuple[Vector, ...]
    cartan_label: str | None = None

    @classmethod
    def create(cls, rank, roots, coroots, cartan_label=None, validate=True) -> "BasedRootDatum":
        rd = cls(rank, tuple(tuple(int(a) for a in r) for r in roots),
                 tuple(tuple(int(a) for a in c) for c in coroots), cartan_label)
        if validate:
            rd.validate()
        return rd

    @classmethod
    def empty(cls, rank: int = 0) -> "BasedRootDatum":
        return cls(rank, (), ())

    @property
    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(_pair(a, c) for c in self.simple_coroots) for a in self.simple_roots)

    def validate(self) -> None:
        if len(self.simple_roots) != len(self.simple_coroots):
            raise InvalidRootDatum("need as many coroots as roots")
        for v in self.simple_roots + self.simple_coroots:
            if len(v) != self.rank:
                raise InvalidRootDatum(f"vector {v} does not have length {self.rank}")
        A = self.cartan_matrix
        l = len(A)
        for i in range(l):
            if A[i][i] != 2:
                raise InvalidRootDatum(f"<alpha_{i+1}, alpha_{i+1}^vee> = {A[i][i]} != 2")
            for j in range(l):
                if i == j:
                    continue
                if A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0) or A[i][j] * A[j][i] > 3:
                    raise InvalidRootDatum(f"invalid Cartan entries at ({i+1},{j+1})")
        if self.cartan_label is not None:
            expected = cartan_matrix_of_label(self.cartan_label)
            if [list(r) for r in A] != expected:
                raise InvalidRootDatum(f"pairing matrix does not match type {self.cartan_label}")
        else:
            # finite type iff the root closure is finite
            self._close_roots(cap=100_000)

    def reflection(self, i: int) -> IntMatrix:
        """Matrix of s_i on X^*(T): x -> x - <x, alpha_i^vee> alpha_i."""
        if not 0 <= i < self.semisimple_rank:
            raise IndexError(f"simple reflection index {i} out of range")
        a, c = self.simple_roots[i], self.simple_coroots[i]
        n = self.rank
        return IntMatrix(n, n, tuple(
            tuple(int(r == k) - a[r] * c[k] for k in range(n)) for r in range(n)))

    @cached_property
    def reflections(self) -> tuple[IntMatrix, ...]:
        return tuple(self.reflection(i) for i in range(self.semisimple_rank))

    def _close_roots(self, cap: int) -> frozenset[Vector]:
        seen = set(self.simple_roots)
        queue = deque(self.simple_roots)
        while queue:
            v = queue.popleft()
            for s in self.reflections:
                w = s @ v
                if w not in seen:
                    seen.add(w)
                    if len(seen) > cap:
                        raise InvalidRootDatum("root system is not of finite type")
                    queue.append(w)
        return frozenset(seen)

    @cached_property
    def roots(self) -> frozenset[Vector]:
        return self._close_roots(cap=100_000)

    @cached_property
    def positive_roots(self) -> frozenset[Vector]:
        """Closure of the simple roots under s_i, never applying s_i to alpha_i."""
        seen = set(self.simple_roots)
        queue = deque(self.simple_roots)
        while queue:
            v = queue.popleft()
            for i, s in enumerate(self.reflections):
                if v == self.simple_roots[i]:
                    continue
                w = s @ v
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return frozenset(seen)

    def weyl_word(self, g: IntMatrix) -> tuple[int, ...] | None:
        """A word for ``g`` in the simple reflections, or None if ``g`` is not in W.

        While some simple root is sent to a negative root, multiply on the
        right by that reflection; this lowers the number of positive roots
        made negative.  ``g`` lies in W iff the process ends at the identity.
        """
        pos = self.positive_roots
        if {g @ a for a in self.roots} != set(self.roots):
            return None
        h, word = g, []
        while True:
            i = next((i for i, a in enumerate(self.simple_roots) if h @ a not in pos), None)
            if i is None:
                break
            h = h @ self.reflections[i]
            word.append(i)
            if len(word) > len(pos):
                return None
        if h != IntMatrix.identity(self.rank):
            return None
        return tuple(reversed(word))

    @cached_property
    def coxeter_matrix(self) -> tuple[tuple[int, ...], ...]:
        A = self.cartan_matrix
        m = {0: 2, 1: 3, 2: 4, 3: 6}
        l = len(A)
        return tuple(tuple(1 if i == j else m[A[i][j] * A[j][i]] for j in range(l)) for i in range(l))


def _pair(x: Sequence[int], y: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(x, y))


def simply_connected(label: str) -> BasedRootDatum:
    """Root datum with X^*(T) the weight lattice, in fundamental-weight coordinates."""
    A = cartan_matrix_of_label(label)
    n = len(A)
    coroots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    return BasedRootDatum.create(n, A, coroots, label)


def adjoint(label: str) -> BasedRootDatum:
    """Root datum with X^*(T) the root lattice, in simple-root coordinates."""
    A = cartan_matrix_of_label(label)
    n = len(A)
    roots = [tuple(int(i == j) for i in range(n)) for j in range(n)]
    coroots = [tuple(A[i][j] for i in range(n)) for j in range(n)]
    return BasedRootDatum.create(n, roots, coroots, label)


@dataclass(frozen=True)
class WeylElement:
    matrix: IntMatrix
    word: tuple[int, ...] = ()

    @property
    def key(self) -> tuple:
        return self.matrix.rows


def _sort_key(w: WeylElement):
    return (len(w.word), w.matrix.rows)


def generate_weyl(rd: BasedRootDatum, cap: int = DEFAULT_CAP) -> list[WeylElement]:
    """All elements of W with shortest words, ordered by length then matrix."""
    ident = IntMatrix.identity(rd.rank)
    elems = {ident.rows: WeylElement(ident, ())}
    layer = [elems[ident.rows]]
    n = rd.rank
    # w s_i = w - (w alpha_i) (alpha_i^vee)^T, a rank-one update
    pairs = list(zip(rd.simple_roots, rd.simple_coroots))
    while layer:
        nxt = {}
        for w in sorted(layer, key=_sort_key):
            for i, (a, co) in enumerate(pairs):
                rows = tuple(tuple(x - c * y for x, y in zip(r, co)) if (c := _dot(r, a)) else r
                             for r in w.matrix.rows)
                m = IntMatrix(n, n, rows)
                if m.rows not in elems and m.rows not in nxt:
                    nxt[m.rows] = WeylElement(m, w.word + (i,))
        if len(elems) + len(nxt) > cap:
            raise GroupTooLarge(f"Weyl group has more than {cap} elements; raise the cap to enumerate it")
        elems.update(nxt)
        layer = list(nxt.values())
    return sorted(elems.values(), key=_sort_key)


def weyl_order(rd: BasedRootDatum) -> int:
    """|W| without enumerating W.

    Works in Cartan coordinates (pairings with the simple coroots).  For a
    subset S of simple reflections, |W_S| = |W_S . v| * |W_{S - i}| where v
    pairs positively with alpha_i^vee and trivially with the other coroots
    in S; the stabiliser of such a v is the parabolic subgroup W_{S - i}.
    """
    A = rd.cartan_matrix
    l = len(A)

    def orbit_size(S: list[int], i: int) -> int:
        start = tuple(int(k == i) for k in range(l))
        seen = {start}
        queue = deque([start])
        while queue:
            c = queue.popleft()
            for j in S:
                if c[j]:
                    d = tuple(c[k] - c[j] * A[j][k] for k in range(l))
                    if d not in seen:
                        seen.add(d)
                        queue.append(d)
        return len(seen)

    order = 1
    S = list(range(l))
    while S:
        i = S[-1]
        order *= orbit_size(S, i)
        S.pop()
    return order


@dataclass
class W0Group:
    """The Galois-fixed part of W: elements commuting with sigma on X^*(T)."""

    rd: BasedRootDatum
    generators: list[WeylElement]
    order: int
    _elements: list[WeylElement] | None = None
    cap: int = DEFAULT_CAP

    @property
    def elements(self) -> list[WeylElement]:
        if self._elements is None:
            if self.order > self.cap:
                raise GroupTooLarge(f"W0 has {self.order} > {self.cap} elements")
            self._elements = generate_weyl(self.rd, self.cap)
        return self._elements


def _commutes(a: IntMatrix, b: IntMatrix) -> bool:
    return a @ b == b @ a


def w0_subgroup(rd: BasedRootDatum, sigma: IntMatrix, cap: int = DEFAULT_CAP) -> W0Group:
    n = rd.rank
    if sigma.shape != (n, n) or sigma @ sigma != IntMatrix.identity(n):
        raise InvalidRootDatum("sigma must be an involution of X^*(T)")
    if sigma == -IntMatrix.identity(n):
        gens = [WeylElement(s, (i,)) for i, s in enumerate(rd.reflections)]
        return W0Group(rd, gens, weyl_order(rd), cap=cap)
    if {sigma @ r for r in rd.roots} != set(rd.roots):
        raise InvalidRootDatum("sigma does not permute the roots")
    try:
        W = generate_weyl(rd, cap)
    except GroupTooLarge as exc:
        raise GroupTooLarge(f"{exc}; supply W0 generators through a custom family instead") from exc
    keys = {w.key for w in W}
    for s in rd.reflections:
        if (sigma @ s @ sigma).rows not in keys:
            raise InvalidRootDatum("sigma does not normalise W")
    fixed = [w for w in W if _commutes(w.matrix, sigma)]
    return W0Group(rd, _greedy_generators(fixed), len(fixed), fixed, cap)


def _greedy_generators(elements: list[WeylElement]) -> list[WeylElement]:
    """Small generating set: add elements (in order) not yet in the span."""
    if not elements:
        return []
    n = elements[0].matrix.nrows
    span = {IntMatrix.identity(n).rows}
    gens: list[WeylElement] = []
    for w in elements:
        if w.key in span:
            continue
        gens.append(w)
        frontier = deque(span)
        # re-close under all generators so far
        while frontier:
            x = IntMatrix(n, n, frontier.popleft())
            for g in gens:
                y = (x @ g.matrix).rows
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        if len(span) == len(elements):
            break
    return gens
