"""Exact integer matrices and the Smith normal form.

Matrices are immutable and store Python ints, so entries never overflow.
Shapes are explicit, which keeps 0-row and 0-column matrices well defined.
"""

from __future__ import annotations

from dataclasses import dataclass
from operator import mul
from typing import Iterable, Sequence

Vector = tuple[int, ...]


@dataclass(frozen=True)
class IntMatrix:
    nrows: int
    ncols: int
    rows: tuple[Vector, ...]

    def __post_init__(self):
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged or mis-shaped integer matrix")

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("column count required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, rows)

    @classmethod
    def from_columns(cls, cols: Iterable[Sequence[int]], nrows: int) -> "IntMatrix":
        cols = [tuple(int(x) for x in c) for c in cols]
        if any(len(c) != nrows for c in cols):
            raise ValueError("column length mismatch")
        return cls(nrows, len(cols), tuple(tuple(c[i] for c in cols) for i in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.ncols)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix(self.ncols, self.nrows, tuple(self.columns()))

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                self.nrows,
                other.ncols,
                tuple(tuple(_dot(r, c) for c in ocols) for r in self.rows),
            )
        other = tuple(other)
        if len(other) != self.ncols:
            raise ValueError("vector length mismatch")
        return tuple(_dot(r, other) for r in self.rows)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        _same_shape(self, other)
        return IntMatrix(self.nrows, self.ncols, tuple(
            tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        _same_shape(self, other)
        return IntMatrix(self.nrows, self.ncols, tuple(
            tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)))

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, tuple(tuple(k * a for a in r) for r in self.rows))

    def hstack(self, *others: "IntMatrix") -> "IntMatrix":
        rows = [list(r) for r in self.rows]
        ncols = self.ncols
        for o in others:
            if o.nrows != self.nrows:
                raise ValueError("hstack row mismatch")
            for i, r in enumerate(o.rows):
                rows[i].extend(r)
            ncols += o.ncols
        return IntMatrix(self.nrows, ncols, tuple(tuple(r) for r in rows))

    def vstack(self, *others: "IntMatrix") -> "IntMatrix":
        rows = list(self.rows)
        for o in others:
            if o.ncols != self.ncols:
                raise ValueError("vstack column mismatch")
            rows.extend(o.rows)
        return IntMatrix(len(rows), self.ncols, tuple(rows))

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        return IntMatrix(len(row_idx), len(col_idx), tuple(
            tuple(self.rows[i][j] for j in col_idx) for i in row_idx))

    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def det(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("determinant of a non-square matrix")
        return bareiss_det([list(r) for r in self.rows])

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(map(mul, a, b))


def _same_shape(a: IntMatrix, b: IntMatrix) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def bareiss_det(m: list[list[int]]) -> int:
    """Fraction-free determinant (Bareiss elimination); mutates ``m``."""
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with ``D`` diagonal and ``diag[0] | diag[1] | ...``.

    ``U_inv`` is carried along so that column spaces can be rebuilt without
    a separate inversion.  ``rank`` counts the nonzero diagonal entries.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    diag: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d != 0)


def smith_normal_form(A: IntMatrix) -> SmithForm:
    m, n = A.shape
    D = [list(r) for r in A.rows]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    Ui = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            for r in Ui:
                r[i], r[j] = r[j], r[i]

    def swap_cols(i, j):
        if i != j:
            for r in D:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        if q:
            D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]
            for r in Ui:
                r[src] -= q * r[dst]

    def add_col(dst, src, q):
        if q:
            for r in D:
                r[dst] += q * r[src]
            for r in V:
                r[dst] += q * r[src]

    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = D[t][t]
            for i in range(t + 1, m):
                add_row(i, t, -(D[i][t] // p))
            for j in range(t + 1, n):
                add_col(j, t, -(D[t][j] // p))
            # pick up any remainder smaller than the pivot
            cand = None
            for i in range(t + 1, m):
                if D[i][t] and (cand is None or abs(D[i][t]) < abs(cand[2])):
                    cand = ("r", i, D[i][t])
            for j in range(t + 1, n):
                if D[t][j] and (cand is None or abs(D[t][j]) < abs(cand[2])):
                    cand = ("c", j, D[t][j])
            if cand is not None:
                if cand[0] == "r":
                    swap_rows(t, cand[1])
                else:
                    swap_cols(t, cand[1])
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if D[t][t] < 0:
            D[t] = [-a for a in D[t]]
            U[t] = [-a for a in U[t]]
            for r in Ui:
                r[t] = -r[t]

    diag = tuple(D[i][i] for i in range(min(m, n)))
    mk = lambda rows, c: IntMatrix(len(rows), c, tuple(tuple(r) for r in rows))
    return SmithForm(mk(U, m), mk(D, n), mk(V, n), mk(Ui, m), diag)


def kernel_basis(A: IntMatrix) -> IntMatrix:
    """Columns forming a Z-basis of {x : A x = 0}."""
    snf = smith_normal_form(A)
    r = snf.rank
    return snf.V.submatrix(range(A.ncols), range(r, A.ncols))


def lattice_basis(gens: IntMatrix) -> IntMatrix:
    """Columns forming a Z-basis of the column span of ``gens``."""
    snf = smith_normal_form(gens)
    cols = []
    for k in range(snf.rank):
        c = snf.U_inv.col(k)
        cols.append(tuple(snf.diag[k] * a for a in c))
    return IntMatrix.from_columns(cols, gens.nrows)


def solve(A: IntMatrix, b: Sequence[int]) -> Vector | None:
    """Some integer ``x`` with ``A x = b``, or ``None`` if none exists."""
    snf = smith_normal_form(A)
    y = snf.U @ b
    x = [0] * A.ncols
    for i, yi in enumerate(y):
        d = snf.diag[i] if i < len(snf.diag) else 0
        if d == 0:
            if yi != 0:
                return None
        elif yi % d:
            return None
        else:
            x[i] = yi // d
    return snf.V @ x


def is_unimodular(A: IntMatrix) -> bool:
    return A.nrows == A.ncols and abs(A.det()) == 1
