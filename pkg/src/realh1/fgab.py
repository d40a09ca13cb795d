"""Finitely generated abelian groups with an involution, and their H^1.

A group is presented as ``Z^n / (column span of relations)``.  Elements are
integer vectors of length ``n``; two vectors are the same element when their
difference lies in the relation lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .intmat import IntMatrix, SmithForm, Vector, kernel_basis, lattice_basis, smith_normal_form, solve


class IllDefinedMap(ValueError):
    """A matrix that does not descend to the quotient groups."""


class NotACocycle(ValueError):
    pass


@dataclass(frozen=True)
class FgAbGroup:
    ambient_rank: int
    relations: IntMatrix  # ambient_rank x k, columns are relators

    def __post_init__(self):
        if self.relations.nrows != self.ambient_rank:
            raise ValueError("relation vectors must have length ambient_rank")

    @classmethod
    def free(cls, n: int) -> "FgAbGroup":
        return cls(n, IntMatrix.zeros(n, 0))

    @classmethod
    def from_relators(cls, n: int, relators: Sequence[Sequence[int]]) -> "FgAbGroup":
        return cls(n, IntMatrix.from_columns(relators, n))

    @classmethod
    def cyclic(cls, *orders: int) -> "FgAbGroup":
        """``Z/d_1 + Z/d_2 + ...`` with ``d = 0`` meaning a copy of Z."""
        n = len(orders)
        rels = [tuple(d if i == j else 0 for i in range(n)) for j, d in enumerate(orders) if d != 0]
        return cls.from_relators(n, rels)

    @cached_property
    def _snf(self) -> SmithForm:
        return smith_normal_form(self.relations)

    @cached_property
    def invariant_factors(self) -> tuple[int, ...]:
        """Torsion invariant factors ``d_1 | d_2 | ...`` (units dropped), then one 0 per free summand."""
        snf = self._snf
        tors = tuple(d for d in snf.diag if d > 1)
        return tors + (0,) * (self.ambient_rank - snf.rank)

    @property
    def free_rank(self) -> int:
        return self.ambient_rank - self._snf.rank

    def smith_coordinates(self, v: Sequence[int]) -> Vector:
        """Coordinates of ``v`` in the Smith basis, torsion parts reduced."""
        snf = self._snf
        y = list(snf.U @ tuple(v))
        for i in range(snf.rank):
            y[i] %= snf.diag[i]
        return tuple(y)

    def canonical(self, v: Sequence[int]) -> Vector:
        """A representative of ``v`` that depends only on its class."""
        return self._snf.U_inv @ self.smith_coordinates(v)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.smith_coordinates(v))

    def equal(self, v: Sequence[int], w: Sequence[int]) -> bool:
        return self.is_zero(tuple(a - b for a, b in zip(v, w)))

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def __str__(self) -> str:
        if self.is_trivial():
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors)


@dataclass(frozen=True)
class GroupHom:
    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix  # target.ambient_rank x source.ambient_rank
    check: bool = field(default=True, compare=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.ambient_rank, self.source.ambient_rank):
            raise ValueError(f"hom matrix has shape {self.matrix.shape}")
        if self.check:
            for r in self.source.relations.columns():
                if not self.target.is_zero(self.matrix @ r):
                    raise IllDefinedMap(f"relator {r} is not mapped to zero")

    def __call__(self, v: Sequence[int]) -> Vector:
        return self.matrix @ tuple(v)

    def compose(self, inner: "GroupHom") -> "GroupHom":
        """``self o inner``."""
        return GroupHom(inner.source, self.target, self.matrix @ inner.matrix)

    def equals(self, other: "GroupHom") -> bool:
        return all(self.target.equal(a, b) for a, b in
                   zip(self.matrix.columns(), other.matrix.columns()))


def identity_hom(g: FgAbGroup) -> GroupHom:
    return GroupHom(g, g, IntMatrix.identity(g.ambient_rank), check=False)


def _preimage_lattice(F: IntMatrix, target: FgAbGroup) -> IntMatrix:
    """Basis of ``{x : F x in relation lattice of target}``."""
    n = F.ncols
    ker = kernel_basis(F.hstack(-target.relations))
    proj = ker.submatrix(range(n), range(ker.ncols))
    return lattice_basis(proj)


def kernel(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """The kernel of ``h`` together with its inclusion into ``h.source``."""
    B = _preimage_lattice(h.matrix, h.target)
    rels = _preimage_lattice(B, h.source)
    K = FgAbGroup(B.ncols, rels)
    return K, GroupHom(K, h.source, B)


def image(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    rels = _preimage_lattice(h.matrix, h.target)
    I = FgAbGroup(h.source.ambient_rank, rels)
    return I, GroupHom(I, h.target, h.matrix)


def cokernel(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """The cokernel of ``h`` with the canonical quotient map from ``h.target``."""
    m = h.target.ambient_rank
    C = FgAbGroup(m, h.target.relations.hstack(h.matrix))
    return C, GroupHom(h.target, C, IntMatrix.identity(m), check=False)


def express_in(gens: IntMatrix, group: FgAbGroup, v: Sequence[int]) -> Vector | None:
    """Integer ``c`` with ``gens @ c == v`` in ``group``, or None."""
    sol = solve(gens.hstack(group.relations), v)
    return None if sol is None else sol[: gens.ncols]


@dataclass(frozen=True)
class GammaModule:
    """A f.g. abelian group with an action of Gal(C/R), i.e. an involution."""

    group: FgAbGroup
    sigma: IntMatrix

    def __post_init__(self):
        GroupHom(self.group, self.group, self.sigma)  # raises IllDefinedMap
        n = self.group.ambient_rank
        sq = self.sigma @ self.sigma
        for j in range(n):
            e = tuple(int(i == j) for i in range(n))
            if not self.group.equal(sq @ e, e):
                raise ValueError("sigma is not an involution")

    @property
    def rank(self) -> int:
        return self.group.ambient_rank

    @cached_property
    def norm(self) -> IntMatrix:
        return IntMatrix.identity(self.rank) + self.sigma

    @cached_property
    def twist(self) -> IntMatrix:
        return self.sigma - IntMatrix.identity(self.rank)

    def commutes_with(self, f: IntMatrix) -> bool:
        a, b = f @ self.sigma, self.sigma @ f
        return all(self.group.equal(x, y) for x, y in zip(a.columns(), b.columns()))


class F2Space:
    """H^1(Gal(C/R), M) = ker(1 + sigma) / im(sigma - 1) as a vector space over F_2.

    ``basis_lifts[i]`` is an element of ker(1 + sigma) whose class is the
    i-th basis vector; ``reduce`` maps any element of ker(1 + sigma) to its
    coordinate vector.
    """

    def __init__(self, module: GammaModule):
        self.module = module
        grp = module.group
        n = grp.ambient_rank
        self._K = _preimage_lattice(module.norm, grp)  # spans ker(1+sigma), contains relations
        k = self._K.ncols
        # c ~ 0 iff K c in im(sigma-1) + relations
        ker = kernel_basis(self._K.hstack(-module.twist, -grp.relations))
        rel = lattice_basis(ker.submatrix(range(k), range(ker.ncols)))
        self._snf = smith_normal_form(rel)
        if self._snf.rank != k or any(d not in (1, 2) for d in self._snf.diag):
            raise ArithmeticError(f"H^1 is not elementary abelian: {self._snf.diag}")
        self._two = [i for i, d in enumerate(self._snf.diag) if d == 2]
        self.basis_lifts: list[Vector] = [
            grp.canonical(self._K @ self._snf.U_inv.col(i)) for i in self._two]
        assert all(len(b) == n for b in self.basis_lifts)

    @property
    def dimension(self) -> int:
        return len(self._two)

    def in_kernel(self, m: Sequence[int]) -> bool:
        return self.module.group.is_zero(self.module.norm @ tuple(m))

    def reduce(self, m: Sequence[int], check: bool = True) -> tuple[int, ...]:
        if check and not self.in_kernel(m):
            raise ValueError(f"{tuple(m)} is not in ker(1 + sigma)")
        if not hasattr(self, "_solver"):
            self._solver = smith_normal_form(self._K.hstack(self.module.group.relations))
        snf = self._solver
        y = snf.U @ tuple(m)
        x = [0] * snf.V.nrows
        for i, d in enumerate(snf.diag):
            if d:
                assert y[i] % d == 0
                x[i] = y[i] // d
        c = (snf.V @ x)[: self._K.ncols]
        y = self._snf.U @ c
        return tuple(y[i] % 2 for i in self._two)


def h1_gamma(M: GammaModule) -> F2Space:
    return F2Space(M)


def h1_functorial(src: F2Space, f: IntMatrix, tgt: F2Space | None = None,
                  check: bool = True) -> tuple[tuple[int, ...], ...]:
    """Matrix over F_2 (row-major, ``dim tgt x dim src``) of the map induced by ``f``.

    ``check=False`` skips the well-definedness and equivariance checks, for
    callers that already know ``f`` is a product of checked maps.
    """
    tgt = tgt or src
    Ms, Mt = src.module, tgt.module
    if check:
        GroupHom(Ms.group, Mt.group, f)
        a, b = f @ Ms.sigma, Mt.sigma @ f
        if not all(Mt.group.equal(x, y) for x, y in zip(a.columns(), b.columns())):
            raise ValueError("map does not commute with sigma")
    cols = [tgt.reduce(f @ lift, check) for lift in src.basis_lifts]
    return tuple(tuple(c[i] for c in cols) for i in range(tgt.dimension))


def class_of_two_torsion_point(
    space: F2Space, p: IntMatrix, sigma_T: IntMatrix, mu: Sequence[int]
) -> tuple[int, ...]:
    """Class in H^1(R, Q) of the cocycle mu(-1), for a cocharacter mu of T.

    Coordinate i is <p(chi_i), mu> mod 2 where chi_i runs over the basis
    lifts of ``space``.  ``p`` restricts characters of Q to T and ``sigma_T``
    is the Galois involution on X^*(T); the action on cocharacters is its
    transpose.
    """
    mu = tuple(mu)
    r = len(mu)
    nm = (IntMatrix.identity(r) + sigma_T.T) @ mu
    if any(x % 2 for x in nm):
        raise NotACocycle(f"mu(-1) is not a cocycle: (1 + sigma)mu = {nm}")
    return tuple(sum(a * b for a, b in zip(p @ chi, mu)) % 2 for chi in space.basis_lifts)
