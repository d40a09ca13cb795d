"""The twisted W0-action on H^1(R, Q) and its orbits.

H^1(R, Q) is modelled as the F_2-dual of H^1(Gamma, X^*(Q)): a class xi has
coordinates xi(chi_i) on the basis lifts chi_i.  For w in W0 acting on
characters by A_w, the class of n^{-1} c n is the functional xi o A_w, so the
linear part of xi * w is the transpose of the induced matrix of A_w, and

    xi * w = A_w^T xi + delta(w).

This is the same as the functorial action of w^{-1} on H^1(R, Q).

Points of the 2^dim space are encoded as ints; coordinate i is bit
``dim - 1 - i`` so that integer order equals lexicographic order of the
0/1 strings.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .descriptor import (Compact, Custom, QuasiConnectedDescriptor, delta_on_generators,
                         inner_twist_cocharacter, weyl_action_on_M)
from .fgab import class_of_two_torsion_point, h1_functorial
from .intmat import IntMatrix
from .rootdata import GroupTooLarge, generate_weyl, weyl_order

DIM_CAP = 30
CLOSURE_CAP = 10**6

F2Matrix = tuple[tuple[int, ...], ...]


class DimensionTooLarge(RuntimeError):
    pass


class ActionError(ValueError):
    """The supplied affine maps do not define an action of W0."""


def to_int(v: Sequence[int]) -> int:
    x = 0
    for b in v:
        x = (x << 1) | (b & 1)
    return x


def to_bits(x: int, dim: int) -> tuple[int, ...]:
    return tuple((x >> (dim - 1 - i)) & 1 for i in range(dim))


def bitstring(x: int, dim: int) -> str:
    return "".join(map(str, to_bits(x, dim)))


@dataclass(frozen=True)
class AffineMap:
    """xi -> L xi + d over F_2, stored as column masks of L and the mask of d."""

    dim: int
    cols: tuple[int, ...]
    d: int

    @classmethod
    def from_matrix(cls, L: F2Matrix, d: Sequence[int]) -> "AffineMap":
        dim = len(d)
        cols = tuple(to_int([L[i][j] for i in range(dim)]) for j in range(dim))
        return cls(dim, cols, to_int(d))

    @classmethod
    def identity(cls, dim: int) -> "AffineMap":
        return cls(dim, tuple(1 << (dim - 1 - j) for j in range(dim)), 0)

    def __call__(self, x: int) -> int:
        y = self.d
        cols = self.cols
        j = self.dim - 1
        while x:
            if x & 1:
                y ^= cols[j]
            x >>= 1
            j -= 1
        return y

    def then(self, other: "AffineMap") -> "AffineMap":
        """Apply ``self`` first, then ``other``."""
        return AffineMap(self.dim, tuple(other(c) ^ other.d for c in self.cols), other(self.d))

    @property
    def linear(self) -> F2Matrix:
        return tuple(tuple((self.cols[j] >> (self.dim - 1 - i)) & 1 for j in range(self.dim))
                     for i in range(self.dim))

    def is_identity(self) -> bool:
        return self == AffineMap.identity(self.dim)


def _transpose(L: F2Matrix, dim: int) -> F2Matrix:
    return tuple(tuple(L[j][i] for j in range(dim)) for i in range(dim))


def f2_rank(rows: Sequence[int]) -> int:
    basis: list[int] = []
    for r in rows:
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
    return len(basis)


@dataclass
class H1Space:
    dim: int
    generators: list[AffineMap]
    w0_order: int
    gen_matrices: list[IntMatrix] = field(default_factory=list)  # on X^*(Q)

    def __post_init__(self):
        for k, g in enumerate(self.generators):
            if f2_rank(g.cols) != self.dim:
                raise ActionError(f"linear part of generator {k} is not invertible")


def linear_part(desc: QuasiConnectedDescriptor, A: IntMatrix, check: bool = True) -> F2Matrix:
    """Linear part on H^1(R, Q) of the W0 element acting on characters by ``A``."""
    space = desc.h1_characters
    return _transpose(h1_functorial(space, A, check=check), space.dimension)


def build_action(desc: QuasiConnectedDescriptor, dim_cap: int = DIM_CAP) -> H1Space:
    dim = desc.h1_characters.dimension
    if dim > min(dim_cap, DIM_CAP):
        raise DimensionTooLarge(f"H^1(R, Q) has dimension {dim} > {min(dim_cap, DIM_CAP)}")
    mats = weyl_action_on_M(desc)
    deltas = delta_on_generators(desc)
    gens = [AffineMap.from_matrix(linear_part(desc, A), d) for A, d in zip(mats, deltas)]
    if isinstance(desc.family, Custom):
        order = None
    else:
        order = weyl_order(desc.rd)
    return H1Space(dim, gens, order, mats)


def twisted_apply(space: H1Space, xi: Sequence[int], gen_index: int) -> tuple[int, ...]:
    return to_bits(space.generators[gen_index](to_int(xi)), space.dim)


@dataclass
class OrbitReport:
    group_name: str
    dim_V: int
    w0_order: int
    orbit_count: int
    orbits: list[tuple[str, int]]
    family: str
    validated: bool = False
    timing: float = 0.0
    fast_path_count: int | None = None

    def to_dict(self) -> dict:
        return {
            "group": self.group_name,
            "dim_h1_q": self.dim_V,
            "w0_order": self.w0_order,
            "orbit_count": self.orbit_count,
            "orbits": [{"rep": r, "size": s} for r, s in self.orbits],
            "family": self.family,
            "validated": self.validated,
        }


def orbit_labels(dim: int, maps: Sequence[AffineMap]) -> list[int]:
    """For every point, the least element of its orbit under the group generated by ``maps``."""
    if dim > DIM_CAP:
        raise DimensionTooLarge(f"dimension {dim} > {DIM_CAP}")
    size = 1 << dim
    label = [-1] * size
    for x in range(size):
        if label[x] >= 0:
            continue
        # all smaller points are already assigned, so x is the least element
        label[x] = x
        stack = [x]
        while stack:
            y = stack.pop()
            for g in maps:
                z = g(y)
                if label[z] < 0:
                    label[z] = x
                    stack.append(z)
    return label


def orbit_partition(dim: int, maps: Sequence[AffineMap]) -> list[tuple[int, int]]:
    """(least element, size) of each orbit of the group generated by ``maps``."""
    sizes: dict[int, int] = {}
    for lab in orbit_labels(dim, maps):
        sizes[lab] = sizes.get(lab, 0) + 1
    return sorted(sizes.items())


def orbit_sets(dim: int, maps: Sequence[AffineMap]) -> list[tuple[str, ...]]:
    """The orbits as sorted tuples of 0/1 strings, in sorted order."""
    groups: dict[int, list[str]] = {}
    for x, lab in enumerate(orbit_labels(dim, maps)):
        groups.setdefault(lab, []).append(bitstring(x, dim))
    return sorted(tuple(sorted(g)) for g in groups.values())


def enumerate_orbits(space: H1Space, name: str = "", family: str = "") -> OrbitReport:
    parts = orbit_partition(space.dim, space.generators)
    return OrbitReport(name, space.dim, space.w0_order, len(parts),
                       [(bitstring(x, space.dim), n) for x, n in parts], family)


@dataclass
class ValidationReport:
    ok: bool
    relations_checked: int
    group_order: int | None
    failure: str | None = None


def validate_action(space: H1Space, desc: QuasiConnectedDescriptor,
                    closure_cap: int = CLOSURE_CAP) -> ValidationReport:
    """Check that the generator maps satisfy the defining relations of W0.

    Compact and inner families: the Coxeter relations of W.  Custom family:
    the generator matrices on X^*(Q) are closed into a finite group and every
    element must receive a single affine map.
    """
    if isinstance(desc.family, Custom):
        return _validate_by_closure(space, desc, closure_cap)
    cox = desc.rd.coxeter_matrix
    gens = space.generators
    checked = 0
    for i in range(len(gens)):
        for j in range(i, len(gens)):
            m = cox[i][j] if i != j else 1
            word = [i, j] * m if i != j else [i, i]
            f = AffineMap.identity(space.dim)
            for k in word:
                f = f.then(gens[k])
            checked += 1
            if not f.is_identity():
                rel = f"(s{i+1} s{j+1})^{m}" if i != j else f"s{i+1}^2"
                return ValidationReport(False, checked, space.w0_order,
                                        f"relation {rel} = 1 fails as an affine map")
    return ValidationReport(True, checked, space.w0_order)


def _canonical_matrix(desc: QuasiConnectedDescriptor, A: IntMatrix) -> tuple:
    g = desc.M.group
    return tuple(g.canonical(c) for c in A.columns())


def _validate_by_closure(space: H1Space, desc: QuasiConnectedDescriptor,
                         cap: int = CLOSURE_CAP) -> ValidationReport:
    n = desc.ambient
    ident = IntMatrix.identity(n)
    start = _canonical_matrix(desc, ident)
    elems = {start: (ident, AffineMap.identity(space.dim), ())}
    queue = deque([start])
    checked = 0
    while queue:
        key = queue.popleft()
        A, f, word = elems[key]
        for k, (B, g) in enumerate(zip(space.gen_matrices, space.generators)):
            C = A @ B
            h = f.then(g)
            ck = _canonical_matrix(desc, C)
            checked += 1
            if ck in elems:
                if elems[ck][1] != h:
                    w1 = "".join(f"g{i+1}" for i in word + (k,))
                    w2 = "".join(f"g{i+1}" for i in elems[ck][2]) or "1"
                    return ValidationReport(False, checked, None,
                                            f"relation {w1} = {w2} holds in W0 but not for the affine maps")
            else:
                if len(elems) >= cap:
                    raise GroupTooLarge(f"W0 closure exceeds {cap} elements")
                elems[ck] = (C, h, word + (k,))
                queue.append(ck)
    space.w0_order = len(elems)
    return ValidationReport(True, checked, len(elems))


def full_group_action(desc: QuasiConnectedDescriptor, cap: int = 10**4) -> list[AffineMap]:
    """Affine map of every element of W0, each computed directly from its matrix.

    For compact and inner families the translation of w is evaluated from
    the closed formula on w itself rather than by composing generators.
    """
    space = desc.h1_characters
    dim = space.dimension
    if isinstance(desc.family, Custom):
        h = build_action(desc)
        rep = _validate_by_closure(h, desc, cap)
        if not rep.ok:
            raise ActionError(rep.failure)
        elems = _closure_matrices(desc, h.gen_matrices, cap)
        # translations of custom entries exist only on generators; compose them
        return _compose_along_words(h, elems)
    if weyl_order(desc.rd) > cap:
        raise GroupTooLarge(f"W0 has {weyl_order(desc.rd)} elements > {cap}")
    out = []
    s_M = weyl_action_on_M(desc)
    on_M = {(): IntMatrix.identity(desc.ambient)}
    for w in generate_weyl(desc.rd, cap):
        # BFS words extend a shorter word already seen, so one product per element
        if w.word not in on_M:
            on_M[w.word] = on_M[w.word[:-1]] @ s_M[w.word[-1]]
        A = on_M[w.word]
        if isinstance(desc.family, Compact) or not any(desc.family.z):
            d = (0,) * dim
        else:
            mu = inner_twist_cocharacter(desc.rd, desc.family.z, w.matrix)
            d = class_of_two_torsion_point(space, desc.p, desc.sigma_T, mu)
        out.append(AffineMap.from_matrix(linear_part(desc, A, check=False), d))
    return out


def _closure_matrices(desc, gens, cap):
    n = desc.ambient
    ident = IntMatrix.identity(n)
    elems = {_canonical_matrix(desc, ident): ()}
    queue = deque([(ident, ())])
    while queue:
        A, word = queue.popleft()
        for k, B in enumerate(gens):
            C = A @ B
            ck = _canonical_matrix(desc, C)
            if ck not in elems:
                if len(elems) >= cap:
                    raise GroupTooLarge(f"W0 closure exceeds {cap} elements")
                elems[ck] = word + (k,)
                queue.append((C, word + (k,)))
    return list(elems.values())


def _compose_along_words(h: H1Space, words) -> list[AffineMap]:
    out = []
    for word in words:
        f = AffineMap.identity(h.dim)
        for k in word:
            f = f.then(h.generators[k])
        out.append(f)
    return out


def compact_fast_path(desc: QuasiConnectedDescriptor) -> int | None:
    """|T(R)_2 / W| for a connected compact group, or None when not applicable.

    Needs X^*(Q) free with no relations and sigma = -1, i.e. Q a compact
    torus.  T(R)_2 = Hom(X^*(T), {+-1}); w acts on a functional by the
    transpose of its character matrix taken mod 2.
    """
    n = desc.ambient
    if (not isinstance(desc.family, Compact) or desc.M.group.relations.ncols
            or desc.M.sigma != -IntMatrix.identity(n)):
        return None
    maps = []
    for A in weyl_action_on_M(desc):
        L = tuple(tuple(A.rows[j][i] % 2 for j in range(n)) for i in range(n))
        maps.append(AffineMap.from_matrix(L, (0,) * n))
    return len(orbit_partition(n, maps))


def h1_compute(desc: QuasiConnectedDescriptor, validate: bool = True,
               dim_cap: int = DIM_CAP, closure_cap: int = CLOSURE_CAP) -> OrbitReport:
    """|H^1(R, G)| as the number of W0-orbits on H^1(R, Q)."""
    t0 = time.perf_counter()
    space = build_action(desc, dim_cap)
    validated = False
    if validate or space.w0_order is None:
        # custom entries learn |W0| from the closure, so they are always validated
        rep = validate_action(space, desc, closure_cap)
        if not rep.ok:
            raise ActionError(rep.failure)
        validated = True
    report = enumerate_orbits(space, desc.name, desc.family.kind)
    report.validated = validated
    fast = compact_fast_path(desc)
    if fast is not None:
        if fast != report.orbit_count:
            raise AssertionError(f"{desc.name}: T(R)_2/W gives {fast}, engine gives {report.orbit_count}")
        report.fast_path_count = fast
    report.timing = time.perf_counter() - t0
    return report
