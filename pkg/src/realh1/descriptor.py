"""Input model for a real quasi-connected reductive group G.

Everything is encoded through character lattices:

* ``rd``   -- based root datum of G^ss with respect to a fundamental torus T,
* ``M``    -- X^*(Q) with its Galois involution, Q = T.Z(G) the fundamental quasi-torus,
* ``p``    -- restriction of characters X^*(Q) -> X^*(T),
* ``root_lifts`` -- characters of Q restricting to the simple roots (and
  trivial on Z(G)),
* ``family`` -- how the real structure on G^ss relates to the compact one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Sequence, Union

from .fgab import (F2Space, FgAbGroup, GammaModule, GroupHom, IllDefinedMap, class_of_two_torsion_point,
                   express_in, h1_gamma, kernel)
from .intmat import IntMatrix, Vector, solve
from .rootdata import BasedRootDatum, InvalidRootDatum


class DescriptorError(ValueError):
    """A failed descriptor check; ``check`` names which one."""

    def __init__(self, check: str, message: str):
        super().__init__(f"{check}: {message}")
        self.check = check
        self.message = message


@dataclass(frozen=True)
class Compact:
    kind = "compact"


@dataclass(frozen=True)
class InnerTwist:
    """Inner form of the compact form, twisted by Ad(lambda_z(-1)).

    ``z`` holds the coordinates mod 2 of a coweight in the basis dual to
    the simple roots.
    """

    z: tuple[int, ...]
    kind = "inner"


@dataclass(frozen=True)
class Custom:
    """User-supplied W0 generators (matrices on X^*(Q)) and their translations."""

    w0_gens: tuple[IntMatrix, ...]
    delta: tuple[tuple[int, ...], ...]
    kind = "custom"


Family = Union[Compact, InnerTwist, Custom]


@dataclass(frozen=True, eq=False)
class QuasiConnectedDescriptor:
    name: str
    rd: BasedRootDatum
    M: GammaModule
    p: IntMatrix
    root_lifts: tuple[Vector, ...]
    family: Family = field(default_factory=Compact)

    @cached_property
    def sigma_T(self) -> IntMatrix:
        return _induced_sigma_T(self.M, self.p)

    @cached_property
    def h1_characters(self) -> F2Space:
        """H^1(Gamma, X^*(Q)); H^1(R, Q) is modelled as its F_2-dual."""
        return h1_gamma(self.M)

    @property
    def rank_T(self) -> int:
        return self.rd.rank

    @property
    def ambient(self) -> int:
        return self.M.rank

    def reflection_on_M(self, i: int) -> IntMatrix:
        """s_i(m) = m - <p(m), alpha_i^vee> * lift(alpha_i)."""
        lift, co = self.root_lifts[i], self.rd.simple_coroots[i]
        row = self.p.T @ co
        n = self.ambient
        return IntMatrix(n, n, tuple(
            tuple(int(a == b) - lift[a] * row[b] for b in range(n)) for a in range(n)))

    def validate(self) -> None:
        for check in run_checks(self):
            if not check[1]:
                raise DescriptorError(check[0], check[2])


def _induced_sigma_T(M: GammaModule, p: IntMatrix) -> IntMatrix:
    r = p.nrows
    cols = []
    for j in range(r):
        x = solve(p, tuple(int(i == j) for i in range(r)))
        if x is None:
            raise DescriptorError("p-surjective", "restriction X^*(Q) -> X^*(T) is not surjective")
        cols.append(p @ (M.sigma @ x))
    return IntMatrix.from_columns(cols, r)


def run_checks(desc: QuasiConnectedDescriptor) -> list[tuple[str, bool, str]]:
    """Named structural checks.  Later checks are skipped once one fails."""
    out: list[tuple[str, bool, str]] = []

    def record(name, fn):
        if out and not out[-1][1]:
            return
        try:
            msg = fn()
            out.append((name, True, msg or "ok"))
        except (DescriptorError, InvalidRootDatum, IllDefinedMap, ValueError, ArithmeticError) as exc:
            out.append((name, False, str(exc)))

    rd, M, p = desc.rd, desc.M, desc.p
    r, n = rd.rank, M.rank

    def root_datum():
        rd.validate()

    def p_shape():
        if p.shape != (r, n):
            raise ValueError(f"p has shape {p.shape}, expected {(r, n)}")
        for rel in M.group.relations.columns():
            if any(p @ rel):
                raise ValueError(f"p does not kill the relator {rel}")

    def p_surjective():
        desc.sigma_T

    def p_equivariant():
        if p @ M.sigma != desc.sigma_T @ p:
            raise ValueError("p o sigma_M != sigma_T o p")

    def lifts():
        if len(desc.root_lifts) != rd.semisimple_rank:
            raise ValueError("need one lift per simple root")
        for i, (lift, a) in enumerate(zip(desc.root_lifts, rd.simple_roots)):
            if len(lift) != n or p @ lift != a:
                raise ValueError(f"lift of alpha_{i+1} does not restrict to it")

    def family():
        fam = desc.family
        if isinstance(fam, (Compact, InnerTwist)):
            if desc.sigma_T != -IntMatrix.identity(r):
                raise ValueError("compact and inner families need sigma = -1 on X^*(T)")
        if isinstance(fam, InnerTwist):
            if len(fam.z) != rd.semisimple_rank or any(b not in (0, 1) for b in fam.z):
                raise ValueError("z must be a 0/1 vector with one entry per simple root")
            if rd.semisimple_rank != r:
                raise ValueError("inner twists need a semisimple root datum")
        if isinstance(fam, Custom):
            if len(fam.delta) != len(fam.w0_gens):
                raise ValueError("one delta vector per W0 generator")
            d = desc.h1_characters.dimension
            if any(len(v) != d or any(b not in (0, 1) for b in v) for v in fam.delta):
                raise ValueError(f"delta vectors must be 0/1 vectors of length {d}")

    def weyl_action():
        gens = weyl_action_on_M(desc)
        ker_p, incl = kernel(GroupHom(M.group, FgAbGroup.free(r), p))
        roots = rd.roots if rd.semisimple_rank else frozenset()
        for k, g in enumerate(gens):
            GroupHom(M.group, M.group, g)
            if not M.commutes_with(g):
                raise ValueError(f"W0 generator {k} does not commute with sigma_M")
            for v in incl.matrix.columns():
                if not M.group.equal(g @ v, v):
                    raise ValueError(f"W0 generator {k} moves a character of Z(G)")
            gT = _action_on_T(desc, g)
            if p @ g != gT @ p:
                raise ValueError(f"W0 generator {k} does not descend to X^*(T)")
            if {gT @ a for a in roots} != set(roots):
                raise ValueError(f"W0 generator {k} does not permute the roots")
            if rd.weyl_word(gT) is None:
                raise ValueError(f"W0 generator {k} is not in the Weyl group")
            if gT @ desc.sigma_T != desc.sigma_T @ gT:
                raise ValueError(f"W0 generator {k} is not Galois-fixed")
        return f"{len(gens)} generators"

    record("root-datum", root_datum)
    record("p-well-defined", p_shape)
    record("p-surjective", p_surjective)
    record("p-equivariant", p_equivariant)
    record("root-lifts", lifts)
    record("family", family)
    record("weyl-action", weyl_action)
    return out


def _action_on_T(desc: QuasiConnectedDescriptor, g: IntMatrix) -> IntMatrix:
    r = desc.rank_T
    cols = []
    for j in range(r):
        x = solve(desc.p, tuple(int(i == j) for i in range(r)))
        cols.append(desc.p @ (g @ x))
    return IntMatrix.from_columns(cols, r)


def weyl_action_on_M(desc: QuasiConnectedDescriptor) -> list[IntMatrix]:
    """Matrices on X^*(Q) for the W0 generators (character action)."""
    if isinstance(desc.family, Custom):
        return list(desc.family.w0_gens)
    return [desc.reflection_on_M(i) for i in range(desc.rd.semisimple_rank)]


def weyl_generators_on_T(desc: QuasiConnectedDescriptor) -> list[IntMatrix]:
    return [_action_on_T(desc, g) for g in weyl_action_on_M(desc)]


def coweight(rd: BasedRootDatum, z: Sequence[int]) -> tuple[Fraction, ...]:
    """The rational cocharacter lambda with <alpha_j, lambda> = z_j."""
    l = rd.semisimple_rank
    aug = [[Fraction(x) for x in rd.simple_roots[j]] + [Fraction(z[j])] for j in range(l)]
    n = rd.rank
    # Gauss-Jordan; the simple roots form a Q-basis of X^*(T) (x) Q
    for c in range(n):
        piv = next(i for i in range(c, l) if aug[i][c] != 0)
        aug[c], aug[piv] = aug[piv], aug[c]
        pv = aug[c][c]
        aug[c] = [x / pv for x in aug[c]]
        for i in range(l):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(aug[i][n] for i in range(n))


def inner_twist_cocharacter(rd: BasedRootDatum, z: Sequence[int], w_on_X: IntMatrix) -> Vector:
    """(w^{-1} - 1) lambda_z, an integral cocharacter (it lies in the coroot lattice)."""
    lam = coweight(rd, z)
    # w^{-1} acts on cocharacters by the transpose of w's matrix on characters
    wt = w_on_X.T
    mu = [sum(wt.rows[i][k] * lam[k] for k in range(rd.rank)) - lam[i] for i in range(rd.rank)]
    if any(x.denominator != 1 for x in mu):
        raise ArithmeticError(f"(w^-1 - 1) lambda_z = {mu} is not integral")
    return tuple(int(x) for x in mu)


def delta_on_generators(desc: QuasiConnectedDescriptor) -> list[tuple[int, ...]]:
    """Translation parts delta(w) = Cl(n^{-1} nbar) for the W0 generators."""
    space = desc.h1_characters
    fam = desc.family
    if isinstance(fam, Custom):
        return [tuple(v) for v in fam.delta]
    k = desc.rd.semisimple_rank
    if isinstance(fam, Compact) or not any(fam.z):
        return [(0,) * space.dimension for _ in range(k)]
    return [class_of_two_torsion_point(space, desc.p, desc.sigma_T,
                                       inner_twist_cocharacter(desc.rd, fam.z, s))
            for s in desc.rd.reflections]


def make_descriptor(name, rd, M, p, root_lifts, family=None, validate=True) -> QuasiConnectedDescriptor:
    desc = QuasiConnectedDescriptor(name, rd, M, p, tuple(tuple(v) for v in root_lifts),
                                    family if family is not None else Compact())
    if validate:
        desc.validate()
    return desc


@dataclass(frozen=True)
class KernelSpec:
    """A finite central subgroup mu of G^ss x Q0, through its character group.

    ``q_ss`` and ``q0`` restrict characters of T_ss and Q0 to mu; a character
    (lam, b) of T_ss x Q0 descends to the quotient iff q_ss(lam) = q0(b).
    """

    mu: FgAbGroup
    q_ss: IntMatrix
    q0: IntMatrix


def build_product_quotient(
    name: str,
    rd: BasedRootDatum,
    M0: GammaModule,
    kernel_spec: KernelSpec | None = None,
    family: Family | None = None,
    sigma_ss: IntMatrix | None = None,
) -> QuasiConnectedDescriptor:
    """Descriptor of G = (G^ss x Q0) / mu; X^*(Q) is a fiber product over X^*(mu)."""
    r, n0 = rd.rank, M0.rank
    sigma_ss = sigma_ss if sigma_ss is not None else -IntMatrix.identity(r)
    P = FgAbGroup(r + n0, IntMatrix.zeros(r, M0.group.relations.ncols).vstack(M0.group.relations))
    sigma_P = _block_diag(sigma_ss, M0.sigma)
    if kernel_spec is None:
        kernel_spec = KernelSpec(FgAbGroup.free(0), IntMatrix.zeros(0, r), IntMatrix.zeros(0, n0))
    ks = kernel_spec
    try:
        phi = GroupHom(P, ks.mu, ks.q_ss.hstack(-ks.q0))
    except IllDefinedMap as exc:
        raise DescriptorError("central-subgroup", f"restriction maps are not well defined: {exc}") from exc
    for a in rd.simple_roots:
        if not ks.mu.is_zero(ks.q_ss @ a):
            raise DescriptorError("central-subgroup", "mu is not central: a root is nontrivial on it")
    Mgrp, incl = kernel(phi)
    B = incl.matrix
    sig_cols = []
    for v in B.columns():
        c = express_in(B, P, sigma_P @ v)
        if c is None:
            raise DescriptorError("central-subgroup", "mu is not stable under complex conjugation")
        sig_cols.append(c)
    M = GammaModule(Mgrp, IntMatrix.from_columns(sig_cols, B.ncols))
    p = B.submatrix(range(r), range(B.ncols))
    lifts = [express_in(B, P, tuple(a) + (0,) * n0) for a in rd.simple_roots]
    return make_descriptor(name, rd, M, p, lifts, family)


def _block_diag(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    top = a.hstack(IntMatrix.zeros(a.nrows, b.ncols))
    return top.vstack(IntMatrix.zeros(b.nrows, a.ncols).hstack(b))


def change_basis(desc: QuasiConnectedDescriptor, U: IntMatrix, name: str | None = None) -> QuasiConnectedDescriptor:
    """Re-present X^*(Q) through the unimodular substitution m = U m'."""
    Ui = _unimodular_inverse(U)
    g = desc.M.group
    M = GammaModule(FgAbGroup(g.ambient_rank, Ui @ g.relations), Ui @ desc.M.sigma @ U)
    fam = desc.family
    if isinstance(fam, Custom):
        # delta is written in the dual of the H^1 basis, which moves with the presentation:
        # the new coordinate j of xi is xi(U chi'_j), and U chi'_j has old coordinates C[:, j]
        old, new = desc.h1_characters, h1_gamma(M)
        C = [old.reduce(U @ chi) for chi in new.basis_lifts]
        delta = tuple(tuple(sum(c[i] * d[i] for i in range(len(d))) % 2 for c in C) for d in fam.delta)
        fam = Custom(tuple(Ui @ w @ U for w in fam.w0_gens), delta)
    return make_descriptor(name or desc.name, desc.rd, M, desc.p @ U,
                           [Ui @ v for v in desc.root_lifts], fam)


def _unimodular_inverse(U: IntMatrix) -> IntMatrix:
    n = U.nrows
    cols = [solve(U, tuple(int(i == j) for i in range(n))) for j in range(n)]
    if any(c is None for c in cols):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_columns(cols, n)


# -- JSON -------------------------------------------------------------------

def to_dict(desc: QuasiConnectedDescriptor) -> dict[str, Any]:
    fam = desc.family
    fam_d: dict[str, Any] = {"kind": fam.kind}
    if isinstance(fam, InnerTwist):
        fam_d["z"] = list(fam.z)
    elif isinstance(fam, Custom):
        fam_d["w0_gens"] = [w.tolist() for w in fam.w0_gens]
        fam_d["delta"] = [list(v) for v in fam.delta]
    g = desc.M.group
    return {
        "name": desc.name,
        "cartan": desc.rd.cartan_label,
        "simple_roots": [list(a) for a in desc.rd.simple_roots],
        "simple_coroots": [list(a) for a in desc.rd.simple_coroots],
        "M": {"ambient_rank": g.ambient_rank, "relations": [list(c) for c in g.relations.columns()]},
        "sigma_M": desc.M.sigma.tolist(),
        "p": desc.p.tolist(),
        "root_lifts": [list(v) for v in desc.root_lifts],
        "family": fam_d,
    }


def _matrix(rows, nrows: int, ncols: int, what: str) -> IntMatrix:
    rows = [list(r) for r in rows]
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise DescriptorError("schema", f"{what} must be a {nrows}x{ncols} matrix")
    return IntMatrix.from_rows(rows, ncols)


def from_dict(d: dict[str, Any], validate: bool = True) -> QuasiConnectedDescriptor:
    try:
        m = d["M"]
        n = int(m["ambient_rank"])
        rels = [tuple(r) for r in m.get("relations", [])]
        if any(len(r) != n for r in rels):
            raise DescriptorError("schema", "relators must have length ambient_rank")
        group = FgAbGroup.from_relators(n, rels)
        roots, coroots = d.get("simple_roots", []), d.get("simple_coroots", [])
        p_rows = d.get("p", [])
        r = len(p_rows)
        rd = BasedRootDatum.create(r, roots, coroots, d.get("cartan"), validate=False)
        sigma = _matrix(d["sigma_M"], n, n, "sigma_M")
        p = _matrix(p_rows, r, n, "p")
        fam_d = d.get("family", {"kind": "compact"})
        kind = fam_d.get("kind")
        if kind == "compact":
            fam: Family = Compact()
        elif kind == "inner":
            fam = InnerTwist(tuple(int(b) for b in fam_d["z"]))
        elif kind == "custom":
            gens = tuple(_matrix(w, n, n, "w0 generator") for w in fam_d.get("w0_gens", []))
            fam = Custom(gens, tuple(tuple(int(b) for b in v) for v in fam_d.get("delta", [])))
        else:
            raise DescriptorError("schema", f"unknown family kind {kind!r}")
        lifts = [tuple(int(a) for a in v) for v in d.get("root_lifts", [])]
        name = str(d.get("name", "unnamed"))
    except (KeyError, TypeError) as exc:
        raise DescriptorError("schema", f"malformed descriptor: {exc!r}") from exc
    try:
        M = GammaModule(group, sigma)
    except IllDefinedMap as exc:
        raise DescriptorError("sigma-well-defined", str(exc)) from exc
    except ValueError as exc:
        raise DescriptorError("sigma-involution", str(exc)) from exc
    return make_descriptor(name, rd, M, p, lifts, fam, validate=validate)


def dumps(desc: QuasiConnectedDescriptor) -> str:
    return json.dumps(to_dict(desc), indent=1, sort_keys=True)


def loads(text: str, validate: bool = True) -> QuasiConnectedDescriptor:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError("schema", f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise DescriptorError("schema", "descriptor must be a JSON object")
    return from_dict(data, validate=validate)
