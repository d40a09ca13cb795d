"""Built-in descriptors.

Entries are addressed by entry strings such as ``compact:E6``,
``inner:A2:10``, ``quasi-torus:mu4``, ``U(3)``, ``SU(2,1)``, ``Sp(4,R)``.
"""

from __future__ import annotations

import re
from typing import Any, Callable

from .descriptor import (Custom, InnerTwist, KernelSpec, QuasiConnectedDescriptor, build_product_quotient,
                         delta_on_generators, inner_twist_cocharacter, make_descriptor, weyl_action_on_M)
from .fgab import FgAbGroup, GammaModule, class_of_two_torsion_point
from .intmat import IntMatrix
from .rootdata import BasedRootDatum, InvalidRootDatum, adjoint, simply_connected


class UnknownEntry(KeyError):
    pass


class InvalidParams(ValueError):
    pass


def _e(n: int, i: int, k: int = 1) -> tuple[int, ...]:
    return tuple(k if j == i else 0 for j in range(n))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


# -- root data in standard coordinates --------------------------------------

def so_odd(m: int) -> BasedRootDatum:
    """SO(2m+1): type B_m on Z^m."""
    roots = [_sub(_e(m, i), _e(m, i + 1)) for i in range(m - 1)] + [_e(m, m - 1)]
    coroots = roots[:-1] + [_e(m, m - 1, 2)]
    return BasedRootDatum.create(m, roots, coroots, f"B{m}")


def so_even(m: int) -> BasedRootDatum:
    """SO(2m): type D_m on Z^m."""
    roots = [_sub(_e(m, i), _e(m, i + 1)) for i in range(m - 1)] + [_add(_e(m, m - 2), _e(m, m - 1))]
    return BasedRootDatum.create(m, roots, roots, f"D{m}")


def sp(n: int) -> BasedRootDatum:
    """Sp(n) = Sp_2n: type C_n on Z^n (simply connected)."""
    roots = [_sub(_e(n, i), _e(n, i + 1)) for i in range(n - 1)] + [_e(n, n - 1, 2)]
    coroots = roots[:-1] + [_e(n, n - 1)]
    return BasedRootDatum.create(n, roots, coroots, f"C{n}")


# -- generic constructors ---------------------------------------------------

def semisimple(name: str, rd: BasedRootDatum, family=None) -> QuasiConnectedDescriptor:
    """Connected semisimple group with X^*(Q) = X^*(T) and sigma = -1."""
    n = rd.rank
    M = GammaModule(FgAbGroup.free(n), -IntMatrix.identity(n))
    return make_descriptor(name, rd, M, IntMatrix.identity(n), rd.simple_roots, family)


def quasi_torus(name: str, M: GammaModule) -> QuasiConnectedDescriptor:
    return make_descriptor(name, BasedRootDatum.empty(), M, IntMatrix.zeros(0, M.rank), [])


def z_from_cocharacter(rd: BasedRootDatum, lam) -> tuple[int, ...]:
    """Coweight coordinates mod 2 of an honest cocharacter."""
    return tuple(sum(a * b for a, b in zip(alpha, lam)) % 2 for alpha in rd.simple_roots)


QUASI_TORI: dict[str, Callable[[], GammaModule]] = {
    "Gm": lambda: GammaModule(FgAbGroup.free(1), IntMatrix.identity(1)),
    "U1": lambda: GammaModule(FgAbGroup.free(1), -IntMatrix.identity(1)),
    "U1xmu4": lambda: GammaModule(FgAbGroup.cyclic(0, 4), IntMatrix.from_rows([[-1, 0], [0, 1]])),
    # X^* of the norm-one torus of C/R: Z[Gamma] / (1 + sigma)
    "norm-one": lambda: GammaModule(FgAbGroup.from_relators(2, [(1, 1)]), IntMatrix.from_rows([[0, 1], [1, 0]])),
    "RCGm": lambda: GammaModule(FgAbGroup.free(2), IntMatrix.from_rows([[0, 1], [1, 0]])),
}


def mu(n: int) -> GammaModule:
    if n < 1:
        raise InvalidParams("mu(n) needs n >= 1")
    return GammaModule(FgAbGroup.cyclic(n), IntMatrix.identity(1))


def get_quasi_torus(param: str) -> QuasiConnectedDescriptor:
    m = re.fullmatch(r"mu\(?(\d+)\)?", param)
    if m:
        return quasi_torus(f"quasi-torus:mu{int(m.group(1))}", mu(int(m.group(1))))
    if param not in QUASI_TORI:
        raise UnknownEntry(f"unknown quasi-torus {param!r}")
    return quasi_torus(f"quasi-torus:{param}", QUASI_TORI[param]())


def unitary(n: int) -> QuasiConnectedDescriptor:
    """U(n) = (SU(n) x U(1)) / mu_n."""
    if n < 1:
        raise InvalidParams("U(n) needs n >= 1")
    if n == 1:
        return quasi_torus("U(1)", QUASI_TORI["U1"]())
    rd = simply_connected(f"A{n-1}")
    ks = KernelSpec(FgAbGroup.cyclic(n),
                    IntMatrix.from_rows([[i + 1 for i in range(n - 1)]]),
                    IntMatrix.from_rows([[1]]))
    return build_product_quotient(f"U({n})", rd, QUASI_TORI["U1"](), ks)


def gl2_det_square_1() -> QuasiConnectedDescriptor:
    """{g in GL_2 : det(g)^2 = 1} = (SL_2 x mu_4) / mu_2, with compact SL_2 part."""
    ks = KernelSpec(FgAbGroup.cyclic(2), IntMatrix.from_rows([[1]]), IntMatrix.from_rows([[1]]))
    return build_product_quotient("gl2-det-square-1", simply_connected("A1"), mu(4), ks)


def special_orthogonal(n: int, q: int = 0) -> QuasiConnectedDescriptor:
    """SO(n - q, q) for even q (an inner form of compact SO(n))."""
    if q % 2 or not 0 <= q <= n or n < 2:
        raise InvalidParams("SO(p,q) is provided for p + q >= 2 and q even")
    name = f"SO({n})" if q == 0 else f"SO({n-q},{q})"
    if n == 2:
        return quasi_torus(name, QUASI_TORI["U1"]())
    rd = so_odd(n // 2) if n % 2 else so_even(n // 2)
    # -1 on q coordinates = rotation by pi in q/2 planes
    lam = tuple(1 if i < q // 2 else 0 for i in range(rd.rank))
    fam = InnerTwist(z_from_cocharacter(rd, lam)) if q else None
    return semisimple(name, rd, fam)


def special_unitary(p: int, q: int) -> QuasiConnectedDescriptor:
    n = p + q
    if p < 0 or q < 0 or n < 2:
        raise InvalidParams("SU(p,q) needs p, q >= 0 and p + q >= 2")
    rd = simply_connected(f"A{n-1}")
    k = min(p, q)
    # Ad diag(-1^k, 1^(n-k)) is lambda(-1) for the k-th fundamental coweight
    fam = InnerTwist(_e(n - 1, k - 1)) if k else None
    name = f"SU({n})" if k == 0 else f"SU({p},{q})"
    return semisimple(name, rd, fam)


def quaternionic_unitary(p: int, q: int) -> QuasiConnectedDescriptor:
    """Sp(p,q); Sp(n,0) is the compact form of Sp_2n."""
    n = p + q
    if p < 0 or q < 0 or n < 1:
        raise InvalidParams("Sp(p,q) needs p, q >= 0 and p + q >= 1")
    rd = sp(n)
    lam = tuple(1 if i >= p else 0 for i in range(n))
    fam = InnerTwist(z_from_cocharacter(rd, lam)) if q else None
    return semisimple(f"Sp({n})" if q == 0 else f"Sp({p},{q})", rd, fam)


def split_symplectic(n: int) -> QuasiConnectedDescriptor:
    """Sp_2n(R): twist of compact Sp(n) by the coweight omega_n^vee = (1/2, ..., 1/2)."""
    if n < 1:
        raise InvalidParams("Sp(2n,R) needs n >= 1")
    return semisimple(f"Sp({2*n},R)", sp(n), InnerTwist(_e(n, n - 1)))


def compact(label: str, form: str = "sc") -> QuasiConnectedDescriptor:
    try:
        rd = {"sc": simply_connected, "adjoint": adjoint}[form](label)
    except KeyError:
        raise InvalidParams(f"unknown isogeny form {form!r}; use sc or adjoint") from None
    suffix = "" if form == "sc" else ":adjoint"
    return semisimple(f"compact:{label}{suffix}", rd)


def inner(label: str, z, form: str = "sc") -> QuasiConnectedDescriptor:
    if isinstance(z, str):
        z = [int(c) for c in z]
    rd = {"sc": simply_connected, "adjoint": adjoint}[form](label)
    if len(z) != rd.semisimple_rank:
        raise InvalidParams(f"z needs {rd.semisimple_rank} entries for type {label}")
    zs = "".join(str(int(b)) for b in z)
    suffix = "" if form == "sc" else ":adjoint"
    return semisimple(f"inner:{label}:{zs}{suffix}", rd, InnerTwist(tuple(int(b) for b in z)))


def b2_rotation() -> QuasiConnectedDescriptor:
    """Synthetic entry: split Sp_4 data restricted to the cyclic group <s1 s2> of order 4.

    Its single generator is not an involution, so it pins down the
    convention that the linear part comes from w^{-1} on H^1(R, Q).
    """
    base = split_symplectic(2)
    s1, s2 = weyl_action_on_M(base)
    r = s1 @ s2
    rT = base.rd.reflection(0) @ base.rd.reflection(1)
    mu_ = inner_twist_cocharacter(base.rd, base.family.z, rT)
    d = class_of_two_torsion_point(base.h1_characters, base.p, base.sigma_T, mu_)
    return make_descriptor("custom:B2-rotation", base.rd, base.M, base.p, base.root_lifts,
                           Custom((r,), (d,)))


def complex_sl2() -> QuasiConnectedDescriptor:
    """SL_2(C) viewed as a real group: A1 x A1 with sigma swapping the factors up to sign."""
    rd = simply_connected("A1xA1")
    sig = IntMatrix.from_rows([[0, -1], [-1, 0]])
    M = GammaModule(FgAbGroup.free(2), sig)
    w = rd.reflection(0) @ rd.reflection(1)
    return make_descriptor("custom:SL2C", rd, M, IntMatrix.identity(2), rd.simple_roots,
                           Custom((w,), ((),)))


def corrupted_a1xa1() -> QuasiConnectedDescriptor:
    """SL_2(R) x SU(2) with a redundant generator s1 s2 whose translation is wrong.

    The correct value would be delta(s1) + delta(s2); this entry is used to
    exercise rejection and is deliberately not listed in the catalog.
    """
    base = semisimple("SL2R x SU2", simply_connected("A1xA1"), InnerTwist((1, 0)))
    s1, s2 = weyl_action_on_M(base)
    d1, d2 = delta_on_generators(base)
    bad = tuple((a + b + 1) % 2 for a, b in zip(d1, d2))
    return make_descriptor("custom:A1xA1-corrupted", base.rd, base.M, base.p, base.root_lifts,
                           Custom((s1, s2, s1 @ s2), (d1, d2, bad)))


# -- lookup ------------------------------------------------------------------

_NAMED = {
    "SL2R": lambda: semisimple("SL2R", simply_connected("A1"), InnerTwist((1,))),
    "gl2-det-square-1": gl2_det_square_1,
    "custom:B2-rotation": b2_rotation,
    "custom:SL2C": complex_sl2,
}

_PATTERNS: list[tuple[re.Pattern, Callable[..., QuasiConnectedDescriptor]]] = [
    (re.compile(r"U\((\d+)\)"), lambda n: unitary(int(n))),
    (re.compile(r"SU\((\d+)\)"), lambda n: special_unitary(int(n), 0)),
    (re.compile(r"SU\((\d+),(\d+)\)"), lambda p, q: special_unitary(int(p), int(q))),
    (re.compile(r"SO\((\d+)\)"), lambda n: special_orthogonal(int(n))),
    (re.compile(r"SO\((\d+),(\d+)\)"), lambda p, q: special_orthogonal(int(p) + int(q), int(q))),
    (re.compile(r"Sp\((\d+)\)"), lambda n: quaternionic_unitary(int(n), 0)),
    (re.compile(r"Sp\((\d+),(\d+)\)"), lambda p, q: quaternionic_unitary(int(p), int(q))),
    (re.compile(r"Sp\((\d+),R\)"), lambda n: _split_sp(int(n))),
    (re.compile(r"Sp2nR\((\d+)\)"), lambda n: split_symplectic(int(n))),
]


def _split_sp(two_n: int) -> QuasiConnectedDescriptor:
    if two_n % 2:
        raise InvalidParams("Sp(2n,R) needs an even matrix size")
    return split_symplectic(two_n // 2)


def catalog_get(name: str, params: Any = None) -> QuasiConnectedDescriptor:
    """Look up a built-in descriptor.

    ``catalog_get("compact:A1")``, ``catalog_get("compact", "A1")`` and
    ``catalog_get("inner", {"type": "A2", "z": [1, 0]})`` are all accepted.
    """
    if params is not None:
        if isinstance(params, dict):
            fam = name
            if fam == "inner":
                return _wrap(inner, params["type"], params["z"], params.get("form", "sc"))
            if fam == "compact":
                return _wrap(compact, params["type"], params.get("form", "sc"))
            raise UnknownEntry(f"family {fam!r} does not take a parameter dict")
        name = f"{name}:{params}"
    if name in _NAMED:
        return _NAMED[name]()
    for pat, fn in _PATTERNS:
        m = pat.fullmatch(name)
        if m:
            return _wrap(fn, *m.groups())
    fam, _, rest = name.partition(":")
    args = rest.split(":") if rest else []
    if fam == "compact" and 1 <= len(args) <= 2:
        return _wrap(compact, *args)
    if fam == "inner" and 2 <= len(args) <= 3:
        return _wrap(inner, *args)
    if fam == "quasi-torus" and len(args) == 1:
        return get_quasi_torus(args[0])
    raise UnknownEntry(f"unknown catalog entry {name!r}")


def _wrap(fn, *args):
    try:
        return fn(*args)
    except InvalidRootDatum as exc:
        raise InvalidParams(str(exc)) from exc


def _compact_labels() -> list[str]:
    out = [f"A{n}" for n in range(1, 9)] + [f"B{n}" for n in range(2, 9)]
    out += [f"C{n}" for n in range(3, 9)] + [f"D{n}" for n in range(4, 9)]
    return out + ["E6", "E7", "E8", "F4", "G2"]


def list_entries() -> list[tuple[str, str]]:
    """Sorted ``(entry, kind)`` pairs for every concrete built-in entry."""
    entries = [(f"compact:{l}", "compact") for l in _compact_labels()]
    entries += [(f"compact:{l}:adjoint", "compact") for l in ["A1", "A2", "B2", "B3", "C3", "D4", "E6", "E7"]]
    entries += [(f"U({n})", "compact") for n in range(1, 7)]
    entries += [(f"SO({n})", "compact") for n in range(3, 13)]
    entries += [(f"Sp({n})", "compact") for n in range(1, 7)]
    entries += [(f"SU({p},{q})", "inner") for n in range(2, 7) for q in range(1, n // 2 + 1)
                for p in [n - q]]
    entries += [(f"SO({n-q},{q})", "inner") for n in range(3, 10) for q in range(2, n, 2)]
    entries += [(f"Sp({n-q},{q})", "inner") for n in range(2, 5) for q in range(1, n // 2 + 1)]
    entries += [(f"Sp({2*n},R)", "inner") for n in range(1, 5)]
    entries += [("SL2R", "inner"), ("inner:A2:10", "inner"), ("inner:G2:01", "inner"),
                ("inner:F4:1000", "inner"), ("inner:E6:010000", "inner")]
    entries += [("gl2-det-square-1", "quasi-connected")]
    entries += [(f"quasi-torus:{k}", "quasi-torus") for k in ["Gm", "U1", "mu2", "mu3", "mu4", "U1xmu4",
                                                              "norm-one", "RCGm"]]
    entries += [("custom:B2-rotation", "custom"), ("custom:SL2C", "custom")]
    return sorted(set(entries))
