import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from realh1.catalog import catalog_get, corrupted_a1xa1, weyl_action_on_M
from realh1.descriptor import inner_twist_cocharacter
from realh1.fgab import class_of_two_torsion_point
from realh1.intmat import IntMatrix
from realh1.orbits import (AffineMap, DimensionTooLarge, H1Space, ActionError, build_action,
                           compact_fast_path, enumerate_orbits, full_group_action, h1_compute, linear_part,
                           orbit_partition, orbit_sets, to_bits, to_int, twisted_apply, validate_action)


def test_quasi_torus_has_no_generators():
    space = build_action(catalog_get("quasi-torus:U1"))
    assert space.generators == [] and space.dim == 1


def test_compact_su2_action():
    space = build_action(catalog_get("compact:A1"))
    (g,) = space.generators
    assert space.dim == 1 and g.linear == ((1,),) and g.d == 0
    assert twisted_apply(space, (0,), 0) == (0,)


def test_sl2r_action():
    space = build_action(catalog_get("SL2R"))
    (g,) = space.generators
    assert g.linear == ((1,),) and g.d == 1
    assert twisted_apply(space, (0,), 0) == (1,)
    assert twisted_apply(space, twisted_apply(space, (1,), 0), 0) == (1,)


@pytest.mark.parametrize("entry,count", [
    ("U(2)", 3), ("SL2R", 1), ("gl2-det-square-1", 2), ("compact:A1", 2), ("SO(5)", 3),
    ("compact:B2:adjoint", 3), ("quasi-torus:Gm", 1), ("custom:SL2C", 1), ("custom:B2-rotation", 1),
])
def test_orbit_counts(entry, count):
    assert h1_compute(catalog_get(entry)).orbit_count == count


def test_u2_orbits_are_signatures():
    rep = h1_compute(catalog_get("U(2)"))
    assert sorted(size for _, size in rep.orbits) == [1, 1, 2]
    assert rep.orbits[0] == ("00", 1)


def test_report_schema():
    d = h1_compute(catalog_get("SU(2,1)")).to_dict()
    assert list(d) == ["group", "dim_h1_q", "w0_order", "orbit_count", "orbits", "family", "validated"]
    assert d["orbits"][0]["rep"] == "00"
    assert d["w0_order"] == 6 and d["validated"] is True


def test_orbit_representatives_are_minimal():
    rep = h1_compute(catalog_get("U(4)"))
    space = build_action(catalog_get("U(4)"))
    for orbit in orbit_sets(space.dim, space.generators):
        assert (orbit[0], len(orbit)) in rep.orbits


def test_rotation_uses_inverse_convention():
    # the generator r = s1 s2 of order 4: xi * r must equal r^{-1}_* xi + delta(r),
    # with the linear part taken from r^{-1} acting on characters
    desc = catalog_get("custom:B2-rotation")
    base = catalog_get("Sp(4,R)")
    space = build_action(desc)
    s1, s2 = weyl_action_on_M(base)
    r = s1 @ s2
    r_inv = s2 @ s1
    V = desc.h1_characters
    rT = base.rd.reflection(0) @ base.rd.reflection(1)
    d = class_of_two_torsion_point(V, base.p, base.sigma_T,
                                   inner_twist_cocharacter(base.rd, base.family.z, rT))
    # r^{-1}_* xi is the functional chi -> xi(r chi): the transpose of r on H^1(Gamma, X^*)
    L = linear_part(desc, r)
    for x in range(1 << space.dim):
        xi = to_bits(x, space.dim)
        lin = tuple(sum(L[i][j] * xi[j] for j in range(space.dim)) % 2 for i in range(space.dim))
        expect = tuple((a + b) % 2 for a, b in zip(lin, d))
        assert twisted_apply(space, xi, 0) == expect
    # the translation of r differs from that of r^{-1}, so the check above
    # distinguishes the two conventions
    r_invT = base.rd.reflection(1) @ base.rd.reflection(0)
    d_inv = class_of_two_torsion_point(V, base.p, base.sigma_T,
                                       inner_twist_cocharacter(base.rd, base.family.z, r_invT))
    assert d != d_inv
    assert r @ r_inv == IntMatrix.identity(desc.ambient)


def test_validate_action_passes_and_counts_relations():
    desc = catalog_get("SU(2,1)")
    rep = validate_action(build_action(desc), desc)
    assert rep.ok and rep.relations_checked == 3 and rep.group_order == 6


def test_corrupted_delta_rejected():
    desc = corrupted_a1xa1()
    rep = validate_action(build_action(desc), desc)
    assert not rep.ok and "relation" in rep.failure
    with pytest.raises(ActionError):
        h1_compute(desc)


def test_broken_coxeter_relation_detected():
    desc = catalog_get("SU(2,1)")
    space = build_action(desc)
    g0 = space.generators[0]
    space.generators[0] = AffineMap(g0.dim, g0.cols, g0.d ^ 1)
    rep = validate_action(space, desc)
    assert not rep.ok


def test_non_invertible_generator_rejected():
    with pytest.raises(ActionError):
        H1Space(2, [AffineMap(2, (0b10, 0b10), 0)], 2)


def test_dimension_cap():
    with pytest.raises(DimensionTooLarge):
        build_action(catalog_get("U(3)"), dim_cap=2)
    with pytest.raises(DimensionTooLarge):
        orbit_partition(31, [])


@pytest.mark.parametrize("entry", ["compact:G2", "compact:F4", "compact:E6", "U(4)", "SO(7)"])
def test_fast_path_agrees(entry):
    desc = catalog_get(entry)
    rep = h1_compute(desc)
    assert compact_fast_path(desc) == rep.orbit_count == rep.fast_path_count


def test_fast_path_not_applicable():
    assert compact_fast_path(catalog_get("SL2R")) is None
    assert compact_fast_path(catalog_get("gl2-det-square-1")) is None


@pytest.mark.parametrize("entry", ["SU(2,1)", "Sp(4,R)", "custom:B2-rotation", "gl2-det-square-1", "SO(3,2)"])
def test_full_group_maps_are_an_action(entry):
    desc = catalog_get(entry)
    space = build_action(desc)
    elems = full_group_action(desc)
    assert len(elems) == h1_compute(desc).w0_order
    assert orbit_sets(space.dim, elems) == orbit_sets(space.dim, space.generators)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 6), st.data())
def test_affine_composition(dim, data):
    def draw_map():
        cols = tuple(data.draw(st.integers(0, (1 << dim) - 1)) for _ in range(dim))
        return AffineMap(dim, cols, data.draw(st.integers(0, (1 << dim) - 1)))
    f, g = draw_map(), draw_map()
    x = data.draw(st.integers(0, (1 << dim) - 1))
    assert f.then(g)(x) == g(f(x))
    assert AffineMap.from_matrix(f.linear, to_bits(f.d, dim)) == f
    assert to_int(to_bits(x, dim)) == x


def test_enumerate_orbits_trivial_action():
    space = H1Space(3, [], 1)
    rep = enumerate_orbits(space)
    assert rep.orbit_count == 8 and all(s == 1 for _, s in rep.orbits)


def test_identity_map():
    assert AffineMap.identity(4).is_identity()
    assert AffineMap.identity(0)(0) == 0
    assert IntMatrix.identity(0).shape == (0, 0)
