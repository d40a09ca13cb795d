import pytest

from realh1.oracle import (OracleBoundsExceeded, brute_h1_gamma, brute_orbits_full_group,
                           classification_count)

SWAP = ((0, 1), (1, 0))


@pytest.mark.parametrize("relators,n,sigma,count", [
    ([], 1, ((-1,),), 2),
    ([], 1, ((1,),), 1),
    ([(4,)], 1, ((1,),), 2),
    ([(3,)], 1, ((1,),), 1),
    ([], 2, SWAP, 1),
    ([(1, 1)], 2, SWAP, 2),
    ([(0, 4)], 2, ((-1, 0), (0, 1)), 4),
    ([], 2, ((1, 4), (0, -1)), 2),
])
def test_brute_h1(relators, n, sigma, count):
    assert brute_h1_gamma(relators, n, sigma).value == count


def test_brute_h1_bounds():
    with pytest.raises(OracleBoundsExceeded):
        brute_h1_gamma([], 6, tuple(tuple(-int(i == j) for j in range(6)) for i in range(6)))


def test_full_group_partition():
    ident = ((1, 0), (0, 1))
    swap = ((0, 1), (1, 0))
    # U(2): S_2 permuting two signs
    part = brute_orbits_full_group(2, [(ident, (0, 0)), (swap, (0, 0))]).value
    assert len(part) == 3 and ("01", "10") in part
    # trivial action: singletons
    assert len(brute_orbits_full_group(3, [(tuple(tuple(int(i == j) for j in range(3)) for i in range(3)),
                                            (0, 0, 0))]).value) == 8
    # SL2R: the nontrivial element translates by 1
    assert brute_orbits_full_group(1, [(((1,),), (0,)), (((1,),), (1,))]).value == [("0", "1")]
    with pytest.raises(OracleBoundsExceeded):
        brute_orbits_full_group(1, [(((1,),), (0,))] * 3, cap=2)


@pytest.mark.parametrize("family,params,count", [
    ("hermitian", {"n": 2}, 3),
    ("hermitian-det1", {"n": 3, "q": 1}, 2),
    ("symplectic", {"n": 5}, 1),
    ("sl", {"n": 2}, 1),
    ("quadratic-odd", {"m": 2}, 3),
    ("quadratic-even", {"m": 3}, 4),
    ("quaternionic-hermitian", {"n": 3}, 4),
    ("power-sign", {"k": 2}, 2),
    ("power-sign", {"k": 3}, 1),
    ("torus", {"kind": "U1"}, 2),
    ("torus", {"kind": "RCGm"}, 1),
])
def test_classification_counts(family, params, count):
    assert classification_count(family, **params).value == count


def test_unknown_family():
    with pytest.raises(KeyError):
        classification_count("octonionic")
