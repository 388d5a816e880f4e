import itertools

import pytest

from defverify.monoid import (
    MonoidError,
    MonomialAlgebra,
    achievable_exponents,
    algebra_contains,
    algebra_equal,
    conductor,
    integer_kernel,
    localization_check,
    module_intersection_basis,
    rank1_member,
    rank1_minimal_generators,
    semigroup_member,
    semigroup_points,
    semigroup_structure,
)


def naive_points(gens, box, depth=12):
    """All nonnegative combinations of gens with total multiplicity <= depth, inside box."""
    out = set()
    for mult in itertools.product(range(depth + 1), repeat=len(gens)):
        if sum(mult) > depth:
            continue
        v = tuple(sum(m * g[i] for m, g in zip(mult, gens)) for i in range(len(box)))
        if all(lo <= a <= hi for a, (lo, hi) in zip(v, box)):
            out.add(v)
    return out


def test_validation():
    with pytest.raises(MonoidError):
        MonomialAlgebra.of([(1, 0), (1, 0)])
    with pytest.raises(MonoidError):
        MonomialAlgebra(2, ((1, 0), (0, 1, 2)))
    with pytest.raises(MonoidError):
        MonomialAlgebra.of([(1, 0)], invertible=[(0, 1)])


def test_witness_recombines():
    R = MonomialAlgebra.of([(2, 0), (3, 0), (0, 1), (1, -1)], invertible=[(0, 1)])
    for v in [(5, 0), (7, -3), (4, 2), (1, -1), (6, -10)]:
        w = semigroup_member(v, R, 40)
        assert w is not None, v
        assert w.combine(R) == v
    assert semigroup_member((-1, 0), R, 40) is None


def test_rank_mismatch():
    R = MonomialAlgebra.of([(1, 0), (0, 1)])
    with pytest.raises(MonoidError):
        semigroup_member((1,), R, 10)


@pytest.mark.parametrize("gens", [[(2, 1), (0, 1), (3, 0)], [(1, 2), (2, 1)], [(2, 0), (3, 0), (1, 1)]])
def test_points_match_naive_enumeration(gens):
    box = [(0, 6), (0, 6)]
    R = MonomialAlgebra.of(gens)
    assert semigroup_points(R, box, 40) == naive_points(gens, box)


def test_rank1_membership():
    R = MonomialAlgebra.of([(3,), (5,)])
    assert [n for n in range(12) if rank1_member(n, R)] == [0, 3, 5, 6, 8, 9, 10, 11]
    assert conductor(3, 5) == 8
    assert not rank1_member(-3, R)
    assert rank1_member(-3, MonomialAlgebra.of([(3,), (5,)], invertible=[(3,)]))
    assert rank1_minimal_generators([6, 3, 5, 9, 10]) == [3, 5]


def test_achievable_exponents():
    R = MonomialAlgebra.of([(2,), (3,)])
    assert achievable_exponents(R, 0, (-3, 5), sign=-1) == {-3, -2, 0}
    assert achievable_exponents(R, 1, (0, 5)) == {1, 3, 4, 5}


def test_containment_and_localization():
    big = MonomialAlgebra.of([(1, 0), (0, 1)])
    small = MonomialAlgebra.of([(2, 0), (1, 1), (0, 2)])
    assert algebra_contains(big, small, 20)
    assert not algebra_contains(small, big, 20)
    loc = MonomialAlgebra.of([(1, 0), (0, 1)], invertible=[(1, 0)])
    assert localization_check(loc, big, (1, 0), 20)
    assert not localization_check(big, big, (1, 0), 20)
    with pytest.raises(MonoidError):
        localization_check(loc, small, (1, 0), 20)
    assert algebra_equal(MonomialAlgebra.of([(1,), (-1,)]), MonomialAlgebra.of([(1,)], invertible=[(1,)]), 10)


def test_intersection_basis_in_small_box():
    R = MonomialAlgebra.of([(1, 0), (0, 1)])
    R2 = MonomialAlgebra.of([(2, 0), (0, 1)])
    basis = module_intersection_basis((1, 0), R, R2, [(0, 3), (0, 1)])
    assert basis == [(2, 0), (2, 1)]
    with pytest.raises(MonoidError):
        module_intersection_basis((1, 0), R, R2, [(3, 0), (0, 1)])


def test_structure_free_and_cone():
    free = semigroup_structure(MonomialAlgebra.of([(1, 0), (0, 1)]), 20)
    assert free.is_free and free.describe() == "N^2 x Z^0"
    cone = semigroup_structure(MonomialAlgebra.of([(2, 0), (1, 1), (0, 2)]), 20)
    assert not cone.is_free and len(cone.minimal_generators) == 3
    torus = semigroup_structure(MonomialAlgebra.of([(1, 0), (0, 1)], invertible=[(1, 0), (0, 1)]), 20)
    assert torus.is_free and torus.unit_rank == 2
    torsion = semigroup_structure(MonomialAlgebra.of([(2,)], invertible=[(2,)]), 20)
    assert not torsion.is_free


def test_integer_kernel():
    vecs = [(1, 0), (0, 1), (1, 1), (2, 3)]
    ker = integer_kernel(vecs)
    assert len(ker) == 2
    for c in ker:
        assert all(sum(ci * v[i] for ci, v in zip(c, vecs)) == 0 for i in range(2))
