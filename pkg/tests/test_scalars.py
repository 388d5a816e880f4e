import itertools
import random

import pytest

from defverify.scalars import (
    AlgebraError,
    CoeffMap,
    PrimeField,
    Truncated,
    fiber_product,
    is_prime,
    is_small_extension,
    is_surjective,
    kernel_dimension,
    kernel_order,
)


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_prime_field_inverse():
    f = PrimeField(7)
    for a in range(1, 7):
        assert (a * f.inv(a)) % 7 == 1
    with pytest.raises((AlgebraError, ZeroDivisionError)):
        f.inv(0)


@pytest.mark.parametrize("bad", [1, 4, 9, -3])
def test_prime_field_rejects_composites(bad):
    with pytest.raises(AlgebraError):
        PrimeField(bad)


def test_truncated_multiplication_truncates():
    A = Truncated("eps", 2, 3)
    e = A.gen()
    assert (e * e).is_zero()
    assert str(1 + e) == "1 + eps"
    assert (A.one() + e) * (A.one() - e) == A.one()


def test_truncated_mult_associative_commutative():
    rng = random.Random(7)
    for p in (2, 3, 5):
        A = Truncated("lam", p + 1, p)
        for _ in range(50):
            a, b, c = (A.elem([rng.randrange(p) for _ in range(p + 1)]) for _ in range(3))
            assert (a * b) * c == a * (b * c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c


def test_frobenius_on_truncated():
    A = Truncated("lam", 4, 3)
    lam = A.gen()
    assert (1 + lam) ** 3 == 1 + lam ** 3


def test_reduction_map_and_kernel():
    lam = Truncated("lam", 4, 3)
    eps = Truncated("eps", 2, 3)
    pi = CoeffMap.reduction(lam, eps)
    assert pi(lam.gen()) == eps.gen()
    assert pi(lam.gen() ** 2).is_zero()
    assert is_surjective(pi)
    assert kernel_dimension(pi) == 2
    assert kernel_order(pi) == 2
    assert not is_small_extension(pi)


def test_small_extension():
    lam = Truncated("lam", 3, 2)
    eps = Truncated("eps", 2, 2)
    assert is_small_extension(CoeffMap.reduction(lam, eps))


def test_kernel_order_trivial_kernel():
    lam = Truncated("lam", 3, 2)
    eps = Truncated("eps", 3, 2)
    pi = CoeffMap.reduction(lam, eps)
    assert kernel_dimension(pi) == 0
    assert kernel_order(pi) == 3


def test_coeff_map_is_ring_hom():
    lam = Truncated("lam", 4, 5)
    eps = Truncated("eps", 2, 5)
    pi = CoeffMap.reduction(lam, eps)
    elems = [lam.elem(c) for c in itertools.product(range(3), repeat=2)]
    for a, b in itertools.product(elems, repeat=2):
        assert pi(a * b) == pi(a) * pi(b)
        assert pi(a + b) == pi(a) + pi(b)


def test_compose_coeff_maps():
    a = Truncated("a", 4, 2)
    b = Truncated("b", 3, 2)
    c = Truncated("c", 2, 2)
    f = CoeffMap.reduction(a, b)
    g = CoeffMap.reduction(b, c)
    h = g.compose(f)
    assert h.source == a and h.target == c
    assert h(a.gen()) == c.gen()
    with pytest.raises(AlgebraError):
        f.compose(g)


def test_fiber_product_pairs():
    lam = Truncated("lam", 3, 2)
    eps = Truncated("eps", 2, 2)
    pi = CoeffMap.reduction(lam, eps)
    F = fiber_product(lam, lam, eps, pi, pi)
    assert F.dim() == 4
    good = F.pair(lam.gen(), lam.gen() + lam.gen() ** 2)
    assert (good * good).left == lam.gen() ** 2
    with pytest.raises(AlgebraError):
        F.pair(lam.gen(), lam.one())


def test_fiber_product_needs_surjections():
    a = Truncated("a", 2, 2)
    b = Truncated("b", 3, 2)
    zero_map = CoeffMap(a, b, b.zero())
    with pytest.raises(AlgebraError):
        fiber_product(a, a, b, zero_map, zero_map)
