from concurrent.futures import ThreadPoolExecutor

import pytest

from defverify.gluing import (
    GluingDatum,
    compare_with_trivial,
    first_difference,
    restrict_gluing,
    verify_cocycle,
    verify_separated_inputs,
)
from defverify.homs import RingDesc, RingMap, identity_map
from defverify.monoid import MonomialAlgebra
from defverify.polyring import ScalarTower, parse_poly
from defverify.scalars import AlgebraError, CoeffMap, Truncated
from defverify.scenarios.curve import build_curve
from defverify.scenarios.surface import build_surface


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_separated_inputs_curve(p):
    U = MonomialAlgebra.of([(p,), (p + 1,)])
    V = MonomialAlgebra.of([(-(2 * p + 1),), (-(2 * p + 2),)])
    v = verify_separated_inputs(U, V, 64)
    assert v and "1 = " in v.detail and "-1 = " in v.detail


def test_separated_inputs_fail_one_sided():
    U = MonomialAlgebra.of([(2,), (3,)])
    assert not verify_separated_inputs(U, U, 30)


def test_transition_must_be_ordered():
    tw = ScalarTower(2, (), Truncated("eps", 2, 2))
    T = RingDesc("T", tw, ("t",), MonomialAlgebra.of([(1,)], [(1,)]))
    with pytest.raises(AlgebraError):
        GluingDatum("g", {0: T, 1: T}, {(1, 0): T}, {(1, 0): identity_map(T)})


@pytest.mark.parametrize("p", [2, 3])
def test_surface_cocycles_hold_and_match_under_threads(p):
    d = build_surface(p).datum
    serial = verify_cocycle(d)
    assert len(serial) == 10
    assert all(v.ok for _, v in serial)
    with ThreadPoolExecutor(4) as ex:
        threaded = verify_cocycle(d, ex.map)
    assert threaded == serial


def test_flipped_sign_breaks_cocycle():
    d = build_surface(3, mutate="flip-psi43-sign").datum
    bad = [t for t, v in verify_cocycle(d) if not v.ok]
    assert bad and all(3 in t and 4 in t for t in bad)


def test_restrict_gluing_over_eps():
    c = build_curve(3)
    r = restrict_gluing(c.datum, c.pi)
    assert r.coeff == c.eps
    assert all(psi.source.tower.coeff == c.eps for psi in r.transitions.values())


def test_compare_with_trivial_identity():
    tw = ScalarTower(3, (), Truncated("eps", 2, 3))
    T = RingDesc("T", tw, ("t",), MonomialAlgebra.of([(1,)], [(1,)]))
    sh = RingMap.from_var_images("sh", T, T, {"t": parse_poly("t + eps", tw, ("t",))})
    d = GluingDatum("d", {0: T, 1: T}, {(0, 1): T}, {(0, 1): sh})
    # rho_0 = sh, rho_1 = id satisfies rho_1 ∘ sh = rho_0
    ok = compare_with_trivial(d, {0: sh, 1: identity_map(T)})
    assert ok[0][1]
    bad = compare_with_trivial(d, {0: identity_map(T), 1: identity_map(T)})
    assert not bad[0][1]
    assert first_difference(sh, identity_map(T)) is not None
