import pytest

from defverify.homs import (
    RingDesc,
    RingMap,
    check_iso_nilpotent,
    check_well_defined,
    coefficient_change,
    compose,
    compose_path,
    diagram_commutes,
    extend_to_localization,
    identity_map,
    inclusion,
    invert_unipotent,
    maps_equal,
    restrict_coefficients,
)
from defverify.monoid import MonomialAlgebra
from defverify.polyring import LaurentPoly, RewriteRule, ScalarTower, parse_poly
from defverify.scalars import AlgebraError, CoeffMap, Truncated

P = 3
EPS = Truncated("eps", 2, P)
TW = ScalarTower(P, (), EPS)


def cusp(tw=TW):
    return RingDesc("R", tw, ("t",), MonomialAlgebra.of([(P,), (P + 1,)]))


def laurent(tw=TW):
    return RingDesc("T", tw, ("t",), MonomialAlgebra.of([(1,)], [(1,)]))


def el(text, R):
    return parse_poly(text, R.tower, R.vars)


def test_shift_by_eps_over_t_is_well_defined():
    T = laurent()
    beta = RingMap.from_var_images("beta", T, T, {"t": el("t + eps*t^-2", T)})
    assert check_well_defined(beta)
    assert check_iso_nilpotent(beta)


def test_shift_does_not_preserve_cusp():
    R = cusp()
    # (t^4 + eps*t)^3 = t^12 in characteristic 3, but t is not in R
    bad = RingMap("bad", R, R, [el("t^3", R), el("t^4 + eps*t", R)])
    v = check_well_defined(bad)
    assert not v and "not in" in v.detail


def test_broken_relation_detected():
    R = cusp()
    # (t^3 + eps*t^3)^4 = t^12 + eps*t^12 != (t^4)^3
    f = RingMap("f", R, R, [el("t^3 + eps*t^3", R), el("t^4", R)])
    v = check_well_defined(f)
    assert not v and "(t^3)^4" in v.detail


def test_generator_image_count_enforced():
    R = cusp()
    with pytest.raises(AlgebraError):
        RingMap("f", R, R, [el("t^3", R)])


def test_compose_and_paths():
    T = laurent()
    a = RingMap.from_var_images("a", T, T, {"t": el("t + eps", T)})
    b = RingMap.from_var_images("b", T, T, {"t": el("t - eps", T)})
    ab = compose(b, a)
    assert maps_equal(ab, identity_map(T)) or ab.images == identity_map(T).images
    assert diagram_commutes([a, b], [identity_map(T)])
    assert not diagram_commutes([a, a], [identity_map(T)])
    assert compose_path([a]).images == a.images


def test_inclusion_and_coefficient_change():
    R, T = cusp(), laurent()
    inc = inclusion(R, T)
    assert check_well_defined(inc)
    lam = Truncated("lam", 3, P)
    pi = CoeffMap.reduction(lam, EPS)
    Tl = laurent(ScalarTower(P, (), lam))
    ch = coefficient_change(Tl, pi)
    f = parse_poly("t + lam*t^2 + lam^2", Tl.tower, ("t",))
    assert str(ch(f)) == "t + eps*t^2"


def test_restrict_coefficients_commutes_with_reduction():
    lam = Truncated("lam", 3, P)
    pi = CoeffMap.reduction(lam, EPS)
    Tl = laurent(ScalarTower(P, (), lam))
    g = RingMap.from_var_images("g", Tl, Tl, {"t": parse_poly("t + lam + lam^2*t", Tl.tower, ("t",))})
    gr = restrict_coefficients(g, pi)
    assert diagram_commutes([g, coefficient_change(Tl, pi)], [coefficient_change(Tl, pi), gr])


def test_extend_to_localization():
    R = cusp()
    T = laurent()
    f = RingMap("f", R, R, [el("t^3", R), el("t^4", R)])
    ext = extend_to_localization(f, T)
    assert ext.images == (el("t", T),)
    with pytest.raises(AlgebraError):
        extend_to_localization(identity_map(T), R)


def test_invert_unipotent_two_variables():
    tw = ScalarTower(P, (), Truncated("lam", 4, P))
    R = RingDesc("U", tw, ("x", "y"), MonomialAlgebra.of([(1, 0), (0, 1)], [(0, 1)]))
    f = RingMap.from_var_images("f", R, R, {"x": parse_poly("x + lam*y", tw, ("x", "y"))})
    g = invert_unipotent(f)
    assert compose(g, f).images == identity_map(R).images
    assert compose(f, g).images == identity_map(R).images


def test_iso_rejects_non_identity_reduction():
    T = laurent()
    f = RingMap.from_var_images("f", T, T, {"t": el("2*t", T)})
    assert not check_iso_nilpotent(f)
    with pytest.raises(AlgebraError):
        invert_unipotent(f)


def test_quotient_ring_map():
    tw = ScalarTower(2, (), Truncated("eps", 2, 2))
    V = ("x", "y", "z")
    Q = RingDesc("Q", tw, V, MonomialAlgebra.of([(1, 0, 0), (0, 1, 0), (0, 0, 1)]), RewriteRule("y", 2, (1, 0, 1)))
    good = RingMap.from_var_images("g", Q, Q, {"y": parse_poly("y + eps*x", tw, V)})
    assert check_well_defined(good)
    bad = RingMap.from_var_images("b", Q, Q, {"x": parse_poly("x + eps", tw, V)})
    assert not check_well_defined(bad)
