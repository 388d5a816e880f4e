import random

import pytest
import sympy

from defverify.polyring import (
    LaurentPoly,
    NotAUnit,
    RewriteRule,
    ScalarTower,
    coefficient_at,
    frobenius_power,
    invert_unit,
    naive_power,
    normal_form,
    parse_poly,
)
from defverify.scalars import AlgebraError, CoeffMap, Truncated

from helpers import random_poly


def ring(p=3, order=2, symbols=()):
    return ScalarTower(p, symbols, Truncated("eps", order, p))


def P(text, p=3, vars=("t",), order=2, symbols=()):
    return parse_poly(text, ring(p, order, symbols), vars)


def test_parse_and_print():
    f = P("t + eps*t^-3 - 2")
    assert str(f) == "eps*t^-3 + 1 + t"
    assert P("(t+1)^3") == P("t^3 + 1")


def test_truncation_of_coefficient_variable():
    assert P("eps^2*t") == 0
    assert P("(1 + eps)^2") == P("1 + 2*eps")


def test_negative_powers_of_units():
    u = P("t + eps*t^-3")
    assert u ** -1 * u == 1
    assert str(u ** -1) == "-eps*t^-5 + t^-1"


def test_non_unit_inverse_rejected():
    with pytest.raises(NotAUnit):
        invert_unit(P("t + 1"))
    with pytest.raises(NotAUnit):
        invert_unit(P("eps*t"))


def test_symbols_are_not_invertible():
    tw = ring(symbols=("a",))
    with pytest.raises(NotAUnit):
        invert_unit(parse_poly("a*t", tw, ("t",)))


def test_matches_sympy_multiplication():
    rng = random.Random(1)
    x, y, z = sympy.symbols("x y z")
    for p in (2, 3, 5):
        for _ in range(30):
            f = random_poly(rng, p, order=1)
            g = random_poly(rng, p, order=1)

            def to_sympy(h):
                # shift exponents so sympy sees an honest polynomial
                return sum(
                    c * x ** (k[0] + 6) * y ** (k[1] + 6) * z ** (k[2] + 6) for k, c in h.terms.items()
                )

            prod = sympy.Poly(to_sympy(f) * to_sympy(g), x, y, z, modulus=p)
            ours = f * g
            expect = sympy.Poly(
                sum(c * x ** (k[0] + 12) * y ** (k[1] + 12) * z ** (k[2] + 12) for k, c in ours.terms.items()),
                x, y, z, modulus=p,
            )
            assert prod == expect


def test_normal_form_rewrites_y_power():
    p = 3
    tw = ScalarTower(p)
    vars = ("x", "y", "z")
    rule = RewriteRule("y", p, (1, 0, 1))
    f = parse_poly("y^7 + x*y^2", tw, vars)
    assert normal_form(f, rule) == parse_poly("x^2*z^2*y + x*y^2", tw, vars)
    with pytest.raises(AlgebraError):
        normal_form(parse_poly("y^-1", tw, vars), rule)


def test_rule_validation():
    with pytest.raises(AlgebraError):
        RewriteRule("y", 0, (1, 0, 1))
    with pytest.raises(AlgebraError):
        RewriteRule("y", 2, (1, 1, 1)).check(("x", "y", "z"))


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_frobenius_identity(p):
    tw = ring(p)
    t = LaurentPoly.gen(tw, ("t",), "t")
    x = LaurentPoly.gen(tw.with_symbols(["x"]), ("t",), "x")
    tx = LaurentPoly.gen(tw.with_symbols(["x"]), ("t",), "t")
    eps = LaurentPoly.gen(tw.with_symbols(["x"]), ("t",), "eps")
    assert frobenius_power(tx + x * eps, p) == tx ** p
    assert naive_power(t + 1, p) == t ** p + 1


def test_frobenius_power_rejects_negative():
    with pytest.raises(AlgebraError):
        frobenius_power(P("t"), -1)


def test_map_coefficients_reduction():
    lam = Truncated("lam", 4, 3)
    eps = Truncated("eps", 2, 3)
    f = parse_poly("t + lam*t^2 + lam^2*t^3", ScalarTower(3, (), lam), ("t",))
    g = f.map_coefficients(CoeffMap.reduction(lam, eps), ScalarTower(3, (), eps))
    assert str(g) == "t + eps*t^2"


def test_substitute_and_specialize():
    tw = ScalarTower(5, ("a",), Truncated("eps", 2, 5))
    f = parse_poly("x*y + a*eps", tw, ("x", "y"))
    g = f.substitute({"x": parse_poly("y^2", tw, ("x", "y"))})
    assert g == parse_poly("y^3 + a*eps", tw, ("x", "y"))
    h = f.specialize({"a": 2, "x": 1})
    assert str(h) == "2*eps + y"


def test_coefficient_at():
    f = P("t^2 + eps*t^2 + t")
    assert str(coefficient_at(f, (2,))) == "1 + eps"


def test_embed_adds_variables():
    f = P("t^2")
    g = f.embed(("s", "t"))
    assert g.vars == ("s", "t") and str(g) == "t^2"
    with pytest.raises(AlgebraError):
        f.embed(("s",))


def test_mixed_rings_rejected():
    with pytest.raises(AlgebraError):
        P("t") + P("t", p=5)
