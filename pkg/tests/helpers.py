"""Random polynomial generators shared by the property tests and the acceptance run."""
from __future__ import annotations

import random

from hypothesis import strategies as st

from defverify.polyring import LaurentPoly, RewriteRule, ScalarTower
from defverify.scalars import Truncated

VARS3 = ("x", "y", "z")


def tower(p: int, order: int = 2, symbols=()) -> ScalarTower:
    return ScalarTower(p, tuple(symbols), Truncated("eps", order, p))


def quotient_rule(p: int) -> RewriteRule:
    """y^p -> x*z"""
    return RewriteRule("y", p, (1, 0, 1))


def poly_from_terms(tw: ScalarTower, vars, terms) -> LaurentPoly:
    """terms: [(exps, cpow, c)]."""
    z = LaurentPoly.zero(tw, vars)
    out = z
    for exps, cpow, c in terms:
        out = out + LaurentPoly(tw, vars, {tuple(exps) + (0,) * len(tw.symbols) + (cpow,): c})
    return out


def term_strategy(p: int, nvars: int, order: int, lo: int = -3, hi: int = 5):
    return st.tuples(
        st.lists(st.integers(lo, hi), min_size=nvars, max_size=nvars),
        st.integers(0, order - 1),
        st.integers(1, p - 1) if p > 2 else st.just(1),
    )


def poly_strategy(p: int, vars=VARS3, order: int = 2, max_terms: int = 5, lo: int = -3, hi: int = 5):
    tw = tower(p, order)
    return st.lists(term_strategy(p, len(vars), order, lo, hi), min_size=0, max_size=max_terms).map(
        lambda ts: poly_from_terms(tw, vars, ts)
    )


def unit_strategy(p: int, vars=VARS3, order: int = 3):
    """c * m * (1 + eps * N) with m a Laurent monomial."""
    tw = tower(p, order)

    def build(args):
        c, mono, nil = args
        u = LaurentPoly.monomial(tw, vars, mono, c)
        n = poly_from_terms(tw, vars, nil)
        eps = LaurentPoly.gen(tw, vars, "eps")
        return u * (1 + eps * n)

    return st.tuples(
        st.integers(1, p - 1),
        st.lists(st.integers(-4, 4), min_size=len(vars), max_size=len(vars)),
        st.lists(term_strategy(p, len(vars), order), max_size=4),
    ).map(build)


# plain seeded generators for the acceptance run -----------------------------------


def random_poly(
    rng: random.Random, p: int, vars=VARS3, order: int = 2, max_terms: int = 5, lo: int = -3
) -> LaurentPoly:
    tw = tower(p, order)
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        exps = [rng.randint(lo, 5) for _ in vars]
        terms.append((exps, rng.randint(0, order - 1), rng.randint(1, p - 1) if p > 2 else 1))
    return poly_from_terms(tw, vars, terms)


def random_unit(rng: random.Random, p: int, vars=VARS3, order: int = 3) -> LaurentPoly:
    tw = tower(p, order)
    u = LaurentPoly.monomial(tw, vars, [rng.randint(-4, 4) for _ in vars], rng.randint(1, p - 1))
    eps = LaurentPoly.gen(tw, vars, "eps")
    return u * (1 + eps * random_poly(rng, p, vars, order, 4))
