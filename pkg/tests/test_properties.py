"""Property suites for the polynomial layer (hypothesis)."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from defverify.polyring import frobenius_power, invert_unit, naive_power, normal_form

from helpers import poly_strategy, quotient_rule, tower, unit_strategy

PRIMES = (2, 3, 5)
NF_CASES = settings(max_examples=200, deadline=None, derandomize=True)
CASES = settings(max_examples=100, deadline=None, derandomize=True)


@pytest.mark.parametrize("p", PRIMES)
def test_normal_form_idempotent(p):
    rule = quotient_rule(p)

    @NF_CASES
    @given(poly_strategy(p, lo=0))
    def check(f):
        nf = normal_form(f, rule)
        assert normal_form(nf, rule) == nf
        assert all(k[1] < p for k in nf.terms)

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_normal_form_multiplicative(p):
    rule = quotient_rule(p)

    @NF_CASES
    @given(poly_strategy(p, max_terms=4, lo=0), poly_strategy(p, max_terms=4, lo=0))
    def check(f, g):
        lhs = normal_form(f * g, rule)
        rhs = normal_form(normal_form(f, rule) * normal_form(g, rule), rule)
        assert lhs == rhs

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_normal_form_kills_relation(p):
    rule = quotient_rule(p)

    @NF_CASES
    @given(poly_strategy(p, max_terms=3, lo=0))
    def check(f):
        rel = rule.relation(tower(p), f.vars)
        assert normal_form(f * rel, rule).is_zero()

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_unit_inverse_round_trip(p):
    @CASES
    @given(unit_strategy(p))
    def check(u):
        inv = invert_unit(u)
        assert u * inv == 1
        assert inv * u == 1

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_frobenius_additive(p):
    @CASES
    @given(poly_strategy(p, order=p + 1, max_terms=4), poly_strategy(p, order=p + 1, max_terms=4))
    def check(f, g):
        assert frobenius_power(f + g, p) == frobenius_power(f, p) + frobenius_power(g, p)
        assert naive_power(f + g, p) == naive_power(f, p) + naive_power(g, p)

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_frobenius_matches_naive(p):
    @CASES
    @given(poly_strategy(p, order=3, max_terms=4), st.integers(0, 3 * p + 1))
    def check(f, e):
        assert frobenius_power(f, e) == naive_power(f, e)

    check()


@pytest.mark.parametrize("p", PRIMES)
def test_ring_axioms(p):
    @CASES
    @given(poly_strategy(p, max_terms=3), poly_strategy(p, max_terms=3), poly_strategy(p, max_terms=3))
    def check(f, g, h):
        assert (f * g) * h == f * (g * h)
        assert f * g == g * f
        assert f * (g + h) == f * g + f * h
        assert f - f == 0

    check()
