import pytest
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from corestar.poly import (Polynomial, ParseError, parse_poly, serialize_poly,
                           p_add, p_mul, p_scale, p_diff_x, p_diff_p,
                           p_xvar, p_pvar, p_const, p_truncate, p_at_p0,
                           rat_from_str, rat_to_str)


# small random polynomial strategy over 2 variables, exact rationals
def _monomials(n):
    e = st.integers(min_value=0, max_value=3)
    return st.tuples(st.tuples(*([e] * n)), st.tuples(*([e] * n)))


def _polys(n=2):
    coeff = st.builds(Fraction,
                      st.integers(min_value=-50, max_value=50),
                      st.integers(min_value=1, max_value=9))
    return st.dictionaries(_monomials(n), coeff, max_size=4).map(
        lambda d: {m: c for m, c in d.items() if c})


@given(_polys(), _polys(), _polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(a, b, c):
    assert p_add(a, b) == p_add(b, a)
    assert p_mul(a, b) == p_mul(b, a)
    assert p_mul(a, p_add(b, c)) == p_add(p_mul(a, b), p_mul(a, c))
    assert p_mul(p_mul(a, b), c) == p_mul(a, p_mul(b, c))


@given(_polys())
@settings(max_examples=40, deadline=None)
def test_additive_inverse(a):
    assert p_add(a, p_scale(a, Fraction(-1))) == {}


@given(_polys())
@settings(max_examples=40, deadline=None)
def test_partials_commute(a):
    assert p_diff_x(p_diff_x(a, 0), 1) == p_diff_x(p_diff_x(a, 1), 0)
    assert p_diff_x(p_diff_p(a, 1), 0) == p_diff_p(p_diff_x(a, 0), 1)


@given(_polys())
@settings(max_examples=40, deadline=None)
def test_leibniz_rule(a):
    b = {((1, 0), (0, 1)): Fraction(3, 2)}
    lhs = p_diff_x(p_mul(a, b), 0)
    rhs = p_add(p_mul(p_diff_x(a, 0), b), p_mul(a, p_diff_x(b, 0)))
    assert lhs == rhs


@given(_polys())
@settings(max_examples=50, deadline=None)
def test_serialize_parse_roundtrip(a):
    s = serialize_poly(2, a)
    assert parse_poly(s, 2).terms == a


def test_parse_basics():
    assert parse_poly("x1*x2", 2).terms == p_mul(p_xvar(2, 0), p_xvar(2, 1))
    assert parse_poly("x1^2 - 3*p2", 2).terms == p_add(
        p_mul(p_xvar(2, 0), p_xvar(2, 0)), p_scale(p_pvar(2, 1), -3))
    assert parse_poly("1/2", 2).terms == p_const(2, Fraction(1, 2))
    assert parse_poly("-x1", 2).terms == p_scale(p_xvar(2, 0), -1)
    assert parse_poly("(x1 + x2)^2", 2).terms == parse_poly(
        "x1^2 + 2*x1*x2 + x2^2", 2).terms


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as ei:
        parse_poly("x1 + ", 2)
    assert "position" in str(ei.value)
    with pytest.raises(ParseError):
        parse_poly("x7", 2)  # unknown variable for dim 2
    with pytest.raises(ParseError):
        parse_poly("x1^(-2)", 2)
    with pytest.raises(ParseError):
        parse_poly("1/0", 2)


def test_truncate_and_projection():
    a = p_add(p_mul(p_pvar(2, 0), p_pvar(2, 0)), p_xvar(2, 0))
    kept, dropped = p_truncate(a, 1)
    assert dropped and kept == p_xvar(2, 0)
    assert p_at_p0(a) == p_xvar(2, 0)


def test_rational_strings():
    assert rat_from_str("-3/4") == Fraction(-3, 4)
    assert rat_to_str(Fraction(5)) == "5"
    assert rat_to_str(Fraction(-1, 6)) == "-1/6"
    with pytest.raises(ValueError):
        rat_from_str("0.5")


def test_polynomial_wrapper_is_hashable_and_exact():
    q = Polynomial.from_terms(2, parse_poly("x1^2 + 1/3", 2).terms)
    r = Polynomial.from_terms(2, parse_poly("1/3 + x1^2", 2).terms)
    assert q == r and hash(q) == hash(r)
    assert (q * r).terms == p_mul(q.terms, r.terms)
