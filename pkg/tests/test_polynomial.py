from fractions import Fraction

import gmpy2
import pytest
from hypothesis import given, settings, strategies as st

from gaussaim.errors import ContractError, PoleError, RepresentationError
from gaussaim.polynomial import (EXACT, LaurentPoly, Representation, add, differentiate,
                                 evaluate, mul)

F256 = Representation.floating(256)


def P(terms, rep=EXACT):
    return LaurentPoly(terms, rep)


# ---- worked examples ----

def test_add_cancels_to_canonical_form():
    assert add(P({2: 1, 0: 1}), P({2: -1})) == P({0: 1})
    assert add(P({2: 1, 0: 1}), P({2: -1})).terms == {0: 1}


def test_add_merges_like_terms():
    assert add(P({-1: 2}), P({-1: 3})) == P({-1: 5})


def test_additive_identity():
    p = P({-2: 3, 1: Fraction(1, 7)})
    assert add(p, LaurentPoly.zero()) == p


def test_mul_examples():
    assert mul(P({1: 1, 0: 1}), P({1: 1, 0: -1})) == P({2: 1, 0: -1})
    assert mul(P({-1: 1}), P({1: 1})) == P({0: 1})
    assert mul(P({2: 2, -2: 1}), LaurentPoly.constant(3)) == P({2: 6, -2: 3})


def test_differentiate_examples():
    assert differentiate(P({3: 1})) == P({2: 3})
    assert differentiate(P({0: 5})).is_zero()
    assert differentiate(P({-1: 1})) == P({-2: -1})


def test_evaluate_examples():
    assert evaluate(P({2: 1, 0: -1}), 2) == 3
    with pytest.raises(PoleError):
        evaluate(P({-1: 1}), 0)
    assert evaluate(P({-2: 2, 1: 1}), Fraction(1, 2)) == Fraction(17, 2)


def test_evaluate_at_zero_without_poles():
    assert evaluate(P({0: 4, 3: 1}), 0) == 4


def test_mixed_representations_rejected():
    with pytest.raises(RepresentationError):
        add(P({0: 1}), P({0: 1}, F256))
    with pytest.raises(ContractError):
        mul(P({0: 1}), P({0: 1}, Representation.floating(64)))


def test_exact_coefficients_lowest_terms():
    p = P({0: Fraction(6, -4)})
    c = p.coefficient(0)
    assert isinstance(c, type(gmpy2.mpq(0)))
    assert (c.numerator, c.denominator) == (-3, 2)


def test_float_zero_dropped_only_when_exact():
    tiny = gmpy2.mpfr("1e-70", 256)
    p = P({0: 1, 1: tiny}, F256) - P({0: 1}, F256)
    assert p.terms == {1: tiny}


def test_debug_format_roundtrip():
    p = P({-2: Fraction(-1, 3), 0: 7, 5: Fraction(2, 9)})
    pairs = p.debug_terms()
    assert pairs == [(-2, "-1/3"), (0, "7"), (5, "2/9")]
    assert LaurentPoly.from_debug(pairs) == p
    q = p.to_representation(F256)
    assert LaurentPoly.from_debug(q.debug_terms(), F256) == q


# ---- properties (exact mode) ----

coeffs = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.dictionaries(st.integers(-4, 4), coeffs, max_size=5).map(P)


@settings(max_examples=150, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == LaurentPoly.zero()
    assert p * LaurentPoly.constant(1) == p


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_leibniz_rule(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@settings(max_examples=150, deadline=None)
@given(polys, polys, coeffs.filter(lambda x: x != 0))
def test_evaluate_is_ring_homomorphism(p, q, x):
    assert evaluate(p * q, x) == evaluate(p, x) * evaluate(q, x)
    assert evaluate(p + q, x) == evaluate(p, x) + evaluate(q, x)


dyadic = st.builds(lambda m, e: Fraction(m, 2 ** e), st.integers(-2 ** 20, 2 ** 20), st.integers(0, 12))


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(-3, 6), dyadic, min_size=1, max_size=6),
       dyadic.filter(lambda x: x != 0), st.sampled_from([64, 128, 256]))
def test_float_evaluate_matches_exact(terms, x, bits):
    rep = Representation.floating(bits)
    exact = evaluate(P(terms), x)
    approx = evaluate(P(terms, rep), x)
    scale = sum(abs(Fraction(c)) * abs(x) ** e for e, c in terms.items())
    # Horner rounding is bounded relative to the sum of |terms|
    bound = Fraction(2) ** (-(bits - 8)) * scale
    assert abs(Fraction(int(approx.as_integer_ratio()[0]), int(approx.as_integer_ratio()[1])) - exact) <= bound


pos_dyadic = dyadic.filter(lambda x: x > 0)


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(-3, 6), pos_dyadic, min_size=1, max_size=6), pos_dyadic,
       st.sampled_from([64, 128, 256]))
def test_float_evaluate_relative_error_without_cancellation(terms, x, bits):
    exact = evaluate(P(terms), x)
    approx = evaluate(P(terms, Representation.floating(bits)), x)
    num, den = approx.as_integer_ratio()
    assert abs(Fraction(int(num), int(den)) / exact - 1) <= Fraction(2) ** (-(bits - 8))
