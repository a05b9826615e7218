from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from avlab.field import DEFAULT_PRIME, FieldConfig, is_prime

P = FieldConfig.prime()
Q = FieldConfig.rationals()
elems = st.integers(min_value=-10**6, max_value=10**6)
fracs = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 10**4)


def test_default_prime():
    assert DEFAULT_PRIME == 32003 and is_prime(32003)
    assert FieldConfig.prime().p == 32003


def test_rejects_composite_modulus():
    with pytest.raises(ValueError):
        FieldConfig.prime(32004)
    with pytest.raises(ValueError):
        FieldConfig.parse("prime:1")


@pytest.mark.parametrize("text,expected", [
    ("prime:32003", FieldConfig.prime()),
    ("prime:7", FieldConfig.prime(7)),
    ("rationals", FieldConfig.rationals()),
])
def test_parse(text, expected):
    assert FieldConfig.parse(text) == expected
    assert FieldConfig.parse(str(expected)) == expected


def test_canonical_representatives():
    assert P(-1) == 32002
    assert P(Fraction(1, 2)) * 2 % 32003 == 1
    assert Q("6/4") == Fraction(3, 2)
    assert Q(Fraction(3, -6)).denominator == 2


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        P.inv(0)
    with pytest.raises(ZeroDivisionError):
        Q.inv(Fraction(0))


@given(elems, elems, elems)
def test_prime_axioms(a, b, c):
    a, b, c = P(a), P(b), P(c)
    assert P.add(P.add(a, b), c) == P.add(a, P.add(b, c))
    assert P.mul(P.mul(a, b), c) == P.mul(a, P.mul(b, c))
    assert P.mul(a, P.add(b, c)) == P.add(P.mul(a, b), P.mul(a, c))
    assert P.add(a, P.neg(a)) == 0
    assert 0 <= a < P.p
    if a:
        assert P.mul(a, P.inv(a)) == 1
        assert pow(a, P.p - 2, P.p) * a % P.p == 1


@given(fracs, fracs, fracs)
def test_rational_axioms(a, b, c):
    assert Q.mul(a, Q.add(b, c)) == Q.add(Q.mul(a, b), Q.mul(a, c))
    if a:
        assert Q.mul(a, Q.inv(a)) == 1
    assert Q.div(Q.mul(a, 3), 3) == a


@given(st.integers(min_value=-5000, max_value=5000))
def test_signed_roundtrip(v):
    assert P(P.signed(P(v))) == P(v)
    assert abs(P.signed(P(v))) <= P.p // 2
