from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hochkind.errors import SchemaError
from hochkind.fields import QQ, PrimeField, field_from_string


def test_rationals_basics():
    assert QQ.name == "Q"
    assert QQ.char == 0
    assert not QQ.finite
    assert QQ.of(3) == Fraction(3)
    assert QQ.parse("3/2") == Fraction(3, 2)
    assert QQ.parse("-7") == Fraction(-7)
    assert QQ.format(Fraction(-3, 4)) == "-3/4"
    assert QQ.format(Fraction(5)) == "5"
    assert QQ.div(QQ.of(1), QQ.of(3)) == Fraction(1, 3)
    assert QQ.is_zero(QQ.sub(QQ.of(2), QQ.of(2)))


def test_prime_field_basics():
    f5 = PrimeField(5)
    assert f5.name == "F5"
    assert f5.char == 5
    assert f5.finite
    assert f5.of(7) == 2
    assert f5.of(-1) == 4
    assert f5.parse("3/2") == f5.mul(3, f5.inv(2))
    assert sorted(f5.elements()) == [0, 1, 2, 3, 4]


def test_prime_field_rejects_composite():
    with pytest.raises(SchemaError):
        PrimeField(6)
    with pytest.raises(SchemaError):
        PrimeField(1)


def test_field_from_string():
    assert field_from_string("Q") is not None
    assert field_from_string("Q").char == 0
    assert field_from_string("F7").char == 7
    with pytest.raises(SchemaError):
        field_from_string("F9")
    with pytest.raises(SchemaError):
        field_from_string("R")


@given(st.integers(min_value=1, max_value=4))
def test_f5_inverse_property(a):
    f5 = PrimeField(5)
    assert f5.mul(a, f5.inv(a)) == f5.one


@given(
    st.fractions(min_value=-9, max_value=9, max_denominator=7),
    st.fractions(min_value=-9, max_value=9, max_denominator=7),
)
def test_rational_roundtrip_and_ring_laws(a, b):
    assert QQ.parse(QQ.format(a)) == a
    assert QQ.add(a, b) == QQ.add(b, a)
    assert QQ.sub(a, b) == QQ.add(a, QQ.neg(b))
    assert QQ.mul(a, b) == QQ.mul(b, a)


@given(st.integers(min_value=0, max_value=6), st.integers(min_value=0, max_value=6))
def test_f7_parse_format_roundtrip(a, b):
    f7 = PrimeField(7)
    assert f7.parse(f7.format(a)) == a
    assert f7.add(a, b) == (a + b) % 7
    assert f7.mul(a, b) == (a * b) % 7
