import random
from fractions import Fraction

import pytest

from quadriclab.fields import (FieldError, PrimeField, QQ, QuadraticExtension,
                               field_from_descriptor)


def test_rational_basics():
    assert QQ.add(Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert QQ.inv(Fraction(-2, 3)) == Fraction(-3, 2)
    assert QQ.is_square(Fraction(9, 4))
    assert not QQ.is_square(Fraction(-1))
    assert not QQ.is_square(Fraction(2))
    assert QQ.sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert QQ.squarefree_class(Fraction(8)) == 2
    assert QQ.squarefree_class(Fraction(-4, 9)) == -1
    assert QQ.squarefree_class(Fraction(12, 5)) == 15


def test_prime_field_basics():
    f5 = PrimeField(5)
    assert f5.add(3, 4) == 2
    assert f5.mul(3, 4) == 2
    assert f5.inv(2) == 3
    assert f5.from_fraction(Fraction(1, 2)) == 3
    assert f5.is_square(4) and not f5.is_square(2)
    assert f5.sqrt(4) in (2, 3)


def test_even_characteristic_rejected():
    with pytest.raises(FieldError):
        PrimeField(2)
    with pytest.raises(FieldError):
        PrimeField(9)


def test_quadratic_extension_rejects_squares():
    with pytest.raises(FieldError):
        QuadraticExtension(QQ, Fraction(4))
    f7 = PrimeField(7)
    with pytest.raises(FieldError):
        QuadraticExtension(f7, 2)  # 2 = 3^2 mod 7
    QuadraticExtension(f7, 3)      # 3 is a non-residue mod 7


def test_norm_multiplicativity_1000_random_pairs():
    ext = QuadraticExtension(QQ, Fraction(5))
    rng = random.Random(11)
    for _ in range(500):
        x = (Fraction(rng.randrange(-9, 10)), Fraction(rng.randrange(-9, 10)))
        y = (Fraction(rng.randrange(-9, 10)), Fraction(rng.randrange(-9, 10)))
        assert ext.norm(ext.mul(x, y)) == QQ.mul(ext.norm(x), ext.norm(y))
    f11 = PrimeField(11)
    d = next(v for v in range(2, 11) if not f11.is_square(v))
    ext11 = QuadraticExtension(f11, d)
    for _ in range(500):
        x = (rng.randrange(11), rng.randrange(11))
        y = (rng.randrange(11), rng.randrange(11))
        assert ext11.norm(ext11.mul(x, y)) == f11.mul(ext11.norm(x), ext11.norm(y))


def test_extension_inverse_and_sqrt_relation():
    ext = QuadraticExtension(QQ, Fraction(5))
    s = ext.sqrt_d
    assert ext.mul(s, s) == (Fraction(5), Fraction(0))
    x = (Fraction(2), Fraction(3))
    assert ext.mul(x, ext.inv(x)) == ext.one


def test_field_descriptor_round_trip():
    assert field_from_descriptor("Q") is QQ
    f = field_from_descriptor({"Fp": 7})
    assert isinstance(f, PrimeField) and f.p == 7
    with pytest.raises(FieldError):
        field_from_descriptor({"Fp": 2})
    with pytest.raises(FieldError):
        field_from_descriptor("R")
