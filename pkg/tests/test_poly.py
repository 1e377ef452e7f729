from fractions import Fraction

import pytest

from quadriclab.fields import PrimeField, QQ
from quadriclab.poly import Poly, PolyParseError, PolyRing


def ring3():
    return PolyRing(QQ, ("y1", "y2", "y3"))


def test_parser_grammar():
    r = ring3()
    p = r.parse("y1*y3 - y2^2")
    assert str(p) == "y1*y3-y2^2"
    assert r.parse("1/2*y1 + 1/2*y1") == r.parse("y1")
    assert r.parse("-y1^2") == -(r.var("y1") ** 2)
    assert r.parse("(y1+y2)*(y1-y2)") == r.parse("y1^2 - y2^2")
    assert r.parse("3") == r.const(Fraction(3))
    assert r.parse("2^3") == r.const(Fraction(8))


def test_parser_errors():
    r = ring3()
    with pytest.raises(PolyParseError):
        r.parse("x1 + y1")
    with pytest.raises(PolyParseError):
        r.parse("y1 +")
    with pytest.raises(PolyParseError):
        r.parse("y1 ^ y2")
    with pytest.raises(PolyParseError):
        r.parse("y1 $ y2")


def test_parser_mod_p():
    r = PolyRing(PrimeField(5), ("t",))
    assert r.parse("7*t") == r.parse("2*t")
    assert r.parse("1/2") == r.const(3)
    with pytest.raises(PolyParseError):
        r.parse("1/5")


def test_graded_lex_string_order():
    r = ring3()
    p = r.parse("y3 + y1*y2 + y1 + y2^2")
    # total degree first, then lex on the declared order
    assert str(p) == "y1*y2+y2^2+y1+y3"


def test_arithmetic_and_degree():
    r = ring3()
    p = r.parse("y1 + y2")
    assert (p * p) == r.parse("y1^2 + 2*y1*y2 + y2^2")
    assert (p - p).is_zero()
    assert p.degree() == 1
    assert r.zero.degree() == -1


def test_evaluate_and_substitute():
    r = ring3()
    p = r.parse("y1*y3 - y2^2")
    assert p.evaluate([Fraction(2), Fraction(1), Fraction(3)]) == Fraction(5)
    q = p.substitute({"y2": Fraction(0)})
    assert q == r.parse("y1*y3")


def test_partial_derivatives():
    r = ring3()
    p = r.parse("y1*y3 - y2^2")
    assert p.partial(0) == r.parse("y3")
    assert p.partial(1) == r.parse("-2*y2")
    assert p.partial(2) == r.parse("y1")


def test_directional_derivative_examples():
    # sum_i v_i d p/dy_i evaluated at a point, the spec's micro-examples
    r = ring3()
    p = r.parse("y1*y3 - y2^2")

    def directional(poly, v, at):
        total = QQ.zero
        for i, vi in enumerate(v):
            total = QQ.add(total, QQ.mul(vi, poly.partial(i).evaluate(at)))
        return total

    origin = [Fraction(0)] * 3
    assert directional(p, [Fraction(1), Fraction(0), Fraction(0)], origin) == 0
    assert directional(r.parse("y1"), [Fraction(1), Fraction(0), Fraction(0)],
                       [Fraction(5), Fraction(1), Fraction(2)]) == 1
    assert directional(p, [Fraction(0), Fraction(0), Fraction(1)],
                       [Fraction(1), Fraction(0), Fraction(0)]) == 1


def test_exact_division():
    r = ring3()
    a = r.parse("y1^2 - y2^2")
    b = r.parse("y1 - y2")
    assert a.exact_div(b) == r.parse("y1 + y2")
    with pytest.raises(ArithmeticError):
        r.parse("y1^2 + y2").exact_div(b)


def test_compose_shift():
    r = ring3()
    p = r.parse("y1^2")
    shifted = p.compose([r.parse("y1+1"), r.var("y2"), r.var("y3")])
    assert shifted == r.parse("y1^2 + 2*y1 + 1")


def test_ring_extension_embedding():
    r = ring3()
    big = r.extend(("b11",))
    p = big.embed(r.parse("y1*y3"))
    assert str(p) == "y1*y3"
    assert p.ring is big
