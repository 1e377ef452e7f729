"""Exact ground fields: Q, prime fields F_p (p odd), and quadratic extensions.

Elements are plain Python values (Fraction for Q, int in [0, p) for F_p,
(a, b) pairs meaning a + b*sqrt(d) for quadratic extensions).  The field
object supplies all arithmetic, so polynomials and matrices never need to
know the representation.
"""

from __future__ import annotations

import math
from fractions import Fraction


class FieldError(ValueError):
    """Invalid field construction or element operation."""


class Field:
    """Common interface of the concrete fields.

    Subclasses must define ``zero``, ``one``, ``characteristic`` and the
    arithmetic methods.  ``sub`` and ``div`` have default implementations.
    """

    zero = None
    one = None
    characteristic = 0

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero

    def eq(self, a, b):
        return a == b

    def from_int(self, n):
        raise NotImplementedError

    def from_fraction(self, q):
        raise NotImplementedError

    def to_str(self, a):
        return str(a)

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        result = self.one
        while n:
            if n & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            n >>= 1
        return result

    # exact division for the ring protocol shared with polynomial rings
    def exact_div(self, a, b):
        return self.div(a, b)

    def is_unit(self, a):
        return not self.is_zero(a)


def _squarefree_part(n: int) -> int:
    """Largest squarefree divisor of n, keeping the sign (n != 0)."""
    sign = -1 if n < 0 else 1
    n = abs(n)
    result = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            count = 0
            while n % d == 0:
                n //= d
                count += 1
            if count % 2 == 1:
                result *= d
        d += 1
    return sign * result * n


class RationalField(Field):
    """The rationals, with Fraction elements (lowest terms, positive denominator)."""

    zero = Fraction(0)
    one = Fraction(1)
    characteristic = 0
    name = "Q"

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def from_fraction(self, q):
        return Fraction(q)

    def is_square(self, a) -> bool:
        if a < 0:
            return False
        if a == 0:
            return True
        n, d = a.numerator, a.denominator
        return math.isqrt(n) ** 2 == n and math.isqrt(d) ** 2 == d

    def sqrt(self, a):
        if not self.is_square(a):
            raise FieldError("not a square in Q: %s" % a)
        return Fraction(math.isqrt(a.numerator), math.isqrt(a.denominator))

    def squarefree_class(self, a):
        """Squarefree integer representing a modulo nonzero squares."""
        if a == 0:
            raise FieldError("0 has no square class")
        return _squarefree_part(a.numerator * a.denominator)

    def __repr__(self):
        return "QQ"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(Field):
    """F_p for an odd prime p; elements are ints reduced to [0, p).

    p = 2 is rejected: the polar-form convention used by the Clifford
    construction needs 2 invertible.
    """

    characteristic = None  # set per instance

    def __init__(self, p: int):
        if not _is_prime(p):
            raise FieldError("modulus %d is not prime" % p)
        if p == 2:
            raise FieldError("char2_unsupported: F_2 is not supported (2 must be invertible)")
        self.p = p
        self.zero = 0
        self.one = 1
        self.characteristic = p
        self.name = "F%d" % p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_%d" % self.p)
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def from_fraction(self, q):
        den = q.denominator % self.p
        if den == 0:
            raise FieldError("denominator divisible by %d" % self.p)
        return (q.numerator % self.p) * self.inv(den) % self.p

    def is_square(self, a) -> bool:
        a %= self.p
        if a == 0:
            return True
        return pow(a, (self.p - 1) // 2, self.p) == 1

    def sqrt(self, a):
        a %= self.p
        # p is small in all intended uses; a linear scan is exact and simple
        for r in range((self.p + 1) // 2):
            if r * r % self.p == a:
                return r
        raise FieldError("not a square in F_%d: %d" % (self.p, a))

    def elements(self):
        return range(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return "GF(%d)" % self.p


class QuadraticExtension(Field):
    """k(sqrt(d)) for a verified non-square d of the base field k.

    Elements are pairs (a, b) of base elements meaning a + b*sqrt(d).
    """

    def __init__(self, base: Field, d):
        if base.is_zero(d):
            raise FieldError("d = 0 does not define a quadratic extension")
        if base.is_square(d):
            raise FieldError("d = %s is a square in %s; refusing degenerate extension"
                             % (base.to_str(d), getattr(base, "name", base)))
        self.base = base
        self.d = d
        self.zero = (base.zero, base.zero)
        self.one = (base.one, base.zero)
        self.characteristic = base.characteristic
        self.name = "%s(sqrt(%s))" % (getattr(base, "name", "k"), base.to_str(d))
        self.sqrt_d = (base.zero, base.one)

    def add(self, a, b):
        return (self.base.add(a[0], b[0]), self.base.add(a[1], b[1]))

    def neg(self, a):
        return (self.base.neg(a[0]), self.base.neg(a[1]))

    def mul(self, a, b):
        k = self.base
        # (a0 + a1 s)(b0 + b1 s) = a0 b0 + d a1 b1 + (a0 b1 + a1 b0) s
        re = k.add(k.mul(a[0], b[0]), k.mul(self.d, k.mul(a[1], b[1])))
        im = k.add(k.mul(a[0], b[1]), k.mul(a[1], b[0]))
        return (re, im)

    def conj(self, a):
        return (a[0], self.base.neg(a[1]))

    def norm(self, a):
        k = self.base
        return k.sub(k.mul(a[0], a[0]), k.mul(self.d, k.mul(a[1], a[1])))

    def inv(self, a):
        n = self.norm(a)
        if self.base.is_zero(n):
            raise ZeroDivisionError("inverse of 0 in %s" % self.name)
        ninv = self.base.inv(n)
        return (self.base.mul(a[0], ninv), self.base.neg(self.base.mul(a[1], ninv)))

    def from_int(self, n):
        return (self.base.from_int(n), self.base.zero)

    def from_fraction(self, q):
        return (self.base.from_fraction(q), self.base.zero)

    def from_base(self, a):
        return (a, self.base.zero)

    def to_str(self, a):
        re = self.base.to_str(a[0])
        if self.base.is_zero(a[1]):
            return re
        im = self.base.to_str(a[1])
        if self.base.is_zero(a[0]):
            return "%s*s" % im
        return "%s+%s*s" % (re, im)

    def __repr__(self):
        return self.name


QQ = RationalField()


def field_from_descriptor(desc) -> Field:
    """Build a field from the JSON descriptor: "Q" or {"Fp": p}."""
    if desc == "Q":
        return QQ
    if isinstance(desc, dict) and set(desc.keys()) == {"Fp"}:
        return PrimeField(int(desc["Fp"]))
    raise FieldError("unknown field descriptor: %r" % (desc,))


def field_descriptor(field: Field):
    if isinstance(field, RationalField):
        return "Q"
    if isinstance(field, PrimeField):
        return {"Fp": field.p}
    raise FieldError("field %r has no file descriptor" % field)
