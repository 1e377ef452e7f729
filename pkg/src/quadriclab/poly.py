"""Sparse multivariate polynomials over an exact field.

Terms are stored as {exponent tuple: nonzero coefficient}.  The monomial
order is graded lexicographic (total degree first, then lex on the declared
variable order), fixed globally so printed polynomials and elimination
traces are byte-reproducible.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import Field, FieldError


class PolyParseError(ValueError):
    """Syntax error in a polynomial string; carries the offset."""


class PolyRing:
    """Polynomial ring k[x1, ..., xn] acting as the element factory.

    Also implements the ring protocol used by the matrix code (add, mul,
    neg, is_zero, exact_div, ...), with Poly instances as elements.
    """

    def __init__(self, field: Field, variables):
        self.field = field
        self.variables = tuple(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names: %r" % (self.variables,))
        self.nvars = len(self.variables)
        self.characteristic = field.characteristic
        self.zero = Poly(self, {})
        self.one = Poly(self, {(0,) * self.nvars: field.one})

    def gens(self):
        return tuple(self.var(name) for name in self.variables)

    def var(self, name):
        i = self.variables.index(name)
        exp = [0] * self.nvars
        exp[i] = 1
        return Poly(self, {tuple(exp): self.field.one})

    def const(self, c):
        if self.field.is_zero(c):
            return self.zero
        return Poly(self, {(0,) * self.nvars: c})

    def from_int(self, n):
        return self.const(self.field.from_int(n))

    def extend(self, extra_variables) -> "PolyRing":
        return PolyRing(self.field, self.variables + tuple(extra_variables))

    def embed(self, poly: "Poly") -> "Poly":
        """Reinterpret a polynomial from a ring whose variables are a prefix of ours."""
        if poly.ring is self:
            return poly
        if poly.ring.variables != self.variables[: poly.ring.nvars] or poly.ring.field is not self.field:
            raise ValueError("ring %r does not embed into %r" % (poly.ring, self))
        pad = (0,) * (self.nvars - poly.ring.nvars)
        return Poly(self, {exp + pad: c for exp, c in poly.terms.items()})

    # --- ring protocol (elements are Poly) ---

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return not a.terms

    def eq(self, a, b):
        return a.terms == b.terms

    def exact_div(self, a, b):
        return a.exact_div(b)

    def is_unit(self, a):
        return len(a.terms) == 1 and a.degree() == 0

    def to_str(self, a):
        return str(a)

    def parse(self, text: str) -> "Poly":
        return _parse_poly(self, text)

    def __eq__(self, other):
        return (isinstance(other, PolyRing) and other.field == self.field
                and other.variables == self.variables)

    def __hash__(self):
        return hash((self.field, self.variables))

    def __repr__(self):
        return "%r[%s]" % (self.field, ",".join(self.variables))


def _grlex_key(exp):
    return (sum(exp), exp)


class Poly:
    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def _check(self, other):
        if not isinstance(other, Poly) or other.ring != self.ring:
            raise ValueError("mixed polynomial rings")

    def __add__(self, other):
        self._check(other)
        field = self.ring.field
        terms = dict(self.terms)
        for exp, c in other.terms.items():
            s = field.add(terms.get(exp, field.zero), c)
            if field.is_zero(s):
                terms.pop(exp, None)
            else:
                terms[exp] = s
        return Poly(self.ring, terms)

    def __neg__(self):
        field = self.ring.field
        return Poly(self.ring, {e: field.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        field = self.ring.field
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                prod = field.mul(c1, c2)
                s = field.add(terms.get(e, field.zero), prod)
                if field.is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return Poly(self.ring, terms)

    def scale(self, c):
        field = self.ring.field
        if field.is_zero(c):
            return self.ring.zero
        return Poly(self.ring, {e: field.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        return isinstance(other, Poly) and other.ring == self.ring and other.terms == self.terms

    __hash__ = None  # polynomials are dict values, never keys

    def is_zero(self):
        return not self.terms

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def leading_term(self):
        """(exponent, coefficient) maximal in graded lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def constant_coefficient(self):
        return self.terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def as_constant(self):
        """The field value of a degree <= 0 polynomial."""
        if self.degree() > 0:
            raise ValueError("polynomial is not constant: %s" % self)
        return self.constant_coefficient()

    def partial(self, var_index: int):
        field = self.ring.field
        terms = {}
        for exp, c in self.terms.items():
            k = exp[var_index]
            if k == 0:
                continue
            new = list(exp)
            new[var_index] = k - 1
            coeff = field.mul(c, field.from_int(k))
            if not field.is_zero(coeff):
                terms[tuple(new)] = coeff
        return Poly(self.ring, terms)

    def evaluate(self, point):
        """Evaluate at a full point (sequence of field elements)."""
        field = self.ring.field
        if len(point) != self.ring.nvars:
            raise ValueError("expected %d coordinates, got %d" % (self.ring.nvars, len(point)))
        total = field.zero
        for exp, c in self.terms.items():
            v = c
            for x, k in zip(point, exp):
                if k:
                    v = field.mul(v, field.pow(x, k))
            total = field.add(total, v)
        return total

    def substitute(self, values: dict):
        """Partially substitute {var_name: field element}; returns a Poly in the same ring."""
        field = self.ring.field
        idx = {self.ring.variables.index(name): val for name, val in values.items()}
        terms = {}
        for exp, c in self.terms.items():
            v = c
            new = list(exp)
            for i, val in idx.items():
                if exp[i]:
                    v = field.mul(v, field.pow(val, exp[i]))
                    new[i] = 0
            key = tuple(new)
            s = field.add(terms.get(key, field.zero), v)
            if field.is_zero(s):
                terms.pop(key, None)
            else:
                terms[key] = s
        return Poly(self.ring, terms)

    def compose(self, values):
        """Substitute ring elements for the variables (polynomial composition)."""
        if len(values) != self.ring.nvars:
            raise ValueError("expected %d substitution values" % self.ring.nvars)
        ring = values[0].ring if values else self.ring
        total = ring.zero
        for exp, c in self.terms.items():
            term = ring.const(c)
            for v, k in zip(values, exp):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def exact_div(self, other):
        """Quotient self/other when the division is exact; raises otherwise.

        Repeated leading-term division in graded lex order; valid in any
        polynomial ring over a field when other divides self.
        """
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        field = self.ring.field
        lead_exp, lead_coeff = other.leading_term()
        remainder = self
        quotient = {}
        while remainder.terms:
            rexp, rcoeff = remainder.leading_term()
            qexp = tuple(a - b for a, b in zip(rexp, lead_exp))
            if any(e < 0 for e in qexp):
                raise ArithmeticError("inexact polynomial division")
            qcoeff = field.div(rcoeff, lead_coeff)
            quotient[qexp] = qcoeff
            remainder = remainder - other * Poly(self.ring, {qexp: qcoeff})
        return Poly(self.ring, quotient)

    def _coeff_str(self, c):
        field = self.ring.field
        s = field.to_str(c)
        if "+" in s[1:] or "-" in s[1:] or "*" in s:
            return "(%s)" % s
        return s

    def __str__(self):
        if not self.terms:
            return "0"
        field = self.ring.field
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                v if k == 1 else "%s^%d" % (v, k)
                for v, k in zip(self.ring.variables, exp) if k
            )
            cs = self._coeff_str(c)
            if not mono:
                term = cs
            elif cs == "1":
                term = mono
            elif cs == "-1":
                term = "-" + mono
            else:
                term = "%s*%s" % (cs, mono)
            if parts and not term.startswith("-"):
                parts.append("+" + term)
            else:
                parts.append(term)
        return "".join(parts)

    def __repr__(self):
        return "Poly(%s)" % self


# --- parser -------------------------------------------------------------
#
# Grammar (whitespace ignored):
#   expr   := term (('+' | '-') term)*
#   term   := factor ('*' factor)*
#   factor := ('-')* atom ('^' INT)?
#   atom   := NUMBER | NAME | '(' expr ')'
#   NUMBER := INT ('/' INT)?
# Variables must be declared ring variables.


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*^()":
            tokens.append((ch, i))
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            if j < len(text) and text[j] == "/":
                k = j + 1
                if k >= len(text) or not text[k].isdigit():
                    raise PolyParseError("expected denominator at offset %d in %r" % (k, text))
                m = k
                while m < len(text) and text[m].isdigit():
                    m += 1
                tokens.append((("num", Fraction(num, int(text[k:m]))), i))
                i = m
            else:
                tokens.append((("num", Fraction(num)), i))
                i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((("name", text[i:j]), i))
            i = j
        else:
            raise PolyParseError("unexpected character %r at offset %d in %r" % (ch, i, text))
    return tokens


class _Parser:
    def __init__(self, ring, text):
        self.ring = ring
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos][0] if self.pos < len(self.tokens) else None

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, symbol):
        if self.peek() != symbol:
            raise PolyParseError("expected %r at token %d in %r" % (symbol, self.pos, self.text))
        self.advance()

    def parse(self):
        poly = self.expr()
        if self.pos != len(self.tokens):
            tok, off = self.tokens[self.pos]
            raise PolyParseError("trailing input at offset %d in %r" % (off, self.text))
        return poly

    def expr(self):
        if self.peek() in ("+", "-"):
            sign = self.advance()[0]
            poly = self.term()
            if sign == "-":
                poly = -poly
        else:
            poly = self.term()
        while self.peek() in ("+", "-"):
            op = self.advance()[0]
            rhs = self.term()
            poly = poly + rhs if op == "+" else poly - rhs
        return poly

    def term(self):
        poly = self.factor()
        while self.peek() == "*":
            self.advance()
            poly = poly * self.factor()
        return poly

    def factor(self):
        negate = False
        while self.peek() == "-":
            self.advance()
            negate = not negate
        poly = self.atom()
        if self.peek() == "^":
            self.advance()
            tok = self.peek()
            if not (isinstance(tok, tuple) and tok[0] == "num" and tok[1].denominator == 1 and tok[1] >= 0):
                raise PolyParseError("exponent must be a nonnegative integer in %r" % self.text)
            self.advance()
            poly = poly ** int(tok[1])
        return -poly if negate else poly

    def atom(self):
        tok = self.peek()
        if tok == "(":
            self.advance()
            poly = self.expr()
            self.expect(")")
            return poly
        if isinstance(tok, tuple) and tok[0] == "num":
            self.advance()
            try:
                return self.ring.const(self.ring.field.from_fraction(tok[1]))
            except FieldError as exc:
                raise PolyParseError("bad literal %s in %r: %s" % (tok[1], self.text, exc))
        if isinstance(tok, tuple) and tok[0] == "name":
            self.advance()
            if tok[1] not in self.ring.variables:
                raise PolyParseError("unknown variable %r in %r (declared: %s)"
                                     % (tok[1], self.text, ", ".join(self.ring.variables)))
            return self.ring.var(tok[1])
        raise PolyParseError("unexpected end of input in %r" % self.text)


def _parse_poly(ring, text):
    return _Parser(ring, text).parse()


def monomials_of_degree(nvars: int, degree: int):
    """All exponent tuples of the given total degree, lexicographic order."""
    if degree == 0:
        yield (0,) * nvars
        return
    for first in range(degree + 1):
        if nvars == 1:
            if first == degree:
                yield (degree,)
            continue
        for rest in monomials_of_degree(nvars - 1, degree - first):
            yield (first,) + rest
