"""Exact arithmetic in the finite-sum subring of the one-variable Novikov field.

An element is a finite sum ``sum_i c_i q^{m_i}`` with Gaussian-rational
coefficients ``c_i`` and rational exponents ``m_i``.  Finite sums trivially
satisfy the Novikov growth condition, so this is a subring of the field; it is
closed under ``+``, ``-`` and ``*`` but inverses exist only as truncations
(:func:`invert_to_order`).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Union

__all__ = [
    "GaussQ",
    "NovikovScalar",
    "ZeroDivisor",
    "as_coefficient",
    "ONE",
    "ZERO",
    "invert_to_order",
    "parse",
    "valuation",
]


class ZeroDivisor(ZeroDivisionError):
    """Raised when inverting the zero scalar."""


class GaussQ:
    """A Gaussian rational ``re + im*i`` with exact :class:`Fraction` parts."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussQ):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussQ(other)
        if isinstance(other, complex):
            return GaussQ(Fraction(other.real), Fraction(other.imag))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussQ(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __neg__(self):
        return GaussQ(-self.re, -self.im)

    def conjugate(self):
        return GaussQ(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        p = self * o.conjugate()
        return GaussQ(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussQ({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*I"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*I)"


Coefficient = Union[Fraction, GaussQ]


def as_coefficient(c) -> Coefficient:
    """Normalise an exact number to ``Fraction`` (real) or ``GaussQ``."""
    if isinstance(c, GaussQ):
        return c.re if c.im == 0 else c
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, Rational)):
        return Fraction(c)
    if isinstance(c, complex):
        g = GaussQ(Fraction(c.real), Fraction(c.imag))
        return g.re if g.im == 0 else g
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, float):
        return Fraction(c)
    raise TypeError(f"cannot use {c!r} as an exact coefficient")


class NovikovScalar:
    """Finite formal sum ``sum c_i q^{m_i}``, normalised on construction.

    Terms are stored as a tuple of ``(exponent, coefficient)`` pairs with
    strictly increasing exponents and no zero coefficients.  The empty tuple
    is zero.  Instances are immutable and hashable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        acc: dict[Fraction, Coefficient] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = Fraction(e)
            c = as_coefficient(c)
            if e in acc:
                acc[e] = acc[e] + c
            else:
                acc[e] = c
        self.terms = tuple(
            (e, as_coefficient(acc[e])) for e in sorted(acc) if acc[e] != 0
        )
        self._hash = None

    @classmethod
    def _raw(cls, terms: tuple) -> "NovikovScalar":
        obj = object.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "NovikovScalar":
        c = as_coefficient(c)
        return cls._raw(((Fraction(0), c),) if c != 0 else ())

    @classmethod
    def monomial(cls, c, exponent) -> "NovikovScalar":
        c = as_coefficient(c)
        return cls._raw(((Fraction(exponent), c),) if c != 0 else ())

    @classmethod
    def coerce(cls, x) -> "NovikovScalar":
        if isinstance(x, NovikovScalar):
            return x
        return cls.const(x)

    # predicates -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        """True for ``0`` and for scalars with a single ``q^0`` term."""
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0] == 0)

    def constant_value(self) -> Coefficient:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant scalar")
        return self.terms[0][1]

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    # ring operations --------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, NovikovScalar):
            try:
                other = NovikovScalar.const(other)
            except TypeError:
                return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            if e in acc:
                s = acc[e] + c
                if s == 0:
                    del acc[e]
                else:
                    acc[e] = s
            else:
                acc[e] = c
        return NovikovScalar._raw(tuple((e, as_coefficient(acc[e])) for e in sorted(acc)))

    __radd__ = __add__

    def __neg__(self):
        return NovikovScalar._raw(tuple((e, -c) for e, c in self.terms))

    def __sub__(self, other):
        if not isinstance(other, NovikovScalar):
            try:
                other = NovikovScalar.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return NovikovScalar.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, NovikovScalar):
            try:
                c = as_coefficient(other)
            except TypeError:
                return NotImplemented
            if c == 0:
                return ZERO
            return NovikovScalar._raw(tuple((e, as_coefficient(x * c)) for e, x in self.terms))
        if not self.terms or not other.terms:
            return ZERO
        if len(other.terms) == 1 and len(self.terms) == 1:
            (e1, c1), (e2, c2) = self.terms[0], other.terms[0]
            return NovikovScalar._raw(((e1 + e2, as_coefficient(c1 * c2)),))
        acc: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = e1 + e2
                acc[e] = acc[e] + c1 * c2 if e in acc else c1 * c2
        return NovikovScalar._raw(
            tuple((e, as_coefficient(acc[e])) for e in sorted(acc) if acc[e] != 0)
        )

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers need invert_to_order")
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        """Division by a monomial (exact); other divisors need truncation."""
        other = NovikovScalar.coerce(other)
        if not other.terms:
            raise ZeroDivisor("division by zero Novikov scalar")
        if len(other.terms) != 1:
            raise ValueError("exact division only by monomials; use invert_to_order")
        e0, c0 = other.terms[0]
        inv = 1 / c0 if isinstance(c0, GaussQ) else Fraction(1) / c0
        return NovikovScalar._raw(tuple((e - e0, as_coefficient(c * inv)) for e, c in self.terms))

    # comparison -------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, NovikovScalar):
            try:
                other = NovikovScalar.const(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    # evaluation -------------------------------------------------------
    def specialize(self, q_value=1):
        """Substitute a value for ``q``.

        With ``q_value=1`` the result is exact (sum of coefficients); any
        other value gives a complex float.
        """
        if q_value == 1:
            total = Fraction(0)
            for _, c in self.terms:
                total = total + c
            return as_coefficient(total)
        return sum(complex(c) * complex(q_value) ** float(e) for e, c in self.terms)

    def leading(self):
        """Return ``(exponent, coefficient)`` of the lowest-order term."""
        if not self.terms:
            raise ZeroDivisor("zero has no leading term")
        return self.terms[0]

    def truncate(self, order) -> "NovikovScalar":
        """Drop terms of exponent ``>= order``."""
        order = Fraction(order)
        return NovikovScalar._raw(tuple(t for t in self.terms if t[0] < order))

    # text / json ------------------------------------------------------
    def __repr__(self):
        return f"NovikovScalar({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = ""
        for k, (e, c) in enumerate(self.terms):
            neg = isinstance(c, Fraction) and c < 0
            body = str(-c if neg else c)
            if e != 0:
                body += f"*q^{{{e}}}"
            if k == 0:
                out = ("-" if neg else "") + body
            else:
                out += (" - " if neg else " + ") + body
        return out

    def to_json(self) -> list:
        out = []
        for e, c in self.terms:
            if isinstance(c, GaussQ):
                coef = [str(c.re), str(c.im)]
            else:
                coef = [str(c), "0"]
            out.append({"coef": coef, "exp": str(e)})
        return out

    @classmethod
    def from_json(cls, data) -> "NovikovScalar":
        if isinstance(data, (int, str)):
            return parse(str(data))
        terms = []
        for t in data:
            re_, im_ = t["coef"]
            terms.append((Fraction(t["exp"]), as_coefficient(GaussQ(Fraction(re_), Fraction(im_)))))
        return cls(terms)


ZERO = NovikovScalar._raw(())
ONE = NovikovScalar._raw(((Fraction(0), Fraction(1)),))
NovikovScalar.ZERO = ZERO
NovikovScalar.ONE = ONE

_RAT = r"\d+(?:/\d+)?"
_TERM = re.compile(
    r"\s*([+-])?\s*(-)?\s*"
    r"(?:(\([^()]*\)|" + _RAT + r"(?:\s*\*\s*I)?|I)(?:\s*\*\s*(q(?:\^\{([^}]*)\})?))?"
    r"|(q(?:\^\{([^}]*)\})?))\s*"
)
_GAUSS = re.compile(r"^(?:([+-]?" + _RAT + r")(?=[+-]))?([+-]?)(" + _RAT + r")?\*?I$")


def parse(text: str) -> NovikovScalar:
    """Parse the textual form ``c1*q^{m1} + c2*q^{m2} + ...``.

    Coefficients are rationals (``-3/2``) or Gaussian rationals written
    ``(a+b*I)`` or ``b*I``; a bare ``q^{m}`` means ``1*q^{m}``.
    """
    text = text.strip()
    if text in ("", "0"):
        return ZERO
    terms = []
    pos = 0
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos or (terms and not m.group(1)):
            raise ValueError(f"cannot parse Novikov scalar {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(2):
            sign = -sign
        if m.group(3) is not None:
            coef = _parse_coef(m.group(3))
            qpart, exp = m.group(4), m.group(5)
        else:
            coef, qpart, exp = Fraction(1), m.group(6), m.group(7)
        if qpart is None:
            e = Fraction(0)
        else:
            e = Fraction(exp.replace(" ", "")) if exp is not None else Fraction(1)
        terms.append((e, coef * sign))
        pos = m.end()
    return NovikovScalar(terms)


def _parse_coef(s: str) -> Coefficient:
    s = s.replace(" ", "")
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    if "I" not in s:
        return Fraction(s)
    m = _GAUSS.match(s)
    if not m:
        raise ValueError(f"cannot parse coefficient {s!r}")
    re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
    im_part = Fraction(m.group(3)) if m.group(3) else Fraction(1)
    if m.group(2) == "-":
        im_part = -im_part
    return as_coefficient(GaussQ(re_part, im_part))


def valuation(a: NovikovScalar):
    """Least exponent of ``a``; ``math.inf`` for zero."""
    a = NovikovScalar.coerce(a)
    return a.terms[0][0] if a.terms else math.inf


def invert_to_order(a, order) -> NovikovScalar:
    """Truncated inverse: ``a * result == 1 + (terms of exponent >= order)``.

    Writes ``a = c q^v (1 - x)`` with ``val(x) > 0`` and sums the geometric
    series in ``x``, keeping exponents below ``order``.  Monomials are
    inverted exactly.
    """
    a = NovikovScalar.coerce(a)
    if not a.terms:
        raise ZeroDivisor("cannot invert zero")
    order = Fraction(order)
    v, c = a.terms[0]
    lead_inv = NovikovScalar.monomial(1 / c if isinstance(c, GaussQ) else Fraction(1) / c, -v)
    if len(a.terms) == 1:
        return lead_inv
    x = ONE - a * lead_inv  # val(x) > 0
    # a * (lead_inv * S) = (1 - x) * S, so truncating S below ``bound`` leaves
    # an error of exponent >= bound.
    bound = max(order, order + v)
    result = ONE
    power = ONE
    while True:
        power = (power * x).truncate(bound)
        if not power.terms:
            break
        result = result + power
    return result * lead_inv
