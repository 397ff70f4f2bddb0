"""Exact scalars: rational functions in a formal root ``v`` of ``q``.

A :class:`ScalarField` with root order ``D`` works in ``Q(v)`` where
``v**D == q``, so every power ``q**(a/b)`` with ``b | D`` is the monomial
``v**(a*D/b)``.  Elements are :class:`RatFunc` values kept in a canonical
reduced form, which makes ``==`` an exact identity test.

:class:`NumericField` exposes the same interface over Python complex numbers
and is used to re-run exact pipelines at a fixed numeric ``q``.
"""

from __future__ import annotations

import cmath
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "RatFunc",
    "ScalarField",
    "NumericField",
    "RationalField",
    "make_field",
    "UnrepresentableError",
    "PoleError",
    "parse_scalar",
]


class UnrepresentableError(ValueError):
    """A fractional power of q whose denominator does not divide D."""


class PoleError(ZeroDivisionError):
    """Specialization hit a zero of the denominator."""


# ---------------------------------------------------------------------------
# dense univariate helpers (coefficient lists, lowest degree first)

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    db = len(b) - 1
    for k in range(len(a) - 1, db - 1, -1):
        c = a[k]
        if c == 0:
            continue
        c = c / lead
        q[k - db] = c
        for t in range(db + 1):
            a[k - db + t] -= c * b[t]
    return _trim(q), _trim(a[:db])


def _pgcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _pdivmod(a, b)
        a, b = b, r
    lead = a[-1]
    return [c / lead for c in a]


def _dense(d, shift):
    top = max(d) - shift
    out = [Fraction(0)] * (top + 1)
    for e, c in d.items():
        out[e - shift] = c
    return out


def _sparse(p, shift=0):
    return {i + shift: c for i, c in enumerate(p) if c != 0}


def _padd(x, y):
    out = dict(x)
    for e, c in y.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pmul(x, y):
    if len(x) == 1:
        (ex, cx), = x.items()
        return {e + ex: c * cx for e, c in y.items()}
    if len(y) == 1:
        (ey, cy), = y.items()
        return {e + ey: c * cy for e, c in x.items()}
    out = {}
    for e1, c1 in x.items():
        for e2, c2 in y.items():
            e = e1 + e2
            out[e] = out.get(e, 0) + c1 * c2
    return {e: c for e, c in out.items() if c}


_ONE = {0: Fraction(1)}


def _canonical(num, den):
    """Reduce num/den (Laurent dicts, den nonzero) to canonical form."""
    if not num:
        return {}, _ONE
    k = min(den)
    if k:
        den = {e - k: c for e, c in den.items()}
        num = {e - k: c for e, c in num.items()}
    if len(den) == 1:
        c = den[0]
        if c == 1:
            return num, _ONE
        return {e: v / c for e, v in num.items()}, _ONE
    j = min(num)
    p = _dense(num, j)
    dd = _dense(den, 0)
    g = _pgcd(p, dd)
    if len(g) > 1:
        p, _ = _pdivmod(p, g)
        dd, _ = _pdivmod(dd, g)
    lead = dd[-1]
    if lead != 1:
        p = [c / lead for c in p]
        dd = [c / lead for c in dd]
    if len(dd) == 1:
        return _sparse(p, j), _ONE
    return _sparse(p, j), _sparse(dd)


def _coerce_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to an exact scalar")


class RatFunc:
    """Immutable element of Q(v) in canonical form.

    ``num`` is a Laurent polynomial and ``den`` a polynomial with nonzero
    constant term and leading coefficient 1; the two are coprime.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=None, den=None, *, _canon=False):
        num = {} if num is None else num
        den = _ONE if den is None else den
        if not _canon:
            num = {int(e): _coerce_fraction(c) for e, c in num.items() if c != 0}
            den = {int(e): _coerce_fraction(c) for e, c in den.items() if c != 0}
            if not den:
                raise ZeroDivisionError("zero denominator")
            num, den = _canonical(num, den)
        self.num = num
        self.den = den
        self._hash = None

    # constructors ---------------------------------------------------------
    @classmethod
    def constant(cls, c):
        c = _coerce_fraction(c)
        return cls({0: c} if c else {}, _ONE, _canon=True)

    @classmethod
    def monomial(cls, exponent, coeff=1):
        coeff = _coerce_fraction(coeff)
        return cls({int(exponent): coeff} if coeff else {}, _ONE, _canon=True)

    @classmethod
    def _lift(cls, x):
        if isinstance(x, RatFunc):
            return x
        return cls.constant(x)

    # predicates -----------------------------------------------------------
    def is_zero(self):
        return not self.num

    def is_laurent(self):
        return self.den is _ONE or self.den == _ONE

    def is_monomial(self):
        return self.is_laurent() and len(self.num) == 1

    def monomial_exponent(self):
        if not self.is_monomial():
            raise ValueError(f"{self} is not a monomial")
        (e, c), = self.num.items()
        return e, c

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            other = RatFunc._lift(other)
        except TypeError:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.is_laurent() and other.is_laurent():
            return RatFunc(_padd(self.num, other.num), _ONE, _canon=True)
        if self.den == other.den:
            return RatFunc(*_canonical(_padd(self.num, other.num), self.den), _canon=True)
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return RatFunc(*_canonical(num, _pmul(self.den, other.den)), _canon=True)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc({e: -c for e, c in self.num.items()}, self.den, _canon=True)

    def __sub__(self, other):
        try:
            other = RatFunc._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RatFunc._lift(other)
        except TypeError:
            return NotImplemented
        if not self.num or not other.num:
            return RatFunc.constant(0)
        if self.is_laurent() and other.is_laurent():
            return RatFunc(_pmul(self.num, other.num), _ONE, _canon=True)
        num = _pmul(self.num, other.num)
        den = _pmul(self.den, other.den)
        return RatFunc(*_canonical(num, den), _canon=True)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(*_canonical(self.den, self.num), _canon=True)

    def __truediv__(self, other):
        try:
            other = RatFunc._lift(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return RatFunc._lift(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = RatFunc.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, RatFunc):
            try:
                other = RatFunc._lift(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    def __bool__(self):
        return bool(self.num)

    # numerics -------------------------------------------------------------
    def evaluate(self, v0):
        """Value at ``v = v0`` (complex); raises :class:`PoleError` at a pole."""
        v0 = complex(v0)
        if v0 == 0:
            raise PoleError("v = 0 is not in the domain of a Laurent expression")
        den = sum(complex(c) * v0 ** e for e, c in self.den.items())
        scale = sum(abs(float(c)) * abs(v0) ** e for e, c in self.den.items())
        if abs(den) <= 1e-14 * scale:
            raise PoleError(f"denominator of {self} vanishes at v = {v0}")
        num = sum(complex(c) * v0 ** e for e, c in self.num.items())
        return num / den

    # text -----------------------------------------------------------------
    def __str__(self):
        if self.is_laurent():
            return _laurent_str(self.num)
        return f"({_laurent_str(self.num)})/({_laurent_str(self.den)})"

    def __repr__(self):
        return f"RatFunc('{self}')"


def _laurent_str(p):
    if not p:
        return "0"
    parts = []
    for e in sorted(p):
        c = p[e]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if e == 0:
            body = str(a)
        else:
            mono = "v" if e == 1 else f"v^{e}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"([+-])?(?:(\d+(?:/\d+)?)(?:\*(v(?:\^-?\d+)?))?|(v(?:\^-?\d+)?))")


def _parse_laurent(text):
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty expression")
    out = {}
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (pos > 0 and m.group(1) is None):
            raise ValueError(f"cannot parse {text!r} at offset {pos}")
        sign = -1 if m.group(1) == "-" else 1
        coeff = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        mono = m.group(3) or m.group(4)
        if mono is None:
            exp = 0
        elif "^" in mono:
            exp = int(mono.split("^")[1])
        else:
            exp = 1
        out[exp] = out.get(exp, 0) + sign * coeff
        pos = m.end()
    return {e: c for e, c in out.items() if c}


def parse_scalar(text):
    """Inverse of ``str(RatFunc)``: ``"v^-3 + 2*v^2"`` or ``"(p)/(q)"``."""
    s = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
    if m:
        return RatFunc(_parse_laurent(m.group(1)), _parse_laurent(m.group(2)))
    return RatFunc(_parse_laurent(s))


# ---------------------------------------------------------------------------
# field contexts

class _FieldBase:
    """Shared q-combinatorics; subclasses supply ``q_pow`` and ``is_zero``."""

    def q_int(self, n):
        """Symmetrized q-number [n]_q."""
        n = int(n)
        if n == 0:
            return self.zero
        sign = 1 if n > 0 else -1
        total = self.zero
        for k in range(abs(n)):
            total = total + self.q_pow(abs(n) - 1 - 2 * k)
        return total if sign > 0 else -total

    def q_factorial(self, a):
        if a < 0:
            raise ValueError("q-factorial of a negative integer")
        out = self.one
        for k in range(1, a + 1):
            out = out * self.q_int(k)
        return out

    def q_binom(self, a, n):
        if n < 0:
            raise ValueError("q-binomial needs n >= 0")
        num = self.one
        for k in range(n):
            num = num * self.q_int(a - k)
        return num / self.q_factorial(n)

    def from_int(self, k):
        return self.one * k


class ScalarField(_FieldBase):
    """Q(v) with ``v**root_order == q``."""

    def __init__(self, root_order):
        if not isinstance(root_order, int) or root_order < 1:
            raise ValueError(f"root order must be a positive integer, got {root_order!r}")
        self.root_order = root_order
        self.zero = RatFunc.constant(0)
        self.one = RatFunc.constant(1)
        self.v = RatFunc.monomial(1)
        self.q = RatFunc.monomial(root_order)

    exact = True

    def __repr__(self):
        return f"ScalarField(D={self.root_order})"

    def __eq__(self, other):
        return isinstance(other, ScalarField) and other.root_order == self.root_order

    def __hash__(self):
        return hash(("ScalarField", self.root_order))

    def is_representable(self, exponent):
        e = Fraction(exponent) * self.root_order
        return e.denominator == 1

    def v_exponent(self, exponent):
        """Exponent of v equal to ``q**exponent``."""
        e = Fraction(exponent) * self.root_order
        if e.denominator != 1:
            raise UnrepresentableError(
                f"q^({Fraction(exponent)}) needs a root order divisible by "
                f"{Fraction(exponent).denominator}; field has D={self.root_order}")
        return int(e)

    def q_pow(self, exponent):
        return RatFunc.monomial(self.v_exponent(exponent))

    def is_zero(self, x):
        return not x

    def q_exponent(self, x):
        """Inverse of ``q_pow`` for unit-coefficient monomials."""
        e, c = x.monomial_exponent()
        if c != 1:
            raise ValueError(f"{x} is not a pure power of q")
        return Fraction(e, self.root_order)

    def specialize(self, x, q0):
        """Evaluate at ``q = q0`` using the principal branch ``v = q0**(1/D)``."""
        q0 = complex(q0)
        if q0 == 0:
            raise ValueError("q0 must be nonzero")
        v0 = cmath.exp(cmath.log(q0) / self.root_order)
        return RatFunc._lift(x).evaluate(v0)

    def parse(self, text):
        return parse_scalar(text)


def make_field(D):
    return ScalarField(D)


class NumericField(_FieldBase):
    """Complex-number stand-in for :class:`ScalarField` at a fixed ``v = v0``."""

    exact = False

    def __init__(self, root_order, v0, atol=1e-9):
        self.root_order = root_order
        self.v0 = complex(v0)
        self.atol = atol
        self.zero = 0j
        self.one = 1 + 0j
        self.q = self.v0 ** root_order

    @classmethod
    def at_q(cls, root_order, q0, atol=1e-9):
        return cls(root_order, cmath.exp(cmath.log(complex(q0)) / root_order), atol)

    def q_pow(self, exponent):
        e = Fraction(exponent) * self.root_order
        if e.denominator != 1:
            raise UnrepresentableError(f"q^({Fraction(exponent)}) not representable")
        return self.v0 ** int(e)

    def is_zero(self, x):
        return abs(x) <= self.atol


class RationalField(_FieldBase):
    """Plain Q, used for the classical (q = 1) computations."""

    exact = True
    root_order = 1

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)
        self.q = Fraction(1)

    def q_pow(self, exponent):
        return Fraction(1)

    def is_zero(self, x):
        return x == 0
