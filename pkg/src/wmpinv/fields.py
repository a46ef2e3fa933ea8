"""Scalar fields: exact rationals, IEEE float64, and rational functions.

Every matrix in this package commits to exactly one scalar field.  A field
is a small singleton object (RATIONAL, FLOAT64, RATFUN) that knows how to
produce zero/one, embed integers, test for zero, and invert; the scalar
values themselves are plain Python objects carrying arithmetic operators:

    RATIONAL  ->  fractions.Fraction        (canonical by construction)
    FLOAT64   ->  float                     (IEEE-754 semantics)
    RATFUN    ->  RatFun                    (coprime, monic denominator)

All three fields are real, so conjugation is the identity; it exists as a
hook so the transpose used everywhere is really a conjugate transpose.

Polynomials are univariate with Fraction coefficients, stored densely by
ascending degree with no trailing zeros.  The gcd runs a primitive
pseudo-remainder sequence over the integers, which keeps coefficient
growth tame without ever leaving exact arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import DivisionByZero

_F0 = Fraction(0)
_F1 = Fraction(1)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as a rational coefficient")


class Polynomial:
    """Dense univariate polynomial over Q, ascending coefficients.

    Invariant: the last stored coefficient is nonzero; the zero polynomial
    stores an empty tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls((c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return _F0
        return self.coeffs[-1]

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Polynomial((other,))
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    def __bool__(self):
        return not self.is_zero

    def __neg__(self):
        return Polynomial(tuple(-c for c in self.coeffs))

    def __add__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        out = [_F0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] += ai * bj
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative polynomial power")
        result = _P_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other):
        """Exact long division; raises DivisionByZero on a zero divisor."""
        other = _coerce_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise DivisionByZero("polynomial division by zero")
        dd = other.degree
        if self.degree < dd:
            return _P_ZERO, self
        rem = list(self.coeffs)
        lead = other.coeffs[-1]
        quot = [_F0] * (len(rem) - dd)
        for i in range(len(rem) - 1, dd - 1, -1):
            c = rem[i]
            if c:
                c = c / lead
                quot[i - dd] = c
                for j, oj in enumerate(other.coeffs):
                    rem[i - dd + j] -= c * oj
        return Polynomial(quot), Polynomial(rem[:dd])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def scale(self, s) -> "Polynomial":
        s = _as_fraction(s)
        return Polynomial(tuple(c * s for c in self.coeffs))

    def monic(self) -> "Polynomial":
        """Scale so the leading coefficient is 1; zero stays zero."""
        if self.is_zero or self.leading == 1:
            return self
        return self.scale(1 / self.leading)

    def evaluate(self, x) -> Fraction:
        x = _as_fraction(x)
        acc = _F0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)!r})"


_P_ZERO = Polynomial(())
_P_ONE = Polynomial((1,))
X = Polynomial((0, 1))


def _coerce_poly(other):
    if isinstance(other, Polynomial):
        return other
    if isinstance(other, (int, Fraction)):
        return Polynomial((other,))
    return NotImplemented


def _int_primitive(coeffs):
    """Primitive integer coefficient list (gcd 1, positive leading)."""
    if not coeffs:
        return []
    g = 0
    for c in coeffs:
        g = math.gcd(g, abs(c))
    if coeffs[-1] < 0:
        g = -g
    return [c // g for c in coeffs]


def _to_int_coeffs(p: Polynomial):
    """Clear denominators and strip content: the primitive integer image."""
    lcm = 1
    for c in p.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    return _int_primitive([int(c * lcm) for c in p.coeffs])


def _int_pseudo_rem(a, b):
    """Pseudo-remainder of integer coefficient lists, up to scaling.

    Constant factors are irrelevant because the caller reduces to the
    primitive part after every step.
    """
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db:
        lr = r[-1]
        k = len(r) - 1 - db
        r = [lb * x for x in r]
        for j, bj in enumerate(b):
            r[k + j] -= lr * bj
        while r and r[-1] == 0:
            r.pop()
        if not r:
            break
    return r


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Monic gcd over Q via a primitive pseudo-remainder sequence.

    gcd(p, 0) is the monic normalization of p; gcd(0, 0) is 0.
    """
    if p.is_zero:
        return q.monic()
    if q.is_zero:
        return p.monic()
    a = _to_int_coeffs(p)
    b = _to_int_coeffs(q)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _int_pseudo_rem(a, b)
        a, b = b, _int_primitive(r)
    return Polynomial(a).monic()


class RatFun:
    """Univariate rational function over Q in canonical form.

    Canonical means num and den are coprime and den is monic (and never
    zero); zero is 0/1.  The constructor normalizes, so equality is plain
    structural equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=_P_ONE):
        num = _coerce_poly(num)
        den = _coerce_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RatFun expects Polynomial / int / Fraction parts")
        if den.is_zero:
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero:
            self.num, self.den = _P_ZERO, _P_ONE
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lc = den.leading
        if lc != 1:
            inv = 1 / lc
            num = num.scale(inv)
            den = den.scale(inv)
        self.num, self.den = num, den

    @classmethod
    def _coprime(cls, num: Polynomial, den: Polynomial) -> "RatFun":
        """Build from parts already known to be coprime (den nonzero)."""
        self = object.__new__(cls)
        if num.is_zero:
            self.num, self.den = _P_ZERO, _P_ONE
            return self
        lc = den.leading
        if lc != 1:
            inv = 1 / lc
            num = num.scale(inv)
            den = den.scale(inv)
        self.num, self.den = num, den
        return self

    @classmethod
    def constant(cls, c) -> "RatFun":
        return cls._coprime(Polynomial((c,)), _P_ONE)

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree <= 0

    def constant_value(self) -> Fraction:
        """The value of a constant rational function as a Fraction."""
        if not self.is_constant:
            raise ValueError("rational function is not constant")
        if self.num.is_zero:
            return _F0
        return self.num.coeffs[0] / self.den.coeffs[0]

    def __eq__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RatFun", self.num.coeffs, self.den.coeffs))

    def __bool__(self):
        return not self.is_zero

    def __neg__(self):
        return RatFun._coprime(-self.num, self.den)

    def __add__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        na, da = self.num, self.den
        nb, db = other.num, other.den
        g = poly_gcd(da, db)
        if g.degree <= 0:
            return RatFun._coprime_or_reduce(na * db + nb * da, da * db)
        s = da // g
        t = na * (db // g) + nb * s
        g2 = poly_gcd(t, g)
        if g2.degree <= 0:
            return RatFun._coprime(t, s * db)
        return RatFun._coprime(t // g2, s * (db // g2))

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return _RF_ZERO
        na, da = self.num, self.den
        nb, db = other.num, other.den
        g1 = poly_gcd(na, db)
        if g1.degree > 0:
            na, db = na // g1, db // g1
        g2 = poly_gcd(nb, da)
        if g2.degree > 0:
            nb, da = nb // g2, da // g2
        return RatFun._coprime(na * nb, da * db)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = _coerce_ratfun(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, n: int):
        if n < 0:
            return self.reciprocal() ** (-n)
        result = _RF_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def reciprocal(self) -> "RatFun":
        if self.is_zero:
            raise DivisionByZero("reciprocal of the zero rational function")
        return RatFun._coprime(self.den, self.num)

    @classmethod
    def _coprime_or_reduce(cls, num, den):
        # denominators were coprime, so num/den is already reduced
        return cls._coprime(num, den)

    def evaluate(self, x) -> Fraction:
        dv = self.den.evaluate(x)
        if dv == 0:
            raise DivisionByZero(f"denominator vanishes at x = {x}")
        return self.num.evaluate(x) / dv

    def __repr__(self):
        return f"RatFun(num={list(self.num.coeffs)!r}, den={list(self.den.coeffs)!r})"


_RF_ZERO = RatFun._coprime(_P_ZERO, _P_ONE)
_RF_ONE = RatFun._coprime(_P_ONE, _P_ONE)
RF_X = RatFun._coprime(X, _P_ONE)


def _coerce_ratfun(other):
    if isinstance(other, RatFun):
        return other
    if isinstance(other, Polynomial):
        return RatFun(other)
    if isinstance(other, (int, Fraction)):
        return RatFun.constant(other)
    return NotImplemented


def ratfun_normalize(num, den) -> RatFun:
    """Canonical rational function for num/den (coprime, monic den)."""
    return RatFun(num, den)


class Field:
    """Contract every concrete scalar field implements.

    Values are plain Python objects; the field supplies constants, integer
    embedding, the zero test, division guards, and the conjugation hook.
    """

    name: str
    exact: bool

    def from_int(self, n: int):
        raise NotImplementedError

    def is_zero(self, a, tol: float = 0.0) -> bool:
        raise NotImplementedError

    def conj(self, a):
        """Complex conjugation hook; identity for all real fields."""
        return a

    def inv(self, a):
        raise NotImplementedError

    # Thin aliases so the scalar contract is exercisable by name.
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def div(self, a, b):
        return a * self.inv(b)

    def __repr__(self):
        return f"<field {self.name}>"


class RationalField(Field):
    name = "rational"
    exact = True

    def __init__(self):
        self.zero = _F0
        self.one = _F1

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def is_zero(self, a, tol: float = 0.0) -> bool:
        return a == 0

    def inv(self, a) -> Fraction:
        if a == 0:
            raise DivisionByZero("inverse of rational zero")
        return 1 / _as_fraction(a)


class Float64Field(Field):
    name = "float"
    exact = False

    def __init__(self):
        self.zero = 0.0
        self.one = 1.0

    def from_int(self, n: int) -> float:
        return float(n)

    def is_zero(self, a, tol: float = 0.0) -> bool:
        return abs(a) <= tol

    def inv(self, a) -> float:
        if a == 0.0:
            raise DivisionByZero("inverse of float zero")
        return 1.0 / a


class RatFunField(Field):
    name = "ratfun"
    exact = True

    def __init__(self):
        self.zero = _RF_ZERO
        self.one = _RF_ONE
        self.x = RF_X

    def from_int(self, n: int) -> RatFun:
        return RatFun.constant(n)

    def is_zero(self, a, tol: float = 0.0) -> bool:
        return a.is_zero

    def inv(self, a) -> RatFun:
        return a.reciprocal()


RATIONAL = RationalField()
FLOAT64 = Float64Field()
RATFUN = RatFunField()

FIELDS_BY_NAME = {f.name: f for f in (RATIONAL, FLOAT64, RATFUN)}


def field_of_value(a) -> Field:
    """The field singleton a scalar value belongs to."""
    if isinstance(a, Fraction):
        return RATIONAL
    if isinstance(a, float):
        return FLOAT64
    if isinstance(a, RatFun):
        return RATFUN
    raise TypeError(f"{type(a).__name__} is not a supported scalar")


def approx_zero(a, tol: float = 0.0) -> bool:
    """Zero test: exact for Fraction/RatFun, |a| <= tol for float."""
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    if isinstance(a, float):
        return abs(a) <= tol
    if isinstance(a, (Fraction, int)):
        return a == 0
    if isinstance(a, RatFun):
        return a.is_zero
    if isinstance(a, Polynomial):
        return a.is_zero
    raise TypeError(f"{type(a).__name__} is not a supported scalar")
