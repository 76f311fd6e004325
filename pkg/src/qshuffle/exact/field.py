"""Exact scalars: rational functions in q, or polynomials in q modulo a cyclotomic polynomial.

Two scalar fields are supported:

* ``GenericField()`` -- the field Q(q) with q transcendental.  Elements are stored as
  ``q**e * num / den`` with ``num, den`` in Q[q], ``gcd(num, den) = 1``, neither divisible
  by q, and ``den(0) = 1``.  This form is unique, so structural equality is field equality.
* ``CyclotomicField(l)`` -- Q[q]/Phi_l(q) for odd l >= 3, i.e. Q(zeta) with zeta a primitive
  l-th root of unity.  Elements are polynomials of degree < phi(l).

Both fields are cached singletons, so a regime check is an identity comparison.

>>> F = GenericField()
>>> x = F.qpow(2) + 1
>>> x * x.inv() == F.one
True
>>> K = CyclotomicField(3)
>>> str(1 + K.qpow(2))
'-q mod Phi_3'
"""
from __future__ import annotations

import math
import random
import re
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_poly, fmpz_poly


class RegimeMismatch(TypeError):
    """Raised when scalars from two different fields are combined."""


class SpecializationError(ArithmeticError):
    """Raised when an element cannot be mapped to the chosen finite field point."""


_X = fmpq_poly([0, 1])
_ONE_POLY = fmpq_poly([1])
_ZERO_POLY = fmpq_poly([])


def _valuation(p) -> int:
    """Index of the lowest nonzero coefficient of a nonzero polynomial."""
    if p[0] != 0:
        return 0
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no valuation")


def _coerce_rational(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    if isinstance(x, Fraction):
        return fmpq(x.numerator, x.denominator)
    if isinstance(x, int):
        return fmpq(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to a rational")


def _term_str(c: fmpq, k: int) -> str:
    if k == 0:
        return str(c)
    mono = "q" if k == 1 else f"q^{k}"
    if c == 1:
        return mono
    if c == -1:
        return "-" + mono
    return f"{c}*{mono}"


def _poly_str(coeffs, shift: int = 0) -> str:
    """Format sum coeffs[i] q^(i+shift) in increasing degree."""
    parts = []
    for i, c in enumerate(coeffs):
        if c == 0:
            continue
        t = _term_str(c, i + shift)
        if parts and not t.startswith("-"):
            t = "+" + t
        parts.append(t)
    return "".join(parts) if parts else "0"


_TERM = re.compile(r"([+-])?(\d+(?:/\d+)?)?(\*)?(q(?:\^(-?\d+))?)?")


def _parse_laurent(s: str) -> dict[int, fmpq]:
    s = s.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial string")
    out: dict[int, fmpq] = {}
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, coef, star, mono, exp = m.groups()
        if m.end() == pos or (coef is None and mono is None):
            raise ValueError(f"cannot parse polynomial {s!r} at offset {pos}")
        if sign is None and not first:
            raise ValueError(f"missing operator in {s!r} at offset {pos}")
        if star and (coef is None or mono is None):
            raise ValueError(f"dangling '*' in {s!r}")
        c = fmpq(1)
        if coef is not None:
            fr = Fraction(coef)
            c = fmpq(fr.numerator, fr.denominator)
        if sign == "-":
            c = -c
        k = 0 if mono is None else (1 if exp is None else int(exp))
        out[k] = out.get(k, fmpq(0)) + c
        pos = m.end()
        first = False
    return {k: v for k, v in out.items() if v != 0}


class Field:
    """Common interface of the two scalar fields."""

    regime = "abstract"
    l: int | None = None

    def qpow(self, k: int) -> "FieldElem":
        raise NotImplementedError

    def from_laurent(self, coeffs) -> "FieldElem":
        """Element sum c_k q^k from a mapping exponent -> integer/rational coefficient."""
        raise NotImplementedError

    def __call__(self, x) -> "FieldElem":
        if isinstance(x, FieldElem):
            if x.field is not self:
                raise RegimeMismatch(f"{x.field} element used in {self}")
            return x
        return self.from_laurent({0: _coerce_rational(x)})

    def parse(self, s: str) -> "FieldElem":
        raise NotImplementedError

    def random_element(self, rng: random.Random, degree: int = 3, height: int = 5) -> "FieldElem":
        raise NotImplementedError


class FieldElem:
    """Base class; concrete elements are RationalFunction or CyclotomicElement."""

    __slots__ = ("field",)

    def _other(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise RegimeMismatch(f"cannot combine {self.field} with {other.field}")
            return other
        if isinstance(other, (int, Fraction, fmpq)):
            return self.field(other)
        return NotImplemented

    def __radd__(self, other):
        return self.__add__(other)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inv() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __bool__(self):
        return not self.is_zero()

    def __reduce__(self):
        # flint polynomials do not pickle; the exact string form round-trips
        return (_parse_in, (self.field, str(self)))

    def __repr__(self):
        return f"{type(self).__name__}({str(self)!r})"


# -- generic regime ------------------------------------------------------------------


class RationalFunction(FieldElem):
    """q**e * num / den in canonical form (see module docstring)."""

    __slots__ = ("e", "num", "den", "_poly", "_hash")

    def __init__(self, field, e, num, den, poly):
        self.field = field
        self.e = e
        self.num = num
        self.den = den
        self._poly = poly  # True when den == 1
        self._hash = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def normalize(self) -> "RationalFunction":
        return _make_generic(self.field, self.e, self.num, self.den)

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, Fraction)):
                other = self.field(other)
            else:
                return NotImplemented
        if other.field is not self.field:
            return False
        return self.e == other.e and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("g", self.e, str(self.num), str(self.den)))
        return self._hash

    def __neg__(self):
        return RationalFunction(self.field, self.e, -self.num, self.den, self._poly)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        e = min(self.e, other.e)
        a = self.num if self.e == e else self.num.left_shift(self.e - e)
        b = other.num if other.e == e else other.num.left_shift(other.e - e)
        if self._poly and other._poly:
            return _make_laurent(self.field, e, a + b)
        if self.den == other.den:
            return _make_generic(self.field, e, a + b, self.den)
        return _make_generic(self.field, e, a * other.den + b * self.den, self.den * other.den)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return self.field.zero
        e = self.e + other.e
        if self._poly and other._poly:
            # product of polynomials with nonzero constant terms keeps a nonzero constant term
            return RationalFunction(self.field, e, self.num * other.num, _ONE_POLY, True)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if not d2.is_one():
            g = n1.gcd(d2)
            if not g.is_one():
                n1, d2 = n1 // g, d2 // g
        if not d1.is_one():
            g = n2.gcd(d1)
            if not g.is_one():
                n2, d1 = n2 // g, d1 // g
        return _finish_generic(self.field, e, n1 * n2, d1 * d2)

    def inv(self) -> "RationalFunction":
        if self.num.is_zero():
            raise ZeroDivisionError("division by zero in Q(q)")
        return _finish_generic(self.field, -self.e, self.den, self.num)

    def laurent_coeffs(self) -> dict[int, fmpq]:
        """Exponent -> coefficient map; only valid for Laurent polynomials."""
        if not self._poly:
            raise ValueError(f"{self} is not a Laurent polynomial")
        return {i + self.e: c for i, c in enumerate(self.num.coeffs()) if c != 0}

    def __str__(self):
        if self.num.is_zero():
            return "0"
        n = _poly_str(self.num.coeffs(), self.e)
        if self._poly:
            return n
        return f"({n})/({_poly_str(self.den.coeffs())})"

    def mod_p(self, p: int, q0: int) -> int:
        """Image under q -> q0 in F_p; raises SpecializationError if the denominator dies."""
        num = _eval_mod(self.num, p, q0)
        den = _eval_mod(self.den, p, q0)
        if den == 0 or q0 % p == 0:
            raise SpecializationError(f"{self} has a pole at q={q0} mod {p}")
        val = num * pow(den, -1, p) % p
        return val * pow(q0, self.e, p) % p


def _eval_mod(poly, p: int, x: int) -> int:
    zn = poly.numer()
    zd = int(poly.denom()) % p
    if zd == 0:
        raise SpecializationError(f"coefficient denominator divisible by {p}")
    acc = 0
    for c in reversed(zn.coeffs()):
        acc = (acc * x + int(c)) % p
    return acc * pow(zd, -1, p) % p


def _make_laurent(field, e, num):
    if num.is_zero():
        return field.zero
    if num[0] == 0:
        v = _valuation(num)
        num = num.right_shift(v)
        e += v
    return RationalFunction(field, e, num, _ONE_POLY, True)


def _finish_generic(field, e, num, den):
    """Canonicalize when num and den are already coprime."""
    if num.is_zero():
        return field.zero
    if num[0] == 0:
        v = _valuation(num)
        num = num.right_shift(v)
        e += v
    c = den[0]
    if c == 0:  # only reachable from inv(): den came from a numerator, which is q-free
        raise AssertionError("denominator divisible by q")
    if c != 1:
        num = num / c
        den = den / c
    return RationalFunction(field, e, num, den, den.is_one())


def _make_generic(field, e, num, den):
    if num.is_zero():
        return field.zero
    if not den.is_one():
        g = num.gcd(den)
        if not g.is_one():
            num, den = num // g, den // g
    return _finish_generic(field, e, num, den)


class GenericField(Field):
    """Q(q), q transcendental."""

    regime = "generic"
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            inst = super().__new__(cls)
            inst.zero = RationalFunction(inst, 0, _ZERO_POLY, _ONE_POLY, True)
            inst.one = RationalFunction(inst, 0, _ONE_POLY, _ONE_POLY, True)
            inst.q = RationalFunction(inst, 1, _ONE_POLY, _ONE_POLY, True)
            cls._instance = inst
        return cls._instance

    def __repr__(self):
        return "GenericField()"

    def __reduce__(self):
        return (GenericField, ())

    def qpow(self, k: int) -> RationalFunction:
        return RationalFunction(self, int(k), _ONE_POLY, _ONE_POLY, True)

    def from_laurent(self, coeffs) -> RationalFunction:
        items = [(int(k), _coerce_rational(v)) for k, v in dict(coeffs).items() if v != 0]
        if not items:
            return self.zero
        lo = min(k for k, _ in items)
        hi = max(k for k, _ in items)
        arr = [fmpq(0)] * (hi - lo + 1)
        for k, v in items:
            arr[k - lo] = arr[k - lo] + v
        return _make_laurent(self, lo, fmpq_poly(arr))

    def fraction(self, num: dict, den: dict) -> RationalFunction:
        return self.from_laurent(num) / self.from_laurent(den)

    def parse(self, s: str) -> RationalFunction:
        s = s.strip()
        if " mod " in s:
            raise RegimeMismatch(f"{s!r} is a root-of-unity scalar")
        if s.startswith("(") and ")/(" in s and s.endswith(")"):
            a, b = s[1:-1].split(")/(", 1)
            return self.fraction(_parse_laurent(a), _parse_laurent(b))
        return self.from_laurent(_parse_laurent(s))

    def random_element(self, rng, degree=3, height=5):
        def rpoly():
            return {k: rng.randint(-height, height) for k in range(-1, degree)}

        num = rpoly()
        den = rpoly()
        if all(v == 0 for v in den.values()):
            den = {0: 1}
        return self.fraction(num, den)


# -- root-of-unity regime --------------------------------------------------------------


class CyclotomicElement(FieldElem):
    """A polynomial in q of degree < phi(l), read modulo Phi_l."""

    __slots__ = ("p", "_hash")

    def __init__(self, field, p):
        self.field = field
        self.p = p
        self._hash = None

    def is_zero(self) -> bool:
        return self.p.is_zero()

    def normalize(self) -> "CyclotomicElement":
        return CyclotomicElement(self.field, self.p % self.field.phi)

    def __eq__(self, other):
        if not isinstance(other, FieldElem):
            if isinstance(other, (int, Fraction)):
                other = self.field(other)
            else:
                return NotImplemented
        return other.field is self.field and self.p == other.p

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(("c", self.field.l, str(self.p)))
        return self._hash

    def __neg__(self):
        return CyclotomicElement(self.field, -self.p)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.field, self.p + other.p)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return CyclotomicElement(self.field, (self.p * other.p) % self.field.phi)

    def inv(self) -> "CyclotomicElement":
        if self.p.is_zero():
            raise ZeroDivisionError(f"division by zero in Q[q]/Phi_{self.field.l}")
        g, s, _ = self.p.xgcd(self.field.phi)
        # Phi_l is irreducible, so g is a nonzero constant
        return CyclotomicElement(self.field, (s / g[0]) % self.field.phi)

    def __str__(self):
        return f"{_poly_str(self.p.coeffs())} mod Phi_{self.field.l}"

    def mod_p(self, p: int, q0: int) -> int:
        return _eval_mod(self.p, p, q0)


def _parse_in(field, s):
    return field.parse(s)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


class CyclotomicField(Field):
    """Q[q]/Phi_l(q) for odd l >= 3."""

    regime = "root_of_unity"

    def __new__(cls, l: int):
        return _cyclotomic_field(int(l))

    def __repr__(self):
        return f"CyclotomicField({self.l})"

    def __reduce__(self):
        return (CyclotomicField, (self.l,))

    def qpow(self, k: int) -> CyclotomicElement:
        return self._powers[int(k) % self.l]

    def from_laurent(self, coeffs) -> CyclotomicElement:
        acc = _ZERO_POLY
        bins: dict[int, fmpq] = {}
        for k, v in dict(coeffs).items():
            if v != 0:
                j = int(k) % self.l
                bins[j] = bins.get(j, fmpq(0)) + _coerce_rational(v)
        for j, v in bins.items():
            if v != 0:
                acc = acc + self._powers[j].p * v
        return CyclotomicElement(self, acc)

    def parse(self, s: str) -> CyclotomicElement:
        s = s.strip()
        m = re.fullmatch(r"(.*)\s+mod\s+Phi_(\d+)", s)
        if not m:
            raise ValueError(f"{s!r} lacks the 'mod Phi_l' suffix")
        if int(m.group(2)) != self.l:
            raise RegimeMismatch(f"{s!r} does not belong to Q[q]/Phi_{self.l}")
        return self.from_laurent(_parse_laurent(m.group(1)))

    def random_element(self, rng, degree=None, height=5):
        deg = self.phi.degree()
        return CyclotomicElement(self, fmpq_poly([rng.randint(-height, height) for _ in range(deg)]))


@lru_cache(maxsize=None)
def _cyclotomic_field(l: int) -> CyclotomicField:
    if l < 3 or l % 2 == 0:
        raise ValueError(f"root of unity order must be odd and >= 3, got l={l}")
    inst = object.__new__(CyclotomicField)
    inst.l = l
    inst.phi = fmpq_poly(fmpz_poly.cyclotomic(l).coeffs())
    inst._powers = [CyclotomicElement(inst, (_X ** j) % inst.phi) for j in range(l)]
    inst.zero = CyclotomicElement(inst, _ZERO_POLY)
    inst.one = inst._powers[0]
    inst.q = inst._powers[1]
    return inst


def make_field(regime: str = "generic", l: int | None = None) -> Field:
    """Field for a regime name ("generic" or "root_of_unity")."""
    if regime == "generic":
        return GenericField()
    if regime == "root_of_unity":
        if l is None:
            raise ValueError("root_of_unity regime needs l")
        return CyclotomicField(l)
    raise ValueError(f"unknown regime {regime!r}")
