"""Exact scalars: rationals and elements of cyclotomic fields Q(zeta_N).

Rationals are plain :class:`fractions.Fraction`. A :class:`Cyc` stores an
element of Q[x]/Phi_N(x) as a dense coefficient tuple of length phi(N), where
x stands for zeta_N = e(1/N). Binary operations between different orders lift
both operands to the lcm order first; a ``Fraction`` (or ``int``) operand is
treated as an element of every field.
"""

from fractions import Fraction
from functools import lru_cache
from math import gcd
import re

from .errors import DivisionByZero, ParseError

Rat = Fraction

__all__ = [
    "Rat",
    "Cyc",
    "as_rat",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
    "e_of",
    "parse_scalar",
    "format_rat",
    "format_cyc",
]


def as_rat(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational")


def format_rat(x):
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _lcm(a, b):
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def euler_phi(n):
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, lowest degree first."""
    # x^n - 1 divided by Phi_d for every proper divisor d
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d == n:
            continue
        num = _exact_int_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_int_div(num, den):
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        if c % lead:
            raise ArithmeticError("inexact integer polynomial division")
        c //= lead
        q[i] = c
        if c:
            for j, dj in enumerate(den):
                num[i + j] -= c * dj
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact integer polynomial division")
    return q


def _reduce(coeffs, n):
    """Reduce a Q[x] coefficient list modulo the monic Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    c = list(coeffs)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            c[i] = 0
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    c[base + j] -= t * phi[j]
    c = c[:deg] + [Fraction(0)] * (deg - len(c))
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in c)


# --- small dense Q[x] helpers used for inversion ---------------------------

def _ptrim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pdivmod(a, b):
    a = _ptrim(a)
    b = _ptrim(b)
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    inv = Fraction(1) / b[-1]
    for i in range(len(q) - 1, -1, -1):
        c = a[i + len(b) - 1] * inv
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    return q, _ptrim(a[: len(b) - 1])


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return _ptrim([x - y for x, y in zip(a, b)])


class Cyc:
    """An element of Q(zeta_N)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs=None):
        if order < 1:
            raise ValueError("cyclotomic order must be positive")
        self.order = order
        if coeffs is None:
            coeffs = ()
        self.coeffs = _reduce([Fraction(c) for c in coeffs], order)

    @classmethod
    def _raw(cls, order, coeffs):
        obj = cls.__new__(cls)
        obj.order = order
        obj.coeffs = coeffs
        return obj

    @classmethod
    def from_rat(cls, x, order=1):
        d = euler_phi(order)
        return cls._raw(order, (Fraction(x),) + (Fraction(0),) * (d - 1))

    # -- structure --------------------------------------------------------

    def lift(self, order):
        """Embed into Q(zeta_order); ``self.order`` must divide ``order``."""
        if order == self.order:
            return self
        if order % self.order:
            raise ValueError(f"cannot lift Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        spread = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            spread[i * step] = c
        return Cyc._raw(order, _reduce(spread, order))

    def is_rational(self):
        return not any(self.coeffs[1:])

    def to_rat(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def simplify(self):
        """Return a Fraction when the value is rational, else self."""
        return self.coeffs[0] if self.is_rational() else self

    def is_zero(self):
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other):
        if isinstance(other, Cyc):
            if other.order == self.order:
                return self, other
            n = _lcm(self.order, other.order)
            return self.lift(n), other.lift(n)
        if isinstance(other, (int, Fraction)):
            return self, Cyc.from_rat(other, self.order)
        return None, None

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyc._raw(a.order, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyc._raw(self.order, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return Cyc._raw(a.order, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Cyc.from_rat(0, self.order)
            return Cyc._raw(self.order, tuple(x * other for x in self.coeffs))
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return Cyc._raw(a.order, _reduce(prod, a.order))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        # extended Euclid: s*self + t*Phi = g, g a nonzero constant
        r0 = [Fraction(c) for c in cyclotomic_poly(self.order)]
        r1 = _ptrim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _psub(s0, _pmul(q, s1))
        g = r1[0]
        return Cyc._raw(self.order, _reduce([c / g for c in s1], self.order))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return self * (1 / Fraction(other))
        if isinstance(other, Cyc):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = Cyc.from_rat(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        raise TypeError("irrational cyclotomic elements are unhashable")

    def __repr__(self):
        return f"Cyc({self.order}, {format_cyc(self)!r})"

    def __str__(self):
        return format_cyc(self)


def root_of_unity(n, a=1):
    """e(a/n) = zeta_n^a as an element of Q(zeta_n)."""
    if n < 1:
        raise ValueError("order must be positive")
    a %= n
    coeffs = [Fraction(0)] * (a + 1)
    coeffs[a] = Fraction(1)
    return Cyc._raw(n, _reduce(coeffs, n))


def e_of(alpha):
    """e(alpha) for rational alpha; returns a Fraction when the value is +-1."""
    alpha = Fraction(alpha)
    if alpha.denominator == 1:
        return Fraction(1)
    if alpha.denominator == 2:
        return Fraction(-1)
    return root_of_unity(alpha.denominator, alpha.numerator)


def format_cyc(c):
    terms = []
    for i, x in enumerate(c.coeffs):
        if not x:
            continue
        if i == 0:
            body, coef = "", x
        else:
            body = f"zeta({c.order})" + (f"^{i}" if i > 1 else "")
            coef = x
        terms.append((coef, body))
    if not terms:
        return "0"
    out = []
    for idx, (coef, body) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        if body:
            if mag == 1:
                text = body
            elif mag.denominator == 1:
                text = f"{mag.numerator}*{body}"
            else:
                text = f"({format_rat(mag)})*{body}"
        else:
            text = format_rat(mag)
        if idx == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


_TERM = re.compile(
    r"\s*([+-])?\s*(?:\(?\s*(\d+(?:/\d+)?)\s*\)?\s*\*?\s*)?(zeta\((\d+)\)(?:\^(\d+))?)?\s*"
)


def parse_scalar(text):
    """Parse "p/q" or a sum of terms like "(1/2)*zeta(48)^8 - 3"."""
    text = text.strip()
    if not text:
        raise ParseError("empty scalar", 0)
    pos = 0
    total = Fraction(0)
    seen = False
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos or not (m.group(2) or m.group(3)):
            raise ParseError(f"unexpected text {text[pos:]!r}", pos)
        if seen and not m.group(1):
            raise ParseError("missing operator between terms", pos)
        sign = -1 if m.group(1) == "-" else 1
        coef = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            n = int(m.group(4))
            e = int(m.group(5) or 1)
            term = root_of_unity(n, e) * (sign * coef)
        else:
            term = sign * coef
        total = total + term
        seen = True
        pos = m.end()
    return total
