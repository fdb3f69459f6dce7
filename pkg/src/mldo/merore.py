"""Operators over meromorphic modular forms.

A :class:`MerForm` is a quotient of homogeneous modular forms kept in lowest
terms, with the denominator scaled so its leading coefficient is 1. Over
these coefficients every nonzero homogeneous operator has an invertible top,
so right division by any nonzero operator is possible and the Euclidean
algorithm gives gcrd, lclm and Bezout cofactors.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    BothZero,
    DivisionByZero,
    DivisionByZeroOperator,
    MldoError,
    NotHomogeneous,
    ZeroOperator,
)
from .linalg import first_dependency, solve_rational
from .modform import ONE, ZERO, Form, form_gcd, modular_basis
from .operators import Mldo, divide_monic_right, exact_div, format_operator

__all__ = [
    "MerForm",
    "MerMldo",
    "euclid_div_right",
    "gcrd",
    "lclm",
    "clear_denoms",
    "ore_pair",
    "symmetric_product",
    "GcrdResult",
]


def _check_form(f):
    if not f.is_modular():
        raise NotHomogeneous("meromorphic coefficients must be modular")
    if not f.is_homogeneous():
        raise NotHomogeneous(f"{f} is not homogeneous")
    return f


class MerForm:
    """num/den with homogeneous modular num and den, in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE):
        if isinstance(num, (int, Fraction)):
            num = Form.const(num)
        if isinstance(den, (int, Fraction)):
            den = Form.const(den)
        if not den:
            raise DivisionByZero("zero denominator")
        _check_form(num)
        _check_form(den)
        if not num:
            self.num, self.den = ZERO, ONE
            return
        g = form_gcd(num, den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.lead_coeff()
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        self.num, self.den = num, den

    @classmethod
    def _make(cls, num, den):
        obj = cls.__new__(cls)
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def const(cls, c):
        return cls._make(Form.const(c), ONE)

    def __bool__(self):
        return bool(self.num)

    def is_zero(self):
        return not self.num

    def weight(self):
        if not self.num:
            return None
        return self.num.weight() - self.den.weight()

    def weights(self):
        w = self.weight()
        return [] if w is None else [w]

    def is_modular(self):
        return True

    def is_polynomial(self):
        return self.den.is_constant()

    def to_form(self):
        if not self.is_polynomial():
            raise ValueError(f"{self} has a nontrivial denominator")
        return self.num.scale(1 / self.den.constant_value())

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def qexp(self, T):
        """Laurent q-expansion to O(q^T); poles at the cusp are allowed."""
        from math import ceil

        T = Fraction(T)
        if self.den.is_constant():
            return self.num.qexp(T).scale(1 / self.den.constant_value())
        probe = self.den.qexp(T)
        v = probe.valuation
        while probe.is_zero():
            probe = self.den.qexp(2 * probe.trunc + 1)
            v = probe.valuation
        num = self.num.qexp(ceil(T + v))
        inv = self.den.qexp(ceil(T + 2 * v)) ** -1
        return (num * inv).truncate(T)

    def eval_inf(self):
        d = self.den.eval_inf()
        if d == 0:
            raise DivisionByZero(f"{self} has a pole at the cusp")
        return self.num.eval_inf() / d

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _lift(x):
        if isinstance(x, MerForm):
            return x
        if isinstance(x, Form):
            return MerForm(x)
        if isinstance(x, (int, Fraction)):
            return MerForm.const(x)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not other.num:
            return self
        if not self.num:
            return other
        if self.weight() != other.weight():
            raise NotHomogeneous("sum of meromorphic forms of different weights")
        if self.den == other.den:
            return MerForm(self.num + other.num, self.den)
        return MerForm(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return MerForm._make(-self.num, self.den)

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return MER_ZERO
            return MerForm._make(self.num.scale(other), self.den)
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not self.num or not other.num:
            return MER_ZERO
        if self.den.is_constant() and other.den.is_constant():
            return MerForm._make(self.num * other.num, ONE)
        return MerForm(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DivisionByZero("inverse of the zero meromorphic form")
        return MerForm(self.den, self.num)

    def __truediv__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        return MerForm(self.num ** n, self.den ** n)

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def bracket(self):
        """Quotient rule for the weight-graded derivation D."""
        if not self.num:
            return MER_ZERO
        if self.den.is_constant():
            return MerForm._make(self.num.bracket().scale(1 / self.den.constant_value()), ONE)
        top = self.num.bracket() * self.den - self.num * self.den.bracket()
        return MerForm(top, self.den * self.den)

    def __str__(self):
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"MerForm({str(self)!r})"

    @property
    def terms(self):
        # lets operator printing decide on parentheses
        return self.num.terms if self.den == ONE else {0: 0}


MER_ZERO = MerForm._make(ZERO, ONE)
MER_ONE = MerForm._make(ONE, ONE)


class MerMldo(Mldo):
    """An operator with meromorphic modular coefficients."""

    __slots__ = ()

    _zero = MER_ZERO
    _one = MER_ONE

    @classmethod
    def _coerce(cls, c):
        if isinstance(c, MerForm):
            return c
        if isinstance(c, Form):
            return MerForm(c)
        if isinstance(c, (int, Fraction)):
            return MerForm.const(c)
        raise TypeError(f"cannot use {type(c).__name__} as a meromorphic coefficient")

    @classmethod
    def from_mldo(cls, a):
        if isinstance(a, MerMldo):
            return a
        return cls([MerForm(c) for c in a.coeffs])

    def is_polynomial(self):
        return all(c.is_polynomial() for c in self.coeffs)

    def to_mldo(self):
        return Mldo([c.to_form() for c in self.coeffs])

    def monic(self):
        if not self.coeffs:
            raise ZeroOperator("the zero operator has no monic form")
        inv = self.top().inverse()
        return self._make([inv * c for c in self.coeffs])

    def __str__(self):
        return format_operator(self)


def _as_mer(a):
    if isinstance(a, MerMldo):
        return a
    if isinstance(a, Mldo):
        return MerMldo.from_mldo(a)
    raise TypeError(f"expected an operator, got {type(a).__name__}")


def _check_homogeneous(*ops):
    for a in ops:
        if a.coeffs:
            a.weight()


def euclid_div_right(a, b):
    """(quot, rem) with a = quot*b + rem and ord rem < ord b."""
    a, b = _as_mer(a), _as_mer(b)
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    j = b.ord()
    inv = b.top().inverse()
    q = MerMldo._make([])
    r = a
    while r.coeffs and r.ord() >= j:
        t = MerMldo.delta(r.ord() - j).left_mul_form(r.top() * inv)
        q = q + t
        r = r - t * b
    return q, r


def euclid_div_left(a, b):
    """(quot, rem) with a = b*quot + rem and ord rem < ord b."""
    a, b = _as_mer(a), _as_mer(b)
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    j = b.ord()
    inv = b.top().inverse()
    q = MerMldo._make([])
    r = a
    while r.coeffs and r.ord() >= j:
        t = MerMldo.delta(r.ord() - j).left_mul_form(r.top() * inv)
        q = q + t
        r = r - b * t
    return q, r


@dataclass
class GcrdResult:
    gcrd: MerMldo
    bezout: tuple  # (u, v) with u*a + v*b = gcrd
    lclm: MerMldo


def _extended_euclid(a, b):
    a, b = _as_mer(a), _as_mer(b)
    if not a.coeffs and not b.coeffs:
        raise BothZero("gcrd of two zero operators")
    _check_homogeneous(a, b)
    zero = MerMldo._make([])
    one = MerMldo.scalar(MER_ONE)
    r0, r1 = a, b
    s0, s1 = one, zero
    t0, t1 = zero, one
    while r1.coeffs:
        q, r = euclid_div_right(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = r0.top().inverse()
    g = r0.monic()
    return a, b, g, (s0.left_mul_form(inv), t0.left_mul_form(inv)), s1


def gcrd(a, b):
    """Monic greatest common right divisor with Bezout cofactors."""
    a, b, g, bez, s_last = _extended_euclid(a, b)
    return g, bez


def lclm(a, b):
    """Monic least common left multiple."""
    a_, b_ = _as_mer(a), _as_mer(b)
    if not a_.coeffs or not b_.coeffs:
        raise ZeroOperator("lclm needs nonzero operators")
    a_, _, _, _, s_last = _extended_euclid(a_, b_)
    return (s_last * a_).monic()


def gcrd_full(a, b):
    a_, b_ = _as_mer(a), _as_mer(b)
    a_, b_, g, bez, s_last = _extended_euclid(a_, b_)
    l = (s_last * a_).monic() if a_.coeffs and b_.coeffs else None
    return GcrdResult(g, bez, l)


def _lcm_forms(f, g):
    return (f * g).exact_div(form_gcd(f, g))


def clear_denoms(a):
    """(m, a0) with m*a = a0, a0 polynomial with coprime integer content."""
    a = _as_mer(a)
    if not a.coeffs:
        return ONE, Mldo([])
    L = ONE
    for c in a.coeffs:
        if c and not c.den.is_constant():
            L = _lcm_forms(L, c.den)
    polys = []
    for c in a.coeffs:
        if not c:
            polys.append(ZERO)
        else:
            polys.append((c.num * L.exact_div(c.den)))
    # content 1: multiply by lcm(denominators) / gcd(numerators)
    den, g = 1, 0
    for p in polys:
        for x in p.terms.values():
            den = den * x.denominator // gcd(den, x.denominator)
            g = gcd(g, x.numerator)
    scale = Fraction(den, g)
    return L.scale(scale), Mldo([p.scale(scale) for p in polys])


def ore_pair(a, b, max_order=12):
    """Monic a2 and some b2 in the polynomial ring with a2*a = b2*b.

    ``b`` must be monic; both must be homogeneous. The monic multiplier is
    searched order by order: for each N the coefficients of
    a2 = delta^N + sum c_s delta^s, c_s of weight 2N - 2s, enter the
    remainder of a2*a modulo b linearly, so each order is one exact linear
    system over Q.
    """
    if isinstance(a, MerMldo):
        a = a.to_mldo()
    if isinstance(b, MerMldo):
        b = b.to_mldo()
    if not a.coeffs:
        raise ZeroOperator("ore_pair needs a nonzero operator")
    if not b.is_monic():
        from .errors import NotMonicTop

        raise NotMonicTop("ore_pair needs a monic right factor")
    _check_homogeneous(a, b)
    for N in range(0, max_order + 1):
        _, base = divide_monic_right(Mldo.delta(N) * a, b)
        unknowns = []
        for s in range(N):
            for m in modular_basis(2 * N - 2 * s):
                op = Mldo.delta(s).left_mul_form(Form({m: 1}))
                _, rem = divide_monic_right(op * a, b)
                unknowns.append((s, m, rem))
        if not base.coeffs:
            sol = []
        else:
            keys = set()
            for op in [base] + [u[2] for u in unknowns]:
                for i, c in enumerate(op.coeffs):
                    for mono in c.terms:
                        keys.add((i, mono))
            keys = sorted(keys)
            matrix = [[u[2].coeff(i).terms.get(mono, Fraction(0)) for u in unknowns] for i, mono in keys]
            rhs = [-base.coeff(i).terms.get(mono, Fraction(0)) for i, mono in keys]
            if not unknowns:
                continue
            sol = solve_rational(matrix, rhs)
            if sol is None:
                continue
        a2 = Mldo.delta(N)
        for (s, m, _), x in zip(unknowns, sol):
            if x:
                a2 = a2 + Mldo.delta(s).left_mul_form(Form({m: x}))
        b2 = exact_div(a2 * a, b, "right")
        return a2, b2
    raise MldoError(f"no monic left multiplier up to order {max_order}")


def symmetric_product(a, b, k, l):
    """Monic operator killing phi*psi whenever a[k] phi = 0 and b[l] psi = 0.

    Works in the module spanned by D^i phi * D^j psi (i < ord a, j < ord b):
    repeatedly applies D to the product, reduces with both equations, and
    stops at the first linear dependence over meromorphic forms.
    """
    a, b = _as_mer(a), _as_mer(b)
    if not a.is_monic() or not b.is_monic():
        from .errors import NotMonicTop

        raise NotMonicTop("symmetric product needs monic operators")
    n, m = a.ord(), b.ord()
    if n < 1 or m < 1:
        raise ZeroOperator("symmetric product needs operators of positive order")
    size = n * m

    def idx(i, j):
        return i * m + j

    def step(v):
        out = [MER_ZERO] * size
        for i in range(n):
            for j in range(m):
                c = v[idx(i, j)]
                if not c:
                    continue
                out[idx(i, j)] = out[idx(i, j)] + c.bracket()
                if i + 1 < n:
                    out[idx(i + 1, j)] = out[idx(i + 1, j)] + c
                else:
                    for s in range(n):
                        ac = a.coeff(s)
                        if ac:
                            out[idx(s, j)] = out[idx(s, j)] - c * ac
                if j + 1 < m:
                    out[idx(i, j + 1)] = out[idx(i, j + 1)] + c
                else:
                    for s in range(m):
                        bc = b.coeff(s)
                        if bc:
                            out[idx(i, s)] = out[idx(i, s)] - c * bc
        return out

    def vectors():
        v = [MER_ZERO] * size
        v[0] = MER_ONE
        for _ in range(size + 1):
            yield v
            v = step(v)

    dep = first_dependency(vectors(), MER_ZERO, MER_ONE)
    if dep is None:
        raise MldoError("no dependency found; module rank exceeded")
    r, cs = dep
    coeffs = [-c for c in cs] + [MER_ONE]
    return MerMldo(coeffs)
