"""Modular linear differential operators sum a_i delta^i.

Operators are stored in the coefficients-left normal form with coefficients
in Q[E2, E4, E6] (modular when no coefficient contains E2). Multiplication
uses delta^n a = sum_i C(n, i) D^i[a] delta^(n-i), where D[a] = [delta, a] is
the Serre derivative of each homogeneous component.

The coefficient ring is pluggable: the same code runs over meromorphic
forms (see :mod:`mldo.merore`) by overriding ``_coerce``.
"""

from fractions import Fraction
from math import comb

from .errors import (
    DivisionByZeroOperator,
    NotACommonDivisor,
    NotDivisible,
    NotHomogeneous,
    NotMonicTop,
    OrderMismatch,
)
from .modform import ONE, ZERO, Form

NEG_INF = float("-inf")

__all__ = [
    "Mldo",
    "DELTA_OP",
    "NEG_INF",
    "divide_monic_right",
    "divide_monic_left",
    "divide_general_right",
    "divide_general_left",
    "exact_div",
]


class Mldo:
    """a_n delta^n + ... + a_1 delta + a_0 with a_n != 0 (or the zero operator)."""

    __slots__ = ("coeffs",)

    _zero = ZERO
    _one = ONE

    def __init__(self, coeffs=()):
        cs = [self._coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def _coerce(cls, c):
        if isinstance(c, Form):
            return c
        if isinstance(c, (int, Fraction)):
            return Form.const(c)
        raise TypeError(f"cannot use {type(c).__name__} as an operator coefficient")

    @classmethod
    def _make(cls, coeffs):
        cs = list(coeffs)
        while cs and not cs[-1]:
            cs.pop()
        obj = cls.__new__(cls)
        obj.coeffs = tuple(cs)
        return obj

    @classmethod
    def delta(cls, n=1):
        return cls._make([cls._zero] * n + [cls._one])

    @classmethod
    def scalar(cls, f):
        return cls._make([cls._coerce(f)])

    # -- structure -------------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def ord(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def top(self):
        return self.coeffs[-1] if self.coeffs else self._zero

    def coeff(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self._zero

    def weight(self):
        """Common value of wt(a_i) + 2i; None for the zero operator."""
        ws = set()
        for i, c in enumerate(self.coeffs):
            if c:
                for w in c.weights():
                    ws.add(w + 2 * i)
        if not ws:
            return None
        if len(ws) > 1:
            raise NotHomogeneous(f"operator mixes weights {sorted(ws)}")
        return ws.pop()

    def is_homogeneous(self):
        try:
            self.weight()
            return True
        except NotHomogeneous:
            return False

    def is_modular(self):
        return all(c.is_modular() for c in self.coeffs)

    def is_monic(self):
        return bool(self.coeffs) and self.top() == self._one

    def is_quasimonic(self):
        return bool(self.coeffs) and self.top().eval_inf() == 1

    def classify(self):
        if self.is_monic():
            return "monic"
        if self.is_quasimonic():
            return "quasimonic"
        return "neither"

    def in_Z(self):
        """All coefficients vanish at the cusp."""
        return all(c.eval_inf() == 0 for c in self.coeffs)

    # -- arithmetic --------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Mldo):
            return other
        try:
            return self.scalar(other)
        except TypeError:
            return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return self._make([self.coeff(i) + other.coeff(i) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return self._make([-c for c in self.coeffs])

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return self._make([])
        n = len(self.coeffs) - 1
        out = [self._zero] * (n + len(other.coeffs))
        for j, bj in enumerate(other.coeffs):
            if not bj:
                continue
            chain = [bj]
            for _ in range(n):
                chain.append(chain[-1].bracket())
            for i, ai in enumerate(self.coeffs):
                if not ai:
                    continue
                for t in range(i + 1):
                    d = chain[t]
                    if d:
                        term = ai * d
                        if t:
                            term = term * comb(i, t)
                        out[i - t + j] = out[i - t + j] + term
        return self._make(out)

    def __rmul__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return other * self

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = self.scalar(self._one)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def scale(self, c):
        return self._make([x * c for x in self.coeffs])

    def left_mul_form(self, f):
        """f * self for a coefficient f (no derivatives appear)."""
        return self._make([f * c for c in self.coeffs])

    def monic(self):
        """Divide by the top coefficient; needs an invertible top."""
        t = self.top()
        if not self.coeffs:
            raise DivisionByZeroOperator("the zero operator has no monic form")
        inv = _invert_coeff(t)
        return self._make([inv * c for c in self.coeffs])

    def d_bracket(self, n=1):
        """D^n[a] = [delta, [delta, ... a]]: coefficient-wise derivation."""
        out = self
        for _ in range(n):
            out = self._make([c.bracket() for c in out.coeffs])
        return out

    # -- alternate basis ------------------------------------------------------

    def to_right_form(self):
        """Coefficients b_i with self = sum delta^i b_i."""
        r = self
        bs = [self._zero] * len(self.coeffs)
        while r.coeffs:
            n = len(r.coeffs) - 1
            b = r.top()
            bs[n] = b
            r = r - self.delta(n) * self.scalar(b)
        return bs

    @classmethod
    def from_right_form(cls, bs):
        out = cls._make([])
        for i, b in enumerate(bs):
            b = cls._coerce(b)
            if b:
                out = out + cls.delta(i) * cls.scalar(b)
        return out

    # -- action on series --------------------------------------------------

    def apply(self, k, f, T=None):
        from .qseries import apply_mldo

        return apply_mldo(self, k, f, T)

    def apply_form(self, k, f):
        """Exact image of a homogeneous quasimodular form: sum a_i D_k^i f."""
        out = ZERO
        g = f
        k = Fraction(k)
        for i, c in enumerate(self.coeffs):
            if c:
                out = out + c * g
            if i + 1 < len(self.coeffs):
                g = _serre_at(g, k + 2 * i)
        return out

    # -- text --------------------------------------------------------------

    def __str__(self):
        return format_operator(self)

    def __repr__(self):
        return f"{type(self).__name__}({format_operator(self)!r})"


def _serre_at(g, k):
    """D_k g for a form g carrying the formal weight k."""
    from .modform import E2

    return g.derive() - (E2 * g).scale(Fraction(k) / 12)


def _invert_coeff(t):
    if isinstance(t, Form):
        if t.is_constant() and t:
            return Form.const(1 / t.constant_value())
        raise NotMonicTop(f"top coefficient {t} is not invertible in the polynomial ring")
    return t.inverse()


DELTA_OP = Mldo.delta(1)


def _coef_text(c):
    text = str(c)
    if getattr(c, "terms", None) is not None and len(c.terms) > 1:
        return f"({text})", False
    if text.startswith("-"):
        return text[1:], True
    return text, False


def format_operator(a):
    if not a.coeffs:
        return "0"
    pieces = []
    for i in range(len(a.coeffs) - 1, -1, -1):
        c = a.coeffs[i]
        if not c:
            continue
        dpart = "" if i == 0 else ("D" if i == 1 else f"D^{i}")
        text, neg = _coef_text(c)
        if dpart:
            if text == "1":
                body = dpart
            else:
                body = f"{text}*{dpart}"
        else:
            body = text
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


# --- division ------------------------------------------------------------------

def _check_monic(b):
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    if not b.is_monic():
        raise NotMonicTop(f"divisor top {b.top()} is not 1")


def divide_monic_right(a, b):
    """(c, r) with a = c*b + r and ord r < ord b; b must be monic."""
    _check_monic(b)
    j = b.ord()
    c = type(a)._make([])
    r = a
    while r.coeffs and r.ord() >= j:
        t = type(a).delta(r.ord() - j).left_mul_form(r.top())
        c = c + t
        r = r - t * b
    return c, r


def divide_monic_left(a, b):
    """(c, r) with a = b*c + r and ord r < ord b; b must be monic."""
    _check_monic(b)
    j = b.ord()
    c = type(a)._make([])
    r = a
    while r.coeffs and r.ord() >= j:
        t = type(a).delta(r.ord() - j).left_mul_form(r.top())
        c = c + t
        r = r - b * t
    return c, r


def _cofactors(a, b, d):
    d = d if d is not None else ONE
    if not isinstance(d, Form):
        d = Form.const(d)
    try:
        return a.top().exact_div(d), b.top().exact_div(d)
    except NotDivisible:
        raise NotACommonDivisor(f"{d} does not divide both tops") from None


def divide_general_right(a, b, d=None):
    """(m, c, r) with m*a = c*b + r, m = top(b)^(i-j) * top(b)/d, ord r < ord b.

    Follows the recursive construction: compare tops, cancel the leading
    term, and recurse once on the difference when it is still too long.
    """
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    if not a.coeffs:
        return ONE, type(a)._make([]), a
    i, j = a.ord(), b.ord()
    if i < j:
        raise OrderMismatch(f"ord(a) = {i} < ord(b) = {j}")
    ap, bp = _cofactors(a, b, d)
    cls = type(a)
    tb = b.top()
    if i == j:
        c = cls.scalar(ap)
        r = a.left_mul_form(bp) - c * b
        return bp, c, r
    e = a.left_mul_form(bp) - cls.delta(i - j).left_mul_form(ap) * b
    lead = tb ** (i - j)
    base = cls.delta(i - j).left_mul_form(lead * ap)
    m = lead * bp
    if not e.coeffs or e.ord() < j:
        return m, base, e.left_mul_form(lead)
    jp = e.ord()
    _, f, g = divide_general_right(e, b, None)
    k = i - jp - 1
    scale = tb ** k
    return m, base + f.left_mul_form(scale), g.left_mul_form(scale)


def divide_general_left(a, b, d=None):
    """(m, c, r) with a*m = b*c + r, m = top(b)^(i-j) * top(b)/d, ord r < ord b."""
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    if not a.coeffs:
        return ONE, type(a)._make([]), a
    i, j = a.ord(), b.ord()
    if i < j:
        raise OrderMismatch(f"ord(a) = {i} < ord(b) = {j}")
    ap, bp = _cofactors(a, b, d)
    cls = type(a)
    tb = b.top()
    if i == j:
        c = cls.scalar(ap)
        r = a * cls.scalar(bp) - b * c
        return bp, c, r
    e = a * cls.scalar(bp) - b * cls.delta(i - j).left_mul_form(ap)
    lead = tb ** (i - j)
    base = cls.delta(i - j).left_mul_form(ap) * cls.scalar(lead)
    m = lead * bp
    if not e.coeffs or e.ord() < j:
        return m, base, e * cls.scalar(lead)
    jp = e.ord()
    _, f, g = divide_general_left(e, b, None)
    k = i - jp - 1
    scale = cls.scalar(tb ** k)
    return m, base + f * scale, g * scale


def exact_div(a, b, side="right"):
    """The unique c with a = c*b (right) or a = b*c (left)."""
    if not b.coeffs:
        raise DivisionByZeroOperator("division by the zero operator")
    cls = type(a)
    j = b.ord()
    tb = b.top()
    c = cls._make([])
    r = a
    while r.coeffs and r.ord() >= j:
        try:
            x = r.top().exact_div(tb) if isinstance(tb, Form) else r.top() * tb.inverse()
        except NotDivisible:
            raise NotDivisible(f"{a} is not divisible by {b} from the {side}") from None
        t = cls.delta(r.ord() - j).left_mul_form(x)
        c = c + t
        r = r - (t * b if side == "right" else b * t)
    if r.coeffs:
        raise NotDivisible(f"{a} is not divisible by {b} from the {side}")
    return c
