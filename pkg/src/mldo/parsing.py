"""Expression language for forms and operators.

Grammar (``^`` binds tighter than ``*`` and ``/``, which bind tighter than
``+`` and ``-``)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := INT | 'E2' | 'E4' | 'E6' | 'D' | 'Delta' | '(' expr ')'
            | NAME '(' rational ')'        # phi(p), psi(p), kz(k), dn(n)

``D`` is the skew generator delta; products are normalized with the
commutation rule, so ``D*E4`` reads back as ``E4*D - (1/3)*E6``. Dividing
by a nonconstant form produces an operator with meromorphic coefficients.
"""

from fractions import Fraction
import re

from .errors import ParseError
from .merore import MerForm, MerMldo
from .modform import DELTA, E2, E4, E6, Form
from .operators import Mldo

__all__ = ["parse", "parse_operator", "parse_form", "parse_rational", "tokenize"]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")

_ATOMS = {"E2": E2, "E4": E4, "E6": E6, "Delta": DELTA}


def tokenize(text):
    text = text.replace("−", "-")
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        start = m.start(m.lastindex) if m.lastindex else pos
        if m.group(1) is not None:
            out.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), start))
        elif m.group(3) is not None:
            ch = m.group(3)
            if ch not in "+-*/^(),":
                raise ParseError(f"unexpected character {ch!r}", start)
            out.append(("op", ch, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


def _families():
    from . import families

    return {
        "phi": families.phi_p,
        "psi": families.psi_p,
        "kz": families.kaneko_zagier,
        "dn": lambda n: families.dn_operator(_as_int(n)),
    }


def _as_int(x):
    if Fraction(x).denominator != 1:
        raise ParseError(f"expected an integer, got {x}")
    return int(x)


def _unify(a, b):
    if isinstance(a, MerMldo) or isinstance(b, MerMldo):
        return MerMldo.from_mldo(a), MerMldo.from_mldo(b)
    return a, b


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, value=None):
        t = self.take()
        if t[0] != kind or (value is not None and t[1] != value):
            want = value if value is not None else kind
            got = t[1] if t[1] is not None else "end of input"
            raise ParseError(f"expected {want!r}, found {got!r}", t[2])
        return t

    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected {t[1]!r}", t[2])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            v, rhs = _unify(v, rhs)
            v = v + rhs if op == "+" else v - rhs
        return v

    def term(self):
        v = self.unary()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            _, op, pos = self.take()
            rhs = self.unary()
            if op == "*":
                v, rhs = _unify(v, rhs)
                v = v * rhs
            else:
                v = self._divide(v, rhs, pos)
        return v

    def _divide(self, v, rhs, pos):
        if rhs.ord() != 0:
            raise ParseError("can only divide by a nonzero form", pos)
        c = rhs.coeffs[0]
        if isinstance(c, Form) and c.is_constant():
            return v.scale(1 / c.constant_value())
        try:
            inv = MerForm._lift(c).inverse()
        except Exception as exc:
            raise ParseError(f"cannot divide by {c}: {exc}", pos) from None
        v = MerMldo.from_mldo(v)
        return v.left_mul_form(inv)

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            t = self.peek()
            if t[0] == "op" and t[1] == "(":
                self.take()
                n = self.expect("int")[1]
                self.expect("op", ")")
            else:
                n = self.expect("int")[1]
            v = v ** n
        return v

    def rational(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        num = self.expect("int")[1]
        if self.peek()[0] == "op" and self.peek()[1] == "/":
            self.take()
            den = self.expect("int")[1]
            if den == 0:
                raise ParseError("zero denominator", self.toks[self.i - 1][2])
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "int":
            return Mldo.scalar(Form.const(val))
        if kind == "name":
            if val == "D":
                return Mldo.delta()
            if val in _ATOMS:
                return Mldo.scalar(_ATOMS[val])
            fams = _families()
            if val in fams:
                self.expect("op", "(")
                arg = self.rational()
                self.expect("op", ")")
                return fams[val](arg)
            raise ParseError(f"unknown name {val!r}", pos)
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect("op", ")")
            return v
        got = val if val is not None else "end of input"
        raise ParseError(f"unexpected {got!r}", pos)


def parse(text):
    """Parse to a Form (no D, polynomial), Mldo or MerMldo."""
    v = _Parser(text).parse()
    if isinstance(v, MerMldo) and v.is_polynomial():
        v = v.to_mldo()
    if isinstance(v, Mldo) and not isinstance(v, MerMldo) and v.ord() <= 0:
        return v.coeffs[0] if v.coeffs else Form()
    return v


def parse_operator(text):
    v = _Parser(text).parse()
    if isinstance(v, MerMldo) and v.is_polynomial():
        v = v.to_mldo()
    return v


def parse_form(text):
    v = parse(text)
    if not isinstance(v, Form):
        raise ParseError("expected a form without D", 0)
    return v


def parse_rational(text):
    text = text.strip()
    p = _Parser(text)
    v = p.rational()
    if p.peek()[0] != "end":
        raise ParseError(f"trailing text in rational {text!r}", p.peek()[2])
    return v
