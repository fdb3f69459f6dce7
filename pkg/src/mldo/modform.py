"""Polynomials in E2, E4, E6 with rational coefficients.

One class, :class:`Form`, covers both the modular ring Q[E4, E6] and the
quasimodular ring Q[E2, E4, E6]; a form is modular exactly when no monomial
contains E2. Monomials are keyed by exponent triples ``(c, a, b)`` meaning
E2^c E4^a E6^b, of weight 2c + 4a + 6b.

The derivation ``bracket`` is the commutator [delta, .]: on a homogeneous
form of weight k it is the Serre derivative D_k, and it is extended
additively to mixed weights.
"""

from fractions import Fraction
from functools import lru_cache
from math import ceil

from .errors import NoFit, NotDivisible, NotHomogeneous, UnderDetermined
from .linalg import solve_rational
from .qseries import QSeries, eisenstein_coeffs
from .scalar import format_rat

__all__ = [
    "Form",
    "E2",
    "E4",
    "E6",
    "ONE",
    "ZERO",
    "DELTA",
    "dim_modular",
    "modular_basis",
    "form_gcd",
    "recognize",
    "unit_monomial",
]


def _mono_weight(m):
    return 2 * m[0] + 4 * m[1] + 6 * m[2]


class Form:
    """Sum of c * E2^i E4^j E6^l with rational c."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(m)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _make(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c):
        c = Fraction(c)
        return cls._make({(0, 0, 0): c} if c else {})

    @classmethod
    def monomial(cls, c, a, b, coeff=1):
        return cls({(c, a, b): coeff})

    # -- predicates and grading ---------------------------------------------

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def weights(self):
        return sorted({_mono_weight(m) for m in self.terms})

    def is_homogeneous(self):
        return len(self.weights()) <= 1

    def weight(self):
        """Weight of a homogeneous form; None for the zero form."""
        ws = self.weights()
        if not ws:
            return None
        if len(ws) > 1:
            raise NotHomogeneous(f"form has mixed weights {ws}")
        return ws[0]

    def homogeneous_part(self, k):
        return Form._make({m: c for m, c in self.terms.items() if _mono_weight(m) == k})

    def depth(self):
        """Highest power of E2; None for the zero form."""
        if not self.terms:
            return None
        return max(m[0] for m in self.terms)

    def is_modular(self):
        return all(m[0] == 0 for m in self.terms)

    def is_constant(self):
        return all(m == (0, 0, 0) for m in self.terms)

    def constant_value(self):
        return self.terms.get((0, 0, 0), Fraction(0))

    def eval_inf(self):
        """Value at the cusp: every Eisenstein series is 1 + O(q)."""
        return sum(self.terms.values(), Fraction(0))

    def lead_monomial(self):
        """Largest monomial in the canonical order (weight, then exponents)."""
        return max(self.terms, key=lambda m: (_mono_weight(m), m))

    def lead_coeff(self):
        return self.terms[self.lead_monomial()] if self.terms else Fraction(0)

    # -- arithmetic --------------------------------------------------------

    @staticmethod
    def _lift(x):
        if isinstance(x, Form):
            return x
        if isinstance(x, (int, Fraction)):
            return Form.const(x)
        return None

    def __add__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Form._make(out)

    __radd__ = __add__

    def __neg__(self):
        return Form._make({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Fraction(c)
        if not c:
            return ZERO
        return Form._make({m: x * c for m, x in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Form):
            return NotImplemented
        if len(other.terms) == 1 and (0, 0, 0) in other.terms:
            return self.scale(other.terms[(0, 0, 0)])
        if len(self.terms) == 1 and (0, 0, 0) in self.terms:
            return other.scale(self.terms[(0, 0, 0)])
        out = {}
        for (c1, a1, b1), x in self.terms.items():
            for (c2, a2, b2), y in other.terms.items():
                m = (c1 + c2, a1 + a2, b1 + b2)
                out[m] = out.get(m, 0) + x * y
        return Form._make({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        if isinstance(other, Form):
            return self.exact_div(other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Form.const(other)
        if not isinstance(other, Form):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def exact_div(self, g):
        """Quotient h with self = h * g; raises NotDivisible otherwise."""
        if not g:
            from .errors import DivisionByZero

            raise DivisionByZero("division by the zero form")
        lt = max(g.terms)
        lc = g.terms[lt]
        r = dict(self.terms)
        q = {}
        while r:
            m = max(r)
            if any(x < y for x, y in zip(m, lt)):
                raise NotDivisible("form is not divisible")
            qm = tuple(x - y for x, y in zip(m, lt))
            qc = r[m] / lc
            q[qm] = qc
            for gm, gc in g.terms.items():
                t = (qm[0] + gm[0], qm[1] + gm[1], qm[2] + gm[2])
                s = r.get(t, 0) - qc * gc
                if s:
                    r[t] = s
                else:
                    r.pop(t, None)
        return Form._make(q)

    def divides(self, f):
        try:
            f.exact_div(self)
            return True
        except NotDivisible:
            return False

    # -- derivations -------------------------------------------------------

    def derive(self):
        """The normalized derivative f' = q df/dq, via the Ramanujan identities."""
        out = ZERO
        for m, c in self.terms.items():
            out = out + _mono_derive(m).scale(c)
        return out

    def bracket(self):
        """[delta, f]: each weight-w monomial m goes to m' - (w/12) E2 m."""
        out = {}
        for m, c in self.terms.items():
            for mm, cc in _mono_bracket(m).terms.items():
                s = out.get(mm, 0) + c * cc
                if s:
                    out[mm] = s
                else:
                    out.pop(mm, None)
        return Form._make(out)

    def serre_d(self, k=None):
        """D_k f = f' - (k/12) E2 f for homogeneous f (k defaults to wt f)."""
        w = self.weight()
        if w is None:
            return ZERO
        if k is None:
            k = w
        k = Fraction(k)
        out = self.bracket()
        if k != w:
            out = out + (E2 * self).scale(Fraction(w - k) / 12)
        return out

    # -- q-expansion -----------------------------------------------------------

    def qexp(self, T):
        """q-expansion to O(q^ceil(T))."""
        n = max(ceil(Fraction(T)), 0)
        if not self.terms:
            return QSeries.zero(n)
        den = 1
        for c in self.terms.values():
            den = den * c.denominator // _gcd(den, c.denominator)
        acc = [0] * n
        for m, c in self.terms.items():
            series = _mono_series(m, n)
            k = int(c * den)
            for i, v in enumerate(series):
                if v:
                    acc[i] += k * v
        terms = {Fraction(i): Fraction(v, den) for i, v in enumerate(acc) if v}
        return QSeries._make(terms, Fraction(n), 1)

    # -- text ----------------------------------------------------------------

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (-_mono_weight(mc[0]), tuple(-x for x in mc[0])))

    def __str__(self):
        return format_form(self)

    def __repr__(self):
        return f"Form({format_form(self)!r})"


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@lru_cache(maxsize=None)
def _mono_derive(m):
    c, a, b = m
    out = {}

    def add(key, val):
        out[key] = out.get(key, 0) + val

    if c:
        # E2' = (E2^2 - E4)/12
        add((c + 1, a, b), Fraction(c, 12))
        add((c - 1, a + 1, b), Fraction(-c, 12))
    if a:
        # E4' = (E2 E4 - E6)/3
        add((c + 1, a, b), Fraction(a, 3))
        add((c, a - 1, b + 1), Fraction(-a, 3))
    if b:
        # E6' = (E2 E6 - E4^2)/2
        add((c + 1, a, b), Fraction(b, 2))
        add((c, a + 2, b - 1), Fraction(-b, 2))
    return Form({k: v for k, v in out.items() if v})


@lru_cache(maxsize=None)
def _mono_bracket(m):
    d = dict(_mono_derive(m).terms)
    key = (m[0] + 1, m[1], m[2])
    s = d.get(key, 0) - Fraction(_mono_weight(m), 12)
    if s:
        d[key] = s
    else:
        d.pop(key, None)
    return Form._make(d)


def _dense_mul(x, y, n):
    out = [0] * n
    for i, u in enumerate(x):
        if u:
            lim = n - i
            for j in range(min(lim, len(y))):
                v = y[j]
                if v:
                    out[i + j] += u * v
    return out


@lru_cache(maxsize=4096)
def _mono_series(m, n):
    """Dense integer q-coefficients of E2^c E4^a E6^b below q^n."""
    c, a, b = m
    if n == 0:
        return ()
    if m == (0, 0, 0):
        return (1,) + (0,) * (n - 1)
    for idx, k in ((0, 2), (1, 4), (2, 6)):
        if m[idx]:
            prev = list(m)
            prev[idx] -= 1
            return tuple(_dense_mul(_mono_series(tuple(prev), n), eisenstein_coeffs(k, n), n))
    raise AssertionError("unreachable")


def format_form(f):
    if not f.terms:
        return "0"
    pieces = []
    for idx, (m, c) in enumerate(f.sorted_terms()):
        factors = []
        for name, e in zip(("E2", "E4", "E6"), m):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mag = abs(c)
        if not factors:
            text = format_rat(mag) if mag.denominator == 1 else f"({format_rat(mag)})"
        elif mag == 1:
            text = "*".join(factors)
        elif mag.denominator == 1:
            text = f"{mag.numerator}*" + "*".join(factors)
        else:
            text = f"({format_rat(mag)})*" + "*".join(factors)
        if idx == 0:
            pieces.append(("-" if c < 0 else "") + text)
        else:
            pieces.append((" - " if c < 0 else " + ") + text)
    return "".join(pieces)


ZERO = Form._make({})
ONE = Form._make({(0, 0, 0): Fraction(1)})
E2 = Form._make({(1, 0, 0): Fraction(1)})
E4 = Form._make({(0, 1, 0): Fraction(1)})
E6 = Form._make({(0, 0, 1): Fraction(1)})
DELTA = Form._make({(0, 3, 0): Fraction(1, 1728), (0, 0, 2): Fraction(-1, 1728)})


def modular_basis(k):
    """Monomials E4^a E6^b of weight k, largest E4-power first."""
    if k < 0 or k % 2:
        return []
    out = []
    for b in range(k // 6 + 1):
        rest = k - 6 * b
        if rest % 4 == 0:
            out.append((0, rest // 4, b))
    out.sort(key=lambda m: -m[1])
    return out


def dim_modular(k):
    return len(modular_basis(k))


def unit_monomial(w):
    """The monomial of weight w with maximal E4-power, or None if w is not realizable."""
    basis = modular_basis(w)
    if not basis:
        return None
    return Form._make({basis[0]: Fraction(1)})


# --- gcd of homogeneous modular forms -------------------------------------

def _split_homogeneous(f):
    """f = E4^a0 E6^b0 * sum_j g_j X^j Y^(J-j), X = E4^3, Y = E6^2."""
    if not f.is_modular():
        raise NotHomogeneous("gcd is implemented for modular forms only")
    w = f.weight()
    a0 = min(m[1] for m in f.terms)
    b0 = min(m[2] for m in f.terms)
    rest = w - 4 * a0 - 6 * b0
    J = rest // 12
    g = [Fraction(0)] * (J + 1)
    for (_, a, b), c in f.terms.items():
        g[(a - a0) // 3] = c
    return a0, b0, g


def _upoly_gcd(p, q):
    def trim(x):
        x = list(x)
        while x and x[-1] == 0:
            x.pop()
        return x

    p, q = trim(p), trim(q)
    while q:
        r = list(p)
        inv = 1 / q[-1]
        while len(r) >= len(q) and r:
            c = r[-1] * inv
            shift = len(r) - len(q)
            for i, qi in enumerate(q):
                r[shift + i] -= c * qi
            r = trim(r)
        p, q = q, r
    lead = p[-1]
    return [c / lead for c in p]


def form_gcd(f, g):
    """Monic-content gcd of two homogeneous modular forms (lead coefficient 1)."""
    if not f:
        return _normalize(g)
    if not g:
        return _normalize(f)
    a1, b1, p1 = _split_homogeneous(f)
    a2, b2, p2 = _split_homogeneous(g)
    u = _upoly_gcd(p1, p2)
    d = len(u) - 1
    terms = {}
    a0, b0 = min(a1, a2), min(b1, b2)
    for j, c in enumerate(u):
        if c:
            terms[(0, a0 + 3 * j, b0 + 2 * (d - j))] = c
    return _normalize(Form(terms))


def _normalize(f):
    if not f:
        return f
    return f.scale(1 / f.lead_coeff())


# --- recognition --------------------------------------------------------------

def recognize(s, k, guard=5):
    """The modular form of weight k whose q-expansion is ``s``.

    Solves for the coefficients on the monomial basis and checks every
    available coefficient of ``s``; at least ``dim + guard`` coefficients
    must be known.
    """
    basis = modular_basis(k) if Fraction(k).denominator == 1 else []
    dim = len(basis)
    if any(e.denominator != 1 for e in s.terms):
        raise NoFit("series has non-integral exponents")
    if any(e < 0 for e in s.terms):
        raise NoFit("series has a pole at the cusp")
    n = ceil(s.trunc)
    if n < dim + guard:
        raise UnderDetermined(f"need {dim + guard} coefficients, have {max(n, 0)}")
    coeffs = [s.terms.get(Fraction(i), Fraction(0)) for i in range(n)]
    if not basis:
        if any(coeffs):
            raise NoFit(f"no nonzero modular forms of weight {k}")
        return ZERO
    cols = [_mono_series(m, n) for m in basis]
    matrix = [[col[i] for col in cols] for i in range(n)]
    x = solve_rational(matrix, coeffs)
    if x is None:
        raise NoFit(f"series is not a modular form of weight {k} to O(q^{n})")
    return Form({m: c for m, c in zip(basis, x)})
