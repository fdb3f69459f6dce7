"""Truncated exact series in rational powers of q.

A :class:`QSeries` is a finitely supported map from rational exponents to
exact scalars (``Fraction`` or :class:`~mldo.scalar.Cyc`) together with an
exclusive truncation bound: the represented function equals the listed terms
plus O(q^trunc). Every operation computes the tightest bound it can justify,
so short inputs fail loudly instead of silently producing wrong coefficients.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, gcd, isqrt
import re

from .errors import (
    GridOverflow,
    InsufficientTruncation,
    NonComputablePower,
    ParseError,
    ZeroLeadingTerm,
)
from .scalar import Cyc, format_cyc, format_rat, parse_scalar, root_of_unity

DEFAULT_GRID = 48

__all__ = [
    "DEFAULT_GRID",
    "QSeries",
    "WeightedSeries",
    "apply_mldo",
    "eisenstein",
    "eta",
    "eta_power",
    "eta_variant",
    "pow_rational",
    "substitute",
    "theta_dn",
    "theta_dn_bruteforce",
    "parse_series",
]


def _lcm(a, b):
    return a * b // gcd(a, b)


def _den_lcm(values, start=1):
    g = start
    for v in values:
        g = _lcm(g, Fraction(v).denominator)
    return g


def _fits(e, grid):
    return (e * grid).denominator == 1


class QSeries:
    """Sum of ``c * q^e`` over listed exponents, plus O(q^trunc)."""

    __slots__ = ("terms", "trunc", "grid")

    def __init__(self, terms=None, trunc=None, grid=None):
        if trunc is None:
            raise ValueError("a truncation bound is required")
        trunc = Fraction(trunc)
        clean = {}
        for e, c in (terms or {}).items():
            e = Fraction(e)
            if e >= trunc:
                continue
            if isinstance(c, int):
                c = Fraction(c)
            if c:
                clean[e] = c
        if grid is None:
            grid = _den_lcm(clean)
        else:
            for e in clean:
                if not _fits(e, grid):
                    raise GridOverflow(f"exponent {e} is not a multiple of 1/{grid}")
        self.terms = clean
        self.trunc = trunc
        self.grid = grid

    @classmethod
    def _make(cls, terms, trunc, grid):
        # trusted fast path: terms already clean and below trunc
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.trunc = trunc
        obj.grid = grid
        return obj

    @classmethod
    def zero(cls, trunc, grid=1):
        return cls._make({}, Fraction(trunc), grid)

    @classmethod
    def monomial(cls, exponent, trunc, coeff=1, grid=None):
        return cls({Fraction(exponent): coeff}, trunc, grid)

    # -- inspection --------------------------------------------------------

    def is_zero(self):
        return not self.terms

    @property
    def lead(self):
        if not self.terms:
            return None
        return min(self.terms)

    @property
    def lead_coeff(self):
        if not self.terms:
            return Fraction(0)
        return self.terms[min(self.terms)]

    @property
    def valuation(self):
        """Lead exponent, or the truncation bound for a series known to be 0."""
        return min(self.terms) if self.terms else self.trunc

    def coefficient(self, e):
        e = Fraction(e)
        if e >= self.trunc:
            raise InsufficientTruncation(f"coefficient of q^{e} requested beyond O(q^{self.trunc})")
        return self.terms.get(e, Fraction(0))

    def exponents(self):
        return sorted(self.terms)

    def items(self):
        return sorted(self.terms.items())

    def truncate(self, T):
        T = Fraction(T)
        if T >= self.trunc:
            return self
        return QSeries._make({e: c for e, c in self.terms.items() if e < T}, T, self.grid)

    def vanishes_below(self, T):
        """True when the series is O(q^T); needs ``trunc >= T``."""
        T = Fraction(T)
        if self.trunc < T:
            raise InsufficientTruncation(f"series known only up to O(q^{self.trunc}), need {T}")
        return all(e >= T for e in self.terms)

    def is_rational(self):
        return all(not isinstance(c, Cyc) or c.is_rational() for c in self.terms.values())

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QSeries):
            return other
        raise TypeError(f"cannot combine QSeries with {type(other).__name__}")

    def __add__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        T = min(self.trunc, other.trunc)
        out = {e: c for e, c in self.terms.items() if e < T}
        for e, c in other.terms.items():
            if e < T:
                s = out.get(e)
                s = c if s is None else s + c
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return QSeries._make(out, T, _lcm(self.grid, other.grid))

    def __neg__(self):
        return QSeries._make({e: -c for e, c in self.terms.items()}, self.trunc, self.grid)

    def __sub__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self + (-other)

    def scale(self, c):
        if not c:
            return QSeries._make({}, self.trunc, self.grid)
        out = {}
        for e, x in self.terms.items():
            y = x * c
            if y:
                out[e] = y
        return QSeries._make(out, self.trunc, self.grid)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        if not isinstance(other, QSeries):
            return NotImplemented
        T = min(self.valuation + other.trunc, other.valuation + self.trunc)
        out = {}
        b_items = sorted(other.terms.items())
        for e1, c1 in self.terms.items():
            for e2, c2 in b_items:
                e = e1 + e2
                if e >= T:
                    break
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        out = {e: c for e, c in out.items() if c}
        return QSeries._make(out, T, _lcm(self.grid, other.grid))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Cyc)):
            return self.scale(other)
        return NotImplemented

    def shift(self, r):
        """Multiply by q^r."""
        r = Fraction(r)
        terms = {e + r: c for e, c in self.terms.items()}
        return QSeries._make(terms, self.trunc + r, _den_lcm([r], self.grid))

    def qderiv(self):
        """q d/dq, i.e. the normalized derivative f' = (2 pi i)^-1 df/dz."""
        out = {}
        for e, c in self.terms.items():
            if e:
                out[e] = c * e
        return QSeries._make(out, self.trunc, self.grid)

    def __pow__(self, p):
        return pow_rational(self, p)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.trunc == other.trunc and self.terms == other.terms

    def agrees_with(self, other, T=None):
        """Coefficient-wise equality below ``T`` (default: common truncation)."""
        bound = min(self.trunc, other.trunc)
        if T is not None:
            T = Fraction(T)
            if T > bound:
                raise InsufficientTruncation(f"cannot compare up to {T}; known to {bound}")
            bound = T
        return (self - other).truncate(bound).is_zero()

    def __repr__(self):
        return f"QSeries({format_series(self)!r})"

    def __str__(self):
        return format_series(self)


@dataclass(frozen=True)
class WeightedSeries:
    """A series together with the weight it carries as an element of H_k."""

    series: QSeries
    weight: Fraction

    def apply(self, op, T=None):
        out = apply_mldo(op, self.weight, self.series, T)
        return WeightedSeries(out, Fraction(self.weight) + op.weight())


# --- powers and substitutions --------------------------------------------

def _int_root(n, k):
    """Exact integer k-th root of n >= 0, or None."""
    if n < 0:
        return None
    r = int(round(n ** (1.0 / k))) if n < 2 ** 1000 else None
    if r is None:
        lo, hi = 0, 1 << (n.bit_length() // k + 1)
        while lo < hi:
            mid = (lo + hi) // 2
            if mid ** k < n:
                lo = mid + 1
            else:
                hi = mid
        r = lo
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == n:
            return cand
    return None


def _scalar_power(c, p):
    if c == 1:
        return Fraction(1)
    if p.denominator == 1:
        return c ** int(p)
    if isinstance(c, Cyc):
        if c.is_rational():
            c = c.to_rat()
        else:
            raise NonComputablePower(f"no canonical {p}-th power of {c}")
    c = Fraction(c)
    if c <= 0:
        raise NonComputablePower(f"no canonical {p}-th power of {c}")
    k = p.denominator
    rn, rd = _int_root(c.numerator, k), _int_root(c.denominator, k)
    if rn is None or rd is None:
        raise NonComputablePower(f"{c} has no rational {k}-th root")
    return Fraction(rn, rd) ** p.numerator


def pow_rational(f, p):
    """f^p for rational p, via the binomial normalization of the leading term.

    With f = c q^lam (1 + a_1 q^m + ...), returns c^p q^(p lam) (1 + ...)
    where the bracket is the formal binomial power. The relative precision
    of the input is preserved.
    """
    p = Fraction(p)
    if f.is_zero():
        raise ZeroLeadingTerm("cannot raise a series with no leading term to a power")
    lam = f.lead
    c0 = f.lead_coeff
    rel = {e - lam: c for e, c in f.terms.items()}
    span = f.trunc - lam
    L = _den_lcm(rel)
    M = ceil(span * L)  # indices j with j/L < span
    inv0 = 1 / c0
    u = {}
    for e, c in rel.items():
        j = int(e * L)
        if j and j < M:
            u[j] = c * inv0
    u_items = sorted(u.items())
    h = [Fraction(1)] + [Fraction(0)] * (M - 1) if M > 0 else []
    # J.C.P. Miller recurrence for (1 + sum u_j t^j)^p
    for j in range(1, M):
        s = 0
        for i, ui in u_items:
            if i > j:
                break
            hj = h[j - i]
            if hj:
                s += (p * i - (j - i)) * ui * hj
        h[j] = s / j if s else Fraction(0)
    lead_c = _scalar_power(c0, p)
    new_lead = p * lam
    terms = {}
    for j, hj in enumerate(h):
        if hj:
            terms[new_lead + Fraction(j, L)] = hj * lead_c
    grid = _den_lcm([new_lead], _lcm(f.grid, L))
    return QSeries._make(terms, new_lead + span, grid)


def substitute(f, m, alpha=0, strip_phase=False, grid=None):
    """Substitute q -> e(alpha) q^m, i.e. z -> m z + alpha.

    Each term c q^e becomes c e(alpha e) q^(m e). With ``strip_phase`` the
    global factor e(alpha * lead) is dropped so the new leading coefficient
    equals the old one.
    """
    m = Fraction(m)
    alpha = Fraction(alpha)
    if m <= 0:
        raise ValueError("substitution scale must be positive")
    base = f.lead if (strip_phase and not f.is_zero()) else Fraction(0)
    phases = {e: alpha * (e - base) for e in f.terms}
    order = 1
    for a in phases.values():
        d = a.denominator
        if d > 2:
            order = _lcm(order, d)
    out = {}
    for e, c in f.terms.items():
        a = phases[e]
        if a.denominator == 1:
            ph = 1
        elif a.denominator == 2:
            ph = -1
        else:
            ph = root_of_unity(order, int(a * order))
        out[m * e] = c * ph
    T = m * f.trunc
    if grid is not None:
        for e in out:
            if not _fits(e, grid):
                raise GridOverflow(f"exponent {e} leaves the grid 1/{grid}")
        return QSeries._make(out, T, grid)
    return QSeries._make(out, T, _den_lcm(out, 1))


# --- generators -----------------------------------------------------------

def _euler_product_exponents(T):
    """Pentagonal-number expansion of prod (1 - q^n) below q^T."""
    out = {}
    k = 0
    while True:
        hit = False
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < T:
                out[Fraction(e)] = Fraction(-1 if kk % 2 else 1)
                hit = True
        if not hit:
            break
        k += 1
    return out


def eta(T, grid=DEFAULT_GRID):
    """Dedekind eta q^(1/24) prod(1 - q^n), truncated at q^T."""
    T = Fraction(T)
    if T <= Fraction(1, 24):
        raise InsufficientTruncation("eta needs T > 1/24")
    shift = Fraction(1, 24)
    prod = _euler_product_exponents(T - shift)
    return QSeries({e + shift: c for e, c in prod.items()}, T, grid)


def eta_power(p, T, grid=DEFAULT_GRID):
    """eta(z)^p to O(q^T)."""
    p = Fraction(p)
    lam = Fraction(1, 24)
    # relative precision is preserved by pow_rational
    base_T = T - p * lam + lam
    base_T = max(base_T, lam + Fraction(1, grid))
    out = pow_rational(eta(base_T, grid), p)
    return out.truncate(T)


_ETA_VARIANTS = {
    # name: (scale m, shift alpha) for eta(m z + alpha) = eta at q -> e(alpha) q^m
    "eta": (Fraction(1), Fraction(0)),
    "eta2z": (Fraction(2), Fraction(0)),
    "etahalf": (Fraction(1, 2), Fraction(0)),
    "etahalfshift": (Fraction(1, 2), Fraction(1, 2)),
    "eta3z": (Fraction(3), Fraction(0)),
    "etathird": (Fraction(1, 3), Fraction(0)),
    "etathirdshift1": (Fraction(1, 3), Fraction(1, 3)),
    "etathirdshift2": (Fraction(1, 3), Fraction(2, 3)),
}


def eta_variant(name, p, T, grid=DEFAULT_GRID, strip_phase=True):
    """eta^p(m z + alpha) for the named substitution, to O(q^T).

    Names: eta, eta2z, etahalf, etahalfshift, eta3z, etathird,
    etathirdshift1, etathirdshift2. The shifted variants carry the global
    phase e(alpha p / 24) unless ``strip_phase`` drops it.
    """
    try:
        m, alpha = _ETA_VARIANTS[name]
    except KeyError:
        raise ValueError(f"unknown eta variant {name!r}") from None
    base = eta_power(p, Fraction(T) / m, grid=_lcm(grid, 24 * m.denominator))
    return substitute(base, m, alpha, strip_phase=strip_phase)


def _sigma(n, r):
    s = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            s += d ** r
            if d * d != n:
                s += (n // d) ** r
        d += 1
    return s


_EIS_FACTOR = {2: -24, 4: 240, 6: -504}


@lru_cache(maxsize=64)
def eisenstein_coeffs(k, n):
    """First ``n`` q-coefficients of E_k (k in 2, 4, 6) as integers."""
    if k not in _EIS_FACTOR:
        raise ValueError("only E2, E4 and E6 are generated")
    f = _EIS_FACTOR[k]
    return tuple([1] + [f * _sigma(m, k - 1) for m in range(1, n)])


def eisenstein(k, T):
    """E_k to O(q^T) with the divisor-sum normalization."""
    T = Fraction(T)
    n = max(ceil(T), 0)
    coeffs = eisenstein_coeffs(k, n)
    return QSeries._make(
        {Fraction(i): Fraction(c) for i, c in enumerate(coeffs) if c}, Fraction(n), 1
    )


COSETS = ("0", "s", "t", "s+t")


def _coset_shift(n, coset):
    """Twice the coset representative p, as integer coordinates."""
    if coset == "0":
        return [0] * n
    if coset == "s":
        return [2] + [0] * (n - 1)
    if coset == "t":
        return [1] * n
    if coset == "s+t":
        return [3] + [1] * (n - 1)
    raise ValueError(f"coset must be one of {COSETS}")


def theta_dn(n, coset, T):
    """Theta series of p + D_n, D_n = {x in Z^n : sum x even}.

    The count of lattice points per norm is exact; it is accumulated one
    coordinate at a time over states (sum of squares, parity of sum x).
    For n = 1, 2 this is 2Z and the rotated sqrt(2)Z + sqrt(2)Z.
    """
    if n < 1:
        raise ValueError("n must be positive")
    T = Fraction(T)
    shift = _coset_shift(n, coset)
    # w = 2(x + p) integral; exponent (x+p,x+p)/2 = sum(w^2) / 8
    bound = T * 8  # need sum w^2 < bound
    states = {(0, 0): 1}
    for s in shift:
        wmax = isqrt(max(int(ceil(bound)), 0)) + 1
        choices = []
        for w in range(-wmax, wmax + 1):
            if (w - s) % 2:
                continue
            if w * w >= bound:
                continue
            x = (w - s) // 2
            choices.append((w * w, x % 2))
        nxt = {}
        for (sq, par), cnt in states.items():
            for w2, xp in choices:
                t = sq + w2
                if t < bound:
                    key = (t, par ^ xp)
                    nxt[key] = nxt.get(key, 0) + cnt
        states = nxt
    terms = {}
    for (sq, par), cnt in states.items():
        if par == 0:
            e = Fraction(sq, 8)
            terms[e] = terms.get(e, 0) + cnt
    return QSeries({e: Fraction(c) for e, c in terms.items()}, T, 8)


def theta_dn_bruteforce(n, coset, T):
    """Direct enumeration over the integer box; for cross-checking only."""
    from itertools import product

    T = Fraction(T)
    shift = _coset_shift(n, coset)
    r = isqrt(int(8 * T)) + 2
    terms = {}
    for x in product(range(-r, r + 1), repeat=n):
        if sum(x) % 2:
            continue
        sq = sum((2 * xi + si) ** 2 for xi, si in zip(x, shift))
        e = Fraction(sq, 8)
        if e < T:
            terms[e] = terms.get(e, 0) + 1
    return QSeries({e: Fraction(c) for e, c in terms.items()}, T, 8)


# --- operators acting on series -------------------------------------------

def apply_mldo(a, k, f, T=None):
    """Apply ``a = sum a_i delta^i`` at weight ``k``: sum a_i D_k^i f.

    ``a`` is anything with a ``coeffs`` sequence of forms providing
    ``qexp(T)``. The result is exact below ``T`` (default ``f.trunc``).
    """
    k = Fraction(k)
    if T is None:
        T = f.trunc
    T = Fraction(T)
    if f.trunc < T:
        raise InsufficientTruncation(f"input known to O(q^{f.trunc}), output requested to {T}")
    g = f.truncate(T)
    if getattr(a, "is_zero", lambda: False)():
        return QSeries.zero(T, f.grid)
    span = T - g.valuation
    E2 = eisenstein(2, span) if span > 0 else QSeries.zero(0, 1)
    out = QSeries.zero(T, f.grid)
    coeffs = list(a.coeffs)
    for i, coef in enumerate(coeffs):
        if coef:
            vg = g.valuation
            if vg < T:
                out = out + coef.qexp(T - vg) * g
        if i + 1 < len(coeffs):
            g = g.qderiv() - (E2 * g).scale((k + 2 * i) / 12)
            g = g.truncate(T)
    return out.truncate(T)


# --- text form --------------------------------------------------------------

def _format_exp(e):
    return f"q^({format_rat(e)})"


def format_series(s):
    parts = []
    for e, c in s.items():
        if isinstance(c, Cyc) and not c.is_rational():
            text = f"({format_cyc(c)}) * {_format_exp(e)}"
            sign = "+"
        else:
            c = c.to_rat() if isinstance(c, Cyc) else c
            sign = "-" if c < 0 else "+"
            text = f"{format_rat(abs(c))} * {_format_exp(e)}"
        if not parts:
            parts.append(("-" if sign == "-" else "") + text)
        else:
            parts.append(f" {sign} {text}")
    tail = f"O(q^({format_rat(s.trunc)}))"
    if parts:
        return "".join(parts) + " + " + tail
    return tail


_SERIES_TERM = re.compile(
    r"\s*([+-])?\s*(\((?:[^()]|\([^()]*\))*\)|\d+(?:/\d+)?)\s*\*\s*q\^\(\s*(-?\d+(?:/\d+)?)\s*\)"
)
_SERIES_TAIL = re.compile(r"\s*\+\s*O\(\s*q\^\(\s*(-?\d+(?:/\d+)?)\s*\)\s*\)\s*$|\s*O\(\s*q\^\(\s*(-?\d+(?:/\d+)?)\s*\)\s*\)\s*$")


def parse_series(text, grid=None):
    """Parse the output of ``str(QSeries)``."""
    pos = 0
    terms = {}
    while True:
        tail = _SERIES_TAIL.match(text, pos)
        if tail:
            T = Fraction(tail.group(1) or tail.group(2))
            return QSeries(terms, T, grid)
        m = _SERIES_TERM.match(text, pos)
        if not m:
            raise ParseError("expected 'c * q^(e)' term or O(q^(T)) tail", pos)
        sign = -1 if m.group(1) == "-" else 1
        raw = m.group(2)
        if raw.startswith("("):
            c = parse_scalar(raw[1:-1])
        else:
            c = Fraction(raw)
        e = Fraction(m.group(3))
        terms[e] = terms.get(e, 0) + c * sign
        pos = m.end()
