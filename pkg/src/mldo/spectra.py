"""Characteristic polynomials and operators with prescribed roots.

For a = sum a_i delta^i acting at weight k, the indicial polynomial is
F(k, a, x) = sum a_i(inf) P_i(x) with P_i(x) = prod_{j<i} (x - (k + 2j)/12):
a[k] q^x = F(k, a, x) q^x + (higher powers of q).
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .errors import (
    EmptyIntersection,
    NotDivisible,
    PreconditionViolated,
    RootSumMismatch,
    WeightBoundViolated,
    WeightNotRealizable,
)
from .modform import Form, unit_monomial
from .operators import Mldo, divide_monic_right, exact_div
from .scalar import format_rat

__all__ = [
    "CharData",
    "charpoly",
    "root_sum_check",
    "construct_quasimonic",
    "construct_monic",
    "map_solution_space",
    "MapResult",
    "necessity_check",
    "basis_poly",
    "multiset_intersection",
]

LAMBDA = "λ"


# --- dense polynomials over Q, lowest degree first ---------------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _trim([x * c for x in a])


def _peval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _deflate(p, r):
    """p / (x - r) for a root r, by synthetic division."""
    n = len(p) - 1
    out = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + p[i]
        out[i - 1] = acc
    return out


def basis_poly(k, i):
    """P_i(x) = prod_{j<i} (x - (k+2j)/12)."""
    k = Fraction(k)
    p = [Fraction(1)]
    for j in range(i):
        p = _pmul(p, [-(k + 2 * j) / 12, Fraction(1)])
    return p


def _divisors(n):
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _height_key(r):
    return (r.denominator, abs(r.numerator), r < 0)


def _rational_roots(p):
    """Rational roots with multiplicity, plus the remaining factor."""
    p = _trim(p)
    roots = []
    # zero roots first
    while p and p[0] == 0:
        roots.append(Fraction(0))
        p = p[1:]
    if len(p) <= 1:
        return roots, p
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    cands = set()
    for num in _divisors(ints[0]):
        for d in _divisors(ints[-1]):
            cands.add(Fraction(num, d))
            cands.add(Fraction(-num, d))
    for r in sorted(cands, key=_height_key):
        while len(p) > 1 and _peval(p, r) == 0:
            roots.append(r)
            p = _deflate(p, r)
    return roots, p


@dataclass
class CharData:
    """F(k, a, x) = lead * prod(x - r) * residual, with residual monic."""

    poly: list
    rational_roots: list
    residual: list
    lead: Fraction
    is_zero: bool
    k: Fraction = field(default=Fraction(0))

    @property
    def degree(self):
        return len(self.poly) - 1 if self.poly else None

    def roots_multiset(self):
        return Counter(self.rational_roots)

    def sorted_roots(self):
        return sorted(self.rational_roots)

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        if self.lead != 1:
            lead = format_rat(self.lead)
            parts.append(f"({lead})" if "/" in lead or self.lead < 0 else lead)
        counts = Counter(self.rational_roots)
        seen = []
        for r in self.rational_roots:
            if r not in seen:
                seen.append(r)
        for r in seen:
            if r == 0:
                base = LAMBDA
                if counts[r] > 1:
                    base = f"{LAMBDA}^{counts[r]}"
                parts.append(base)
                continue
            sign = "-" if r > 0 else "+"
            base = f"({LAMBDA} {sign} {format_rat(abs(r))})"
            if counts[r] > 1:
                base += f"^{counts[r]}"
            parts.append(base)
        if len(self.residual) > 1:
            parts.append(f"({format_poly(self.residual)})")
        if not parts:
            return "1"
        return "".join(parts)


def format_poly(p, var=LAMBDA):
    terms = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if not c:
            continue
        mag = abs(c)
        if i == 0:
            body = format_rat(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"({format_rat(mag)})*{mono}"
        if not terms:
            terms.append(("-" if c < 0 else "") + body)
        else:
            terms.append((" - " if c < 0 else " + ") + body)
    return "".join(terms) or "0"


def charpoly(k, a):
    """Characteristic data of ``a`` acting at weight ``k``."""
    k = Fraction(k)
    poly = []
    for i, c in enumerate(a.coeffs):
        v = c.eval_inf()
        if v:
            poly = _padd(poly, _pscale(basis_poly(k, i), v))
    if not poly:
        return CharData([], [], [], Fraction(0), True, k)
    lead = poly[-1]
    monic = [c / lead for c in poly]
    roots, residual = _rational_roots(monic)
    return CharData(poly, roots, residual, lead, False, k)


def multiset_intersection(xs, ys):
    common = Counter(xs) & Counter(ys)
    return sorted(common.elements())


def root_sum_check(k, a):
    """Monic a of order n and weight 2n: do the roots sum to n(k+n-1)/12?"""
    k = Fraction(k)
    if not a.is_monic():
        raise PreconditionViolated("operator is not monic")
    n = a.ord()
    if a.weight() != 2 * n:
        raise PreconditionViolated(f"weight {a.weight()} != 2 * order {2 * n}")
    cd = charpoly(k, a)
    total = -cd.poly[n - 1] if n >= 1 else Fraction(0)
    return total == Fraction(n) * (k + n - 1) / 12


def construct_quasimonic(k, roots, l):
    """Quasimonic operator of weight l and order n = len(roots) with ch = roots.

    The coefficient of delta^i is x_i u_i, with u_i the weight l - 2i monomial
    of largest E4-power; the x_i come from expanding prod(x - r) in the basis
    P_0, ..., P_n.
    """
    k = Fraction(k)
    roots = [Fraction(r) for r in roots]
    n = len(roots)
    target = [Fraction(1)]
    for r in roots:
        target = _pmul(target, [-r, Fraction(1)])
    xs = [Fraction(0)] * (n + 1)
    rest = target
    for i in range(n, -1, -1):
        x = rest[i] if i < len(rest) else Fraction(0)
        xs[i] = x
        if x:
            rest = _padd(rest, _pscale(basis_poly(k, i), -x))
    coeffs = []
    for i, x in enumerate(xs):
        if not x:
            coeffs.append(Form())
            continue
        u = unit_monomial(l - 2 * i)
        if u is None:
            raise WeightNotRealizable(f"no modular form of weight {l - 2 * i} with value 1 at the cusp")
        coeffs.append(u.scale(x))
    return Mldo(coeffs)


def construct_monic(k, roots):
    """Monic operator of weight 2n with the prescribed characteristic roots."""
    k = Fraction(k)
    roots = [Fraction(r) for r in roots]
    n = len(roots)
    want = Fraction(n) * (k + n - 1) / 12
    if sum(roots, Fraction(0)) != want:
        raise RootSumMismatch(f"roots sum to {sum(roots, Fraction(0))}, need {want}")
    return construct_quasimonic(k, roots, 2 * n)


@dataclass
class MapResult:
    c: Mldo
    d: Mldo
    lam_star: Fraction
    common: list
    remainder: Mldo
    remainder_in_Z: bool
    forced: bool = False

    @property
    def ok(self):
        return not self.remainder.coeffs


def map_solution_space(k, a, b, N, force=False):
    """Monic c of order n - N + 1 with c*b = d*a, following the constructive proof.

    ``a`` is monic of order n and weight 2n, ``b`` quasimonic of weight l.
    The N smallest common characteristic roots are dropped from ch(k, a);
    the remaining roots plus one root fixed by the sum rule give c at
    weight k + l.
    """
    k = Fraction(k)
    if not a.is_monic():
        raise PreconditionViolated("a must be monic")
    n = a.ord()
    if a.weight() != 2 * n:
        raise PreconditionViolated("a must have weight twice its order")
    if not b.is_quasimonic():
        raise PreconditionViolated("b must be quasimonic")
    l = b.weight()
    if N < 1:
        raise PreconditionViolated("N must be at least 1")
    ch_a = charpoly(k, a).rational_roots
    ch_b = charpoly(k, b).rational_roots
    common = multiset_intersection(ch_a, ch_b)
    if len(common) < N:
        raise EmptyIntersection(f"only {len(common)} common characteristic roots, need {N}")
    if l + 2 * n - 2 * N > 8 and not force:
        raise WeightBoundViolated(f"l + 2n - 2N = {l + 2 * n - 2 * N} exceeds 8")
    dropped = Counter(common[:N])
    remaining = []
    for r in sorted(ch_a):
        if dropped[r]:
            dropped[r] -= 1
        else:
            remaining.append(r)
    order = n - N + 1
    kc = k + l
    lam_star = Fraction(order) * (kc + order - 1) / 12 - sum(remaining, Fraction(0))
    c = construct_monic(kc, [lam_star] + remaining)
    cb = c * b
    _, rem = divide_monic_right(cb, a)
    if rem.coeffs:
        if not force:
            raise NotDivisible("c*b is not right-divisible by a")
        return MapResult(c, Mldo(), lam_star, common[:N], rem, rem.in_Z(), True)
    d = exact_div(cb, a, "right")
    return MapResult(c, d, lam_star, common[:N], rem, True, force)


def necessity_check(k, a, b, c):
    """If c*b is right-divisible by a, return ch(k, a) ∩ ch(k, b) (nonempty)."""
    exact_div(c * b, a, "right")
    inter = multiset_intersection(charpoly(k, a).rational_roots, charpoly(k, b).rational_roots)
    if not inter:
        raise PreconditionViolated("divisible but no common rational root; roots may be irrational")
    return inter
