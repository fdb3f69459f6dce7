"""Annihilator search, Frobenius solutions and Wronskian reconstruction.

Monic annihilators of quasimodular forms are found exactly: the iterated
Serre derivatives of the target live in Q[E2, E4, E6], so for a fixed order
the unknown modular coefficients enter a finite linear system over Q.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import ceil, floor

from .errors import (
    ExponentsNotDistinct,
    InsufficientTruncation,
    IrrationalRoots,
    NoFit,
    NotHomogeneous,
    RecognitionFailed,
    RepeatedRoots,
    ResonantRoots,
)
from .linalg import solve_rational
from .modform import E2, ZERO, Form, modular_basis, recognize
from .operators import Mldo, divide_monic_right
from .qseries import QSeries, eisenstein, eta_power
from .spectra import charpoly

__all__ = [
    "AnnihilatorCertificate",
    "AboveCap",
    "monic_annihilator",
    "mord",
    "dwt",
    "frobenius_solve",
    "kernel_containment",
    "mason_mlde",
    "MasonResult",
    "wronskian",
]


@dataclass
class AnnihilatorCertificate:
    operator: Mldo
    weight: Fraction
    order: int
    residual_check: bool

    def record(self):
        return {
            "weight": str(self.weight),
            "order": self.order,
            "operator": str(self.operator),
            "verified": self.residual_check,
        }

    def __str__(self):
        flag = "exact" if self.residual_check else "FAILED"
        return f"weight={self.weight} order={self.order} operator={self.operator} verified={flag}"


class AboveCap:
    """Marker result: no monic annihilator up to ``cap``."""

    def __init__(self, cap):
        self.cap = cap

    def __repr__(self):
        return f"AboveCap({self.cap})"

    def __str__(self):
        return f">{self.cap}"

    def __eq__(self, other):
        return isinstance(other, AboveCap) and other.cap == self.cap

    def __hash__(self):
        return hash(("AboveCap", self.cap))


def _serre_chain(phi, k, n):
    """[phi, D_k phi, ..., D^n_k phi] as exact quasimodular forms."""
    k = Fraction(k)
    out = [phi]
    g = phi
    for t in range(n):
        g = g.derive() - (E2 * g).scale((k + 2 * t) / 12)
        out.append(g)
    return out


def monic_annihilator(phi, k, n, chain=None):
    """First monic delta^n + sum_{i>=2} g_i delta^(n-i), g_i of weight 2i, killing (phi, k).

    Returns an :class:`AnnihilatorCertificate` or None when no operator of
    this shape exists.
    """
    if not isinstance(phi, Form):
        phi = Form.const(phi)
    k = Fraction(k)
    if chain is None:
        chain = _serre_chain(phi, k, n)
    target = chain[n]
    unknowns = []
    for i in range(2, n + 1):
        for m in modular_basis(2 * i):
            unknowns.append((i, m, Form({m: 1}) * chain[n - i]))
    if not target and not unknowns:
        op = Mldo.delta(n)
        return AnnihilatorCertificate(op, k, n, not op.apply_form(k, phi))
    keys = set(target.terms)
    for _, _, col in unknowns:
        keys.update(col.terms)
    keys = sorted(keys)
    if not unknowns:
        return None if target else AnnihilatorCertificate(Mldo.delta(n), k, n, True)
    matrix = [[col.terms.get(key, Fraction(0)) for _, _, col in unknowns] for key in keys]
    rhs = [-target.terms.get(key, Fraction(0)) for key in keys]
    sol = solve_rational(matrix, rhs)
    if sol is None:
        return None
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = Form.const(1)
    for (i, m, _), x in zip(unknowns, sol):
        if x:
            coeffs[n - i] = coeffs[n - i] + Form({m: x})
    op = Mldo(coeffs)
    return AnnihilatorCertificate(op, k, n, not op.apply_form(k, phi))


def mord(phi, k, cap=10):
    """Least order of a monic annihilator of (phi, k), or AboveCap(cap)."""
    if not isinstance(phi, Form):
        phi = Form.const(phi)
    if not phi:
        return 0
    chain = _serre_chain(phi, k, cap)
    for n in range(1, cap + 1):
        if monic_annihilator(phi, k, n, chain[: n + 1]) is not None:
            return n
    return AboveCap(cap)


def mord_witness(phi, k, cap=10):
    chain = _serre_chain(phi, k, cap)
    for n in range(1, cap + 1):
        cert = monic_annihilator(phi, k, n, chain[: n + 1])
        if cert is not None:
            return cert
    return None


@dataclass
class DwtResult:
    value: int
    witness: AnnihilatorCertificate
    note: str = "value is weight minus depth; only the witness is searched"


def dwt(phi, cap=10):
    """Weight minus depth, with a monic annihilator at that weight as witness."""
    if not phi:
        raise NotHomogeneous("the zero form has no depth")
    w = phi.weight()
    s = phi.depth()
    value = w - s
    cert = mord_witness(phi, value, cap)
    return DwtResult(value, cert)


# --- Frobenius method ---------------------------------------------------------

def _poly_mul_x(p):
    return [Fraction(0)] + list(p)


def _poly_add(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_scale(a, c):
    return [x * c for x in a]


def _poly_eval(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _indicial_series(a, k, M):
    """R_r(x) with a[k] q^x = q^x sum_r R_r(x) q^r, for r < M; R_r as polys in x."""
    k = Fraction(k)
    e2 = [eisenstein(2, M).terms.get(Fraction(i), Fraction(0)) for i in range(M)]
    # S holds the current D^i_k q^x / q^x as a list of polynomials
    S = [[Fraction(1)]] + [[] for _ in range(M - 1)]
    out = [[] for _ in range(M)]
    coeffs = list(a.coeffs)
    for i, c in enumerate(coeffs):
        if c:
            cs = c.qexp(M)
            cv = [cs.terms.get(Fraction(r), Fraction(0)) for r in range(M)]
            for r in range(M):
                acc = out[r]
                for s in range(r + 1):
                    if cv[r - s] and S[s]:
                        acc = _poly_add(acc, _poly_scale(S[s], cv[r - s]))
                out[r] = acc
        if i + 1 < len(coeffs):
            w = (k + 2 * i) / 12
            nxt = []
            for r in range(M):
                # (x + r) S_r - w * (E2 * S)_r
                term = _poly_add(_poly_mul_x(S[r]), _poly_scale(S[r], r))
                for s in range(r + 1):
                    if e2[r - s] and S[s]:
                        term = _poly_add(term, _poly_scale(S[s], -w * e2[r - s]))
                nxt.append(term)
            S = nxt
    return out


def frobenius_solve(a, k, T):
    """One series q^r (1 + ...) per characteristic root r, valid to O(q^T)."""
    k = Fraction(k)
    T = Fraction(T)
    cd = charpoly(k, a)
    n = a.ord()
    if cd.is_zero or len(cd.residual) > 1:
        raise IrrationalRoots("characteristic polynomial has non-rational roots")
    roots = cd.rational_roots
    if len(set(roots)) < len(roots):
        raise RepeatedRoots(f"repeated characteristic roots {sorted(roots)}")
    for r in roots:
        for s in roots:
            d = r - s
            if d > 0 and d.denominator == 1:
                raise ResonantRoots(f"roots {s} and {r} differ by a positive integer")
    if len(roots) != n:
        raise IrrationalRoots("fewer rational roots than the order")
    out = []
    lo = min(roots)
    M = max(ceil(T - lo), 1)
    R = _indicial_series(a, k, M)
    for lam in sorted(roots):
        Ml = max(ceil(T - lam), 1)
        c = [Fraction(1)] + [Fraction(0)] * (Ml - 1)
        for m in range(1, Ml):
            s = Fraction(0)
            for mp in range(m):
                if c[mp]:
                    s += c[mp] * _poly_eval(R[m - mp], lam + mp)
            c[m] = -s / _poly_eval(R[0], lam + m)
        terms = {lam + i: x for i, x in enumerate(c) if x}
        out.append(QSeries(terms, lam + Ml))
    return out


def kernel_containment(a, b, k=None, T=None):
    """ker a[k] ⊂ ker b[k], decided by right divisibility (a monic).

    When ``k`` and ``T`` are given and a has a Frobenius basis, the answer is
    cross-checked on that basis; a disagreement raises AssertionError.
    """
    _, rem = divide_monic_right(b, a)
    answer = not rem.coeffs
    if k is not None and T is not None:
        try:
            sols = frobenius_solve(a, k, T)
        except (IrrationalRoots, RepeatedRoots, ResonantRoots):
            sols = None
        if sols is not None:
            numeric = all(b.apply(k, f, T).vanishes_below(T) for f in sols)
            if numeric != answer:
                raise AssertionError("algebraic and series containment disagree")
    return answer


# --- Wronskian reconstruction --------------------------------------------------

def _det(rows):
    n = len(rows)
    if n == 0:
        return None
    total = None
    for perm in permutations(range(n)):
        sign = 1
        p = list(perm)
        for i in range(n):
            while p[i] != i:
                j = p[i]
                p[i], p[j] = p[j], p[i]
                sign = -sign
        term = None
        for i in range(n):
            x = rows[i][perm[i]]
            term = x if term is None else term * x
        if sign < 0:
            term = -term
        total = term if total is None else total + term
    return total


def wronskian(series, k, T=None):
    """Columns D^j_k F for j = 0..n, one row per series."""
    n = len(series)
    cols = []
    for f in series:
        row = [f]
        g = f
        for j in range(n):
            g = _serre_series(g, Fraction(k) + 2 * j)
            row.append(g)
        cols.append(row)
    return cols


def _serre_series(f, k):
    span = f.trunc - f.valuation
    e2 = eisenstein(2, span)
    return f.qderiv() - (e2 * f).scale(Fraction(k) / 12)


@dataclass
class MasonResult:
    inequality_ok: bool
    exponent_sum: Fraction
    bound: Fraction
    monic: object = None
    multiplier_exponent: object = None
    coefficients: list = field(default_factory=list)

    @property
    def operator(self):
        return self.monic if self.monic is not None else Mldo(self.coefficients)


def mason_mlde(series, k, guard=5):
    """Reconstruct the order-n MLDE satisfied by ``series`` from Wronskians."""
    k = Fraction(k)
    n = len(series)
    if n == 0:
        raise ExponentsNotDistinct("need at least one series")
    leads = []
    for f in series:
        if f.is_zero():
            raise ExponentsNotDistinct("a zero series has no leading exponent")
        leads.append(f.lead)
    if len(set(leads)) != n:
        raise ExponentsNotDistinct(f"leading exponents {leads} are not distinct")
    lam = sum(leads, Fraction(0))
    l = n * (k + n - 1)
    ok = l >= 12 * lam
    rows = wronskian(series, k)
    minors = []
    for j in range(n + 1):
        sub = [[row[t] for t in range(n + 1) if t != j] for row in rows]
        minors.append(_det(sub))
    W = minors[n]
    if W.is_zero():
        raise InsufficientTruncation("Wronskian vanishes to the available precision")
    equality = l == 12 * lam
    if equality:
        extra = Fraction(0)
        mult = None
    else:
        diff = lam - l / 12
        frac = diff - floor(diff)
        i = 12 * frac
        N = ceil(i / 12 - lam + l / 12)
        extra = 24 * N - 2 * i
        mult = extra
    power = extra - 2 * l
    forms = []
    for j in range(n + 1):
        w = minors[j]
        need = w.trunc - w.valuation + power / 24
        scale = eta_power(power, max(need, power / 24 + 1))
        s = w * scale
        weight = extra / 2 + 2 * n - 2 * j
        if weight.denominator != 1:
            raise RecognitionFailed(f"weight {weight} is not an integer")
        try:
            forms.append(recognize(s, int(weight), guard))
        except NoFit as exc:
            raise RecognitionFailed(str(exc)) from None
    if equality:
        c = forms[n]
        if not c.is_constant() or not c:
            raise RecognitionFailed("normalized Wronskian is not a nonzero constant")
        c = c.constant_value()
        coeffs = [forms[j].scale(Fraction((-1) ** (n - j)) / c) for j in range(n)] + [Form.const(1)]
        return MasonResult(ok, lam, l / 12, Mldo(coeffs), None, coeffs)
    coeffs = [forms[j].scale((-1) ** j) for j in range(n + 1)]
    return MasonResult(ok, lam, l / 12, None, mult, coeffs)
