"""Named operator families and the end-to-end verification suite."""

from dataclasses import dataclass, field
from fractions import Fraction
import time

from .annihilate import frobenius_solve, mason_mlde, monic_annihilator, mord
from .errors import UnsupportedWeight
from .modform import DELTA, E2, E4, E6, ONE, Form
from .operators import Mldo, exact_div
from .qseries import eta_power, eta_variant, theta_dn, COSETS
from .scalar import e_of
from .spectra import charpoly, construct_monic, map_solution_space

__all__ = [
    "phi_p",
    "psi_p",
    "kaneko_zagier",
    "dn_operator",
    "e2_qm_operator",
    "e2_qm_identity",
    "verify_suite",
    "VerificationReport",
    "Entry",
]


def phi_p(p):
    """delta^3 - (3p^2-24p+128)/2304 e4 delta - p^2(p-24)/55296 e6."""
    p = Fraction(p)
    return Mldo([
        E6.scale(-p * p * (p - 24) / 55296),
        E4.scale(-(3 * p * p - 24 * p + 128) / 2304),
        0,
        1,
    ])


def psi_p(p, alt_quadratic=False):
    """The order-4 operator killing eta^p at z -> 3z, z/3, (z+1)/3, (z+2)/3.

    The e6*delta coefficient is -(p^3 - 18p^2 + 45p - 81)/5832; this is the
    value forced by the characteristic roots p/8, p/72, p/72 + 1/3,
    p/72 + 2/3 and it annihilates the four series. ``alt_quadratic=True``
    gives the variant with -12p^2 in place of -18p^2, which does not.
    """
    p = Fraction(p)
    quad = 12 if alt_quadratic else 18
    return Mldo([
        (E4 * E4).scale(-p * p * (p * p - 36 * p + 288) / 559872),
        E6.scale(-(p ** 3 - quad * p * p + 45 * p - 81) / 5832),
        E4.scale(-(p * p - 6 * p + 18) / 216),
        0,
        1,
    ])


def kaneko_zagier(k):
    """delta^2 - k(k+2)/144 e4 for k in 4, 6, 10."""
    if k not in (4, 6, 10):
        raise UnsupportedWeight(f"Kaneko-Zagier operator is provided for k in 4, 6, 10, not {k}")
    return Mldo([E4.scale(Fraction(-k * (k + 2), 144)), 0, 1])


def dn_operator(n):
    """delta^3 - (3n^2-12n+32)/576 e4 delta - n^2(n-12)/6912 e6."""
    if n < 1:
        raise ValueError("n must be positive")
    n = Fraction(n)
    return Mldo([
        E6.scale(-n * n * (n - 12) / 6912),
        E4.scale(-(3 * n * n - 12 * n + 32) / 576),
        0,
        1,
    ])


def e2_qm_operator(x, y):
    """Two-parameter quasimodular-coefficient operator annihilating (E2, 2)."""
    x, y = Fraction(x), Fraction(y)
    a0 = (E2 ** 3).scale((1 - 4 * x + 24 * y) / 288) + (E2 * E4).scale((-3 - 4 * x + 24 * y) / 288) + E6.scale(
        (1 - 6 * x) / 216
    )
    a1 = (E2 * E2).scale(y) - E4.scale(Fraction(13, 72))
    a2 = E2.scale(x)
    return Mldo([a0, a1, a2, 1])


def e2_qm_identity(x, y):
    """True when the operator kills E2 at weight 2 as an identity in Q[E2, E4, E6]."""
    return not e2_qm_operator(x, y).apply_form(2, E2)


# --- verification suite --------------------------------------------------------

@dataclass
class Entry:
    name: str
    status: str
    detail: str = ""
    seconds: float = 0.0

    def record(self):
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class VerificationReport:
    entries: list = field(default_factory=list)

    @property
    def all_pass(self):
        return all(e.status == "pass" for e in self.entries)

    def failed(self):
        return [e for e in self.entries if e.status != "pass"]

    def to_text(self):
        lines = [f"{e.status.upper():4}  {e.name}" + (f"  ({e.detail})" if e.detail else "") for e in self.entries]
        n_pass = sum(e.status == "pass" for e in self.entries)
        lines.append(f"{n_pass}/{len(self.entries)} passed")
        return "\n".join(lines)

    def to_records(self):
        return [e.record() for e in self.entries]

    def __str__(self):
        return self.to_text()


def _vanishes(op, k, s, T):
    out = op.apply(k, s, T)
    if out.vanishes_below(T):
        return True, ""
    return False, f"first nonzero term at q^{out.lead}"


def _phi_series(p, T):
    return [
        ("eta^p(2z)", eta_variant("eta2z", p, T)),
        ("eta^p(z/2)", eta_variant("etahalf", p, T)),
        ("eta^p((z+1)/2)", eta_variant("etahalfshift", p, T, strip_phase=True)),
    ]


def _suite_entries(T, phi_factory):
    T = Fraction(T)
    checks = []

    def add(name):
        def deco(fn):
            checks.append((name, fn))
            return fn

        return deco

    forms = [E4, E6, E4 * E6, DELTA, E4 ** 2, E2, E2 * E4]

    @add("ramanujan identities vs q-expansion")
    def _():
        for g in (E2, E4, E6):
            lhs = g.derive().qexp(T)
            rhs = g.qexp(T).qderiv()
            if not lhs.agrees_with(rhs):
                return False, f"{g}' mismatch"
        return True, ""

    @add("leibniz rule for the Serre derivative")
    def _():
        for f in forms:
            for g in forms:
                k, l = f.weight(), g.weight()
                lhs = (f * g).serre_d(k + l)
                rhs = f.serre_d(k) * g + f * g.serre_d(l)
                if lhs != rhs:
                    return False, f"fails for {f}, {g}"
        return True, ""

    @add("commutation relations")
    def _():
        d = Mldo.delta()
        e4, e6, e2 = Mldo.scalar(E4), Mldo.scalar(E6), Mldo.scalar(E2)
        ok = (
            d * e4 - e4 * d == Mldo.scalar(E6.scale(Fraction(-1, 3)))
            and d * e6 - e6 * d == Mldo.scalar((E4 * E4).scale(Fraction(-1, 2)))
            and e4 * e6 - e6 * e4 == Mldo()
            and d * e2 - e2 * d == Mldo.scalar((E2 * E2 + E4).scale(Fraction(-1, 12)))
            and d * Mldo.scalar(DELTA) - Mldo.scalar(DELTA) * d == Mldo()
        )
        return ok, ""

    for p in (1, 2, 5, 7):

        def phi_check(p=p):
            op = phi_factory(p)
            bad = []
            for label, s in _phi_series(p, T):
                ok, why = _vanishes(op, Fraction(p, 2), s, T)
                if not ok:
                    bad.append(f"{label}: {why}")
            return not bad, "; ".join(bad)

        checks.append((f"phi_p annihilates eta-power solutions, p={p}", phi_check))

    @add("phi_8 = delta * (delta^2 - e4/18); the quotient kills eta^8(2z), eta^8(z/2)")
    def _():
        b = Mldo([E4.scale(Fraction(-1, 18)), 0, 1])
        if exact_div(phi_p(8), b, "right") != Mldo.delta():
            return False, "factorization"
        for name in ("eta2z", "etahalf"):
            ok, why = _vanishes(b, 4, eta_variant(name, 8, T), T)
            if not ok:
                return False, f"{name}: {why}"
        return True, ""

    @add("psi_1 annihilates eta(3z), eta(z/3), eta((z+1)/3), eta((z+2)/3)")
    def _():
        op = psi_p(1)
        for name in ("eta3z", "etathird", "etathirdshift1", "etathirdshift2"):
            s = eta_variant(name, 1, T, grid=72)
            ok, why = _vanishes(op, Fraction(1, 2), s, T)
            if not ok:
                return False, f"{name}: {why}"
        return True, ""

    @add("Kaneko-Zagier operators kill E4, E6, E10")
    def _():
        for k, f in ((4, E4), (6, E6), (10, E4 * E6)):
            ok, why = _vanishes(kaneko_zagier(k), k, f.qexp(T), T)
            if not ok:
                return False, f"E{k}: {why}"
        return True, ""

    for n in range(1, 9):

        def dn_check(n=n):
            op = dn_operator(n)
            for coset in COSETS:
                ok, why = _vanishes(op, Fraction(n, 2), theta_dn(n, coset, T), T)
                if not ok:
                    return False, f"coset {coset}: {why}"
            return True, ""

        checks.append((f"D_n theta operator, n={n}", dn_check))

    for n in range(1, 5):

        def eta_theta_check(n=n):
            op = phi_p(2 * n)
            e = eta_power(n, T)
            for coset in COSETS:
                s = e * theta_dn(n, coset, T)
                ok, why = _vanishes(op, n, s, s.trunc)
                if not ok:
                    return False, f"coset {coset}: {why}"
                if s.trunc < T:
                    return True, f"checked to O(q^{s.trunc})"
            return True, ""

        checks.append((f"phi_2n kills eta^n theta, n={n}", eta_theta_check))

    @add("eta(2z) eta(z/2) eta((z+1)/2) = e(1/48) eta(z)^3")
    def _():
        lhs = (
            eta_variant("eta2z", 1, T)
            * eta_variant("etahalf", 1, T)
            * eta_variant("etahalfshift", 1, T, strip_phase=False)
        )
        rhs = eta_power(3, T).scale(e_of(Fraction(1, 48)))
        return lhs.agrees_with(rhs, T), ""

    @add("16 eta(2z)^8 + eta(z/2)^8 - e(-1/6) eta((z+1)/2)^8 = 0")
    def _():
        s = (
            eta_variant("eta2z", 8, T).scale(16)
            + eta_variant("etahalf", 8, T)
            - eta_variant("etahalfshift", 8, T, strip_phase=False).scale(e_of(Fraction(-1, 6)))
        )
        return s.vanishes_below(T), ""

    for p in (2, 6):

        def example_check(p=p):
            p = Fraction(p)
            a = phi_p(p)
            cases = [
                (-p * (p - 4) / 576, -(3 * p * p + 72 * p + 512) / 2304, -(p + 16) ** 2 * (p - 8) / 55296),
                (-p * (p + 8) / 2304, -(3 * p * p - 72 * p + 512) / 2304, -(p - 8) ** 2 * (p - 32) / 55296),
                (
                    -(p - 16) * (p - 24) / 2304,
                    -(3 * p * p - 72 * p + 1664) / 2304,
                    -(p + 16) * (p - 8) * (p - 56) / 55296,
                ),
            ]
            for x, c1, c0 in cases:
                b = Mldo([E4.scale(x), 0, 1])
                res = map_solution_space(0, a, b, 1)
                want = Mldo([E6.scale(c0), E4.scale(c1), 0, 1])
                if res.c != want:
                    return False, f"x={x}: got {res.c}"
                if res.c * b != res.d * a:
                    return False, "c*b != d*a"
            return True, ""

        checks.append((f"solution-space mapping example, p={p}", example_check))

    @add("E2 quasimodular identity")
    def _():
        pts = [(0, 0), (1, 0), (0, Fraction(1, 24))]
        bad = [pt for pt in pts if not e2_qm_identity(*pt)]
        return not bad, f"fails at {bad}" if bad else ""

    @add("E2 monic witness at weight 1")
    def _():
        cert = monic_annihilator(E2, 1, 3)
        want = Mldo([E6.scale(Fraction(-1, 216)), E4.scale(Fraction(-23, 144)), 0, 1])
        return cert is not None and cert.operator == want and cert.residual_check, ""

    @add("mord table for E4^m E6^n, m, n <= 3")
    def _():
        bad = []
        for m in range(4):
            for n in range(4):
                v = mord(E4 ** m * E6 ** n, 4 * m + 6 * n, 5)
                lower = max(m, n) + 1
                if not isinstance(v, int) or v < lower:
                    bad.append((m, n, v))
                elif (m == n or m == 0 or n == 0) and v != lower:
                    bad.append((m, n, v))
        return not bad, f"violations {bad}" if bad else ""

    @add("Mason round trip for phi_2 at weight 1")
    def _():
        sols = frobenius_solve(phi_p(2), 1, T)
        res = mason_mlde(sols, 1)
        return res.monic == phi_p(2), str(res.monic)

    @add("Mason round trip for Kaneko-Zagier at weight 4")
    def _():
        sols = frobenius_solve(kaneko_zagier(4), 4, T)
        res = mason_mlde(sols, 4)
        return res.monic == kaneko_zagier(4), str(res.monic)

    @add("prescribed roots rebuild phi_p")
    def _():
        for p in (1, 2, 5, 7, Fraction(1, 3)):
            p = Fraction(p)
            if construct_monic(0, [p / 24, -p / 48, Fraction(1, 2) - p / 48]) != phi_p(p):
                return False, f"p={p}"
            roots = sorted(charpoly(0, phi_p(p)).rational_roots)
            if roots != sorted([p / 24, -p / 48, Fraction(1, 2) - p / 48]):
                return False, f"roots p={p}"
        return True, ""

    return checks


def verify_suite(T=10, phi_factory=phi_p):
    """Run every identity check; failures and exceptions become report entries."""
    report = VerificationReport()
    for name, fn in _suite_entries(T, phi_factory):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
            status = "pass" if ok else "fail"
        except Exception as exc:  # recorded, not raised
            status, detail = "fail", f"{type(exc).__name__}: {exc}"
        report.entries.append(Entry(name, status, detail, time.perf_counter() - t0))
    return report
