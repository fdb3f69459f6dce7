import random
import sys
from fractions import Fraction

from hypothesis import strategies as st

from mldo.modform import Form, modular_basis
from mldo.operators import Mldo


def small_rationals():
    return st.fractions(min_value=-20, max_value=20, max_denominator=12)


def rand_rational(rng, lo=-9, hi=9, maxden=6):
    return Fraction(rng.randint(lo, hi), rng.randint(1, maxden))


def rand_modular(rng, w, nonzero=False):
    """Random element of M_w (zero if the space is empty)."""
    basis = modular_basis(w) if w >= 0 else []
    if not basis:
        return Form()
    while True:
        f = Form({m: rand_rational(rng) for m in basis})
        if f or not nonzero:
            return f


def rand_quasimodular(rng, w):
    terms = {}
    for i in range(w // 2 + 1):
        for m in modular_basis(w - 2 * i):
            terms[(i,) + m[1:]] = rand_rational(rng)
    return Form(terms)


def rand_operator(rng, max_order=3, max_weight=16, monic=False, order=None):
    """Random homogeneous operator with modular coefficients and nonzero top."""
    while True:
        n = rng.randint(0, max_order) if order is None else order
        w = rng.randrange(2 * n, max_weight + 1, 2)
        if monic:
            w = 2 * n
        top_w = w - 2 * n
        if not modular_basis(top_w):
            continue
        coeffs = [rand_modular(rng, w - 2 * i) for i in range(n)]
        top = Form.const(1) if monic else rand_modular(rng, top_w, nonzero=True)
        return Mldo(coeffs + [top])


@st.composite
def modular_forms(draw, weights=(0, 4, 6, 8, 10, 12)):
    w = draw(st.sampled_from(weights))
    basis = modular_basis(w)
    coeffs = draw(st.lists(small_rationals(), min_size=len(basis), max_size=len(basis)))
    return Form(dict(zip(basis, coeffs)))


@st.composite
def operators(draw, max_order=3, max_weight=12, monic=False):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    return rand_operator(random.Random(seed), max_order, max_weight, monic)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
