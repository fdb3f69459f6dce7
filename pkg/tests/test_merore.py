import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import operators, rand_operator
from mldo.errors import NotHomogeneous, NotMonicTop
from mldo.families import kaneko_zagier
from mldo.merore import (
    MER_ONE, MerForm, MerMldo, clear_denoms, euclid_div_left, euclid_div_right, gcrd, gcrd_full,
    lclm, ore_pair, symmetric_product,
)
from mldo.modform import DELTA, E4, E6, ONE, Form
from mldo.operators import Mldo, exact_div
from mldo.qseries import apply_mldo

F = Fraction
D = Mldo.delta()


def S(f):
    return Mldo.scalar(f)


def M(a):
    return MerMldo.from_mldo(a)


# --- meromorphic forms ----------------------------------------------------------

def test_merform_reduces_and_normalizes():
    f = MerForm(E4 * E6, E4 * E4)
    assert f == MerForm(E6, E4)
    assert f.den.lead_coeff() == 1
    assert MerForm(E4.scale(3), E4.scale(2)) == MerForm.const(F(3, 2))


def test_merform_field_operations():
    a = MerForm(E6, E4)
    b = MerForm(E4 * E4, E6)
    assert a * a.inverse() == MER_ONE
    assert (a * b) / b == a
    assert a.weight() == 2
    with pytest.raises(NotHomogeneous):
        a + MerForm(E4)


def test_merform_bracket_quotient_rule():
    f, g = E4 * E6, E4 ** 3 - E6 ** 2
    q = MerForm(f, g)
    want = MerForm(f.bracket() * g - f * g.bracket(), g * g)
    assert q.bracket() == want
    assert MerForm(DELTA).bracket() == MerForm(Form())


def test_merform_qexp_with_pole():
    T = 6
    q = MerForm(E4, DELTA)
    s = q.qexp(T)
    assert s.lead == -1
    assert (s * DELTA.qexp(T + 1)).agrees_with(E4.qexp(T), T - 1)
    r = MerForm(E6, E4)
    assert (r.qexp(T) * E4.qexp(T)).agrees_with(E6.qexp(T), T)


# --- Euclidean algorithm ------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(operators(), operators())
def test_euclid_division(a, b):
    a, b = M(a), M(b)
    q, r = euclid_div_right(a, b)
    assert q * b + r == a and r.ord() < b.ord()
    q, r = euclid_div_left(a, b)
    assert b * q + r == a and r.ord() < b.ord()


def gcrd_lclm_check(a, b):
    res = gcrd_full(a, b)
    g, (u, v), l = res.gcrd, res.bezout, res.lclm
    A, B = M(a), M(b)
    assert u * A + v * B == g
    assert g.is_monic()
    _, ra = euclid_div_right(A, g)
    _, rb = euclid_div_right(B, g)
    assert not ra.coeffs and not rb.coeffs
    _, la = euclid_div_right(l, A)
    _, lb = euclid_div_right(l, B)
    assert not la.coeffs and not lb.coeffs
    assert g.ord() + l.ord() == a.ord() + b.ord()
    return g, l


@settings(max_examples=25, deadline=None)
@given(operators(max_order=3, max_weight=12), operators(max_order=3, max_weight=12))
def test_gcrd_lclm_identities(a, b):
    gcrd_lclm_check(a, b)


def test_gcrd_of_common_right_factor():
    rng = random.Random(11)
    for _ in range(5):
        c = rand_operator(rng, max_order=2, monic=True)
        if c.ord() < 1:
            continue
        a = rand_operator(rng, max_order=2) * c
        b = rand_operator(rng, max_order=2) * c
        g, _ = gcrd_lclm_check(a, b)
        assert g.ord() >= c.ord()
        _, r = euclid_div_right(g, M(c))
        assert not r.coeffs


def test_lclm_examples():
    assert lclm(D, S(E4)) == M(D)
    kz4, kz6 = kaneko_zagier(4), kaneko_zagier(6)
    g, _ = gcrd(kz4, kz6)
    assert g.ord() == 0


def test_gcrd_of_symmetric_product_with_kz10():
    s = symmetric_product(kaneko_zagier(4), kaneko_zagier(6), 4, 6)
    g, _ = gcrd(s, kaneko_zagier(10))
    assert g.ord() >= 1
    T = 8
    out = apply_mldo(g, 10, (E4 * E6).qexp(T), T)
    assert out.vanishes_below(T)


# --- denominators and Ore pairs --------------------------------------------------------

def test_clear_denoms():
    a = MerMldo([MerForm(E6.scale(F(1, 3)), E4 * E4), MerForm(ONE, E4)])
    m, a0 = clear_denoms(a)
    assert a0 == Mldo([E6, E4.scale(3)])
    assert M(a0) == a.left_mul_form(MerForm(m))


def test_ore_pair_example():
    a2, b2 = ore_pair(S(E4), D)
    assert a2 == D ** 2 - S(E4.scale(F(1, 6)))
    assert b2 == S(E4) * D - S(E6.scale(F(2, 3)))
    assert a2 * S(E4) == b2 * D


def test_ore_pair_random():
    rng = random.Random(17)
    for _ in range(6):
        a = rand_operator(rng, max_order=2, max_weight=8)
        b = rand_operator(rng, max_order=2, monic=True)
        if b.ord() < 1:
            continue
        a2, b2 = ore_pair(a, b)
        assert a2.is_monic()
        assert a2 * a == b2 * b


# --- symmetric product --------------------------------------------------------------

def test_symmetric_product_kills_products():
    T = 8
    s = symmetric_product(kaneko_zagier(4), kaneko_zagier(6), 4, 6)
    assert s.is_monic()
    out = apply_mldo(s, 10, (E4 * E6).qexp(T), T)
    assert out.vanishes_below(T)


def test_symmetric_product_requires_monic():
    with pytest.raises(NotMonicTop):
        symmetric_product(S(E4) * D, D, 0, 0)


def test_symmetric_square_of_first_order():
    # at weight 0 delta kills the constants, and so does it for their products
    a = D
    s = symmetric_product(a, a, 0, 0)
    assert s == M(D)
