from fractions import Fraction

import pytest
from hypothesis import assume, given, settings

from conftest import modular_forms
from mldo.errors import NoFit, NotDivisible, NotHomogeneous, UnderDetermined
from mldo.modform import (
    DELTA, E2, E4, E6, ONE, Form, dim_modular, form_gcd, format_form, modular_basis, recognize,
    unit_monomial,
)
from mldo.qseries import eisenstein, eta_power

F = Fraction
T = 8


def test_grading():
    f = E4 * E6 + E2 * E2 * E6
    assert f.weight() == 10
    assert f.depth() == 2
    assert not f.is_modular()
    assert Form().weight() is None
    with pytest.raises(NotHomogeneous):
        (E4 + E6).weight()


def test_eval_inf_and_lead():
    assert (E4 - E6.scale(3)).eval_inf() == -2
    assert DELTA.eval_inf() == 0
    assert (E4 ** 3 + E6 ** 2).lead_monomial() == (0, 3, 0)


@pytest.mark.parametrize("g,k", [(E2, 2), (E4, 4), (E6, 6)])
def test_generators_expand_to_eisenstein(g, k):
    assert g.qexp(T) == eisenstein(k, T)


def test_delta_is_eta_24():
    assert DELTA.qexp(T).agrees_with(eta_power(24, T), T)


@pytest.mark.parametrize("g", [E2, E4, E6])
def test_ramanujan_identities_against_qexpansion(g):
    assert g.derive().qexp(T) == g.qexp(T).qderiv()


def test_ramanujan_identities_closed_form():
    assert E2.derive() == (E2 * E2 - E4).scale(F(1, 12))
    assert E4.derive() == (E2 * E4 - E6).scale(F(1, 3))
    assert E6.derive() == (E2 * E6 - E4 * E4).scale(F(1, 2))


def test_bracket_of_generators():
    assert E4.bracket() == E6.scale(F(-1, 3))
    assert E6.bracket() == (E4 * E4).scale(F(-1, 2))
    assert E2.bracket() == (E2 * E2 + E4).scale(F(-1, 12))
    assert DELTA.bracket() == Form()


@settings(max_examples=40, deadline=None)
@given(modular_forms(), modular_forms())
def test_qexp_is_multiplicative(f, g):
    assert (f * g).qexp(T).agrees_with(f.qexp(T) * g.qexp(T), T)
    assert (f + g).qexp(T).agrees_with(f.qexp(T) + g.qexp(T), T)


@settings(max_examples=40, deadline=None)
@given(modular_forms())
def test_derivative_commutes_with_qexp(f):
    assert f.derive().qexp(T) == f.qexp(T).qderiv()


@settings(max_examples=40, deadline=None)
@given(modular_forms())
def test_serre_derivative_preserves_modularity(f):
    assume(f)
    d = f.serre_d()
    assert d.is_modular()
    if d:
        assert d.weight() == f.weight() + 2


@settings(max_examples=40, deadline=None)
@given(modular_forms(), modular_forms())
def test_leibniz_rule(f, g):
    assume(f and g)
    k, l = f.weight(), g.weight()
    assert (f * g).serre_d(k + l) == f.serre_d(k) * g + f * g.serre_d(l)


@settings(max_examples=40, deadline=None)
@given(modular_forms(), modular_forms())
def test_exact_division(f, g):
    assume(g)
    assert (f * g).exact_div(g) == f
    assert (f * g) / g == f


def test_not_divisible():
    with pytest.raises(NotDivisible):
        (E4 + E2 * E2).exact_div(E6)


@settings(max_examples=40, deadline=None)
@given(modular_forms(), modular_forms(), modular_forms(weights=(4, 6, 12)))
def test_gcd_contains_common_factor(f, g, h):
    assume(f and g and h)
    d = form_gcd(f * h, g * h)
    assert d.divides(f * h) and d.divides(g * h)
    assert h.divides(d)
    assert d.lead_coeff() == 1


def test_gcd_examples():
    assert form_gcd(E4 * E6, E4 ** 2) == E4
    assert form_gcd(E4 ** 3 - E6 ** 2, E4 ** 3) == ONE
    assert form_gcd(DELTA * E4, DELTA * E6) == DELTA.scale(1728)


@pytest.mark.parametrize("k", range(0, 40, 2))
def test_dimension_formula(k):
    want = k // 12 + (0 if k % 12 == 2 else 1)
    assert dim_modular(k) == want
    assert len(modular_basis(k)) == want


def test_unit_monomial():
    assert unit_monomial(8) == E4 ** 2
    assert unit_monomial(6) == E6
    assert unit_monomial(2) is None
    assert unit_monomial(0) == ONE


@settings(max_examples=30, deadline=None)
@given(modular_forms(weights=(4, 6, 8, 10, 12, 16)))
def test_recognize_inverts_qexp(f):
    assume(f)
    k = f.weight()
    assert recognize(f.qexp(dim_modular(k) + 6), k) == f


def test_recognize_errors():
    with pytest.raises(UnderDetermined):
        recognize(E4.qexp(3), 4)
    with pytest.raises(NoFit):
        recognize(E2.qexp(10), 2)
    with pytest.raises(NoFit):
        recognize(eta_power(1, 10), 0)


def test_format_form():
    assert format_form(E4 ** 3 - E6 ** 2) == "E4^3 - E6^2"
    assert format_form(E4.scale(F(-1, 6))) == "-(1/6)*E4"
    assert format_form(Form.const(F(3, 4))) == "(3/4)"
    assert format_form(Form()) == "0"
