import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import operators, rand_operator
from mldo.errors import (
    EmptyIntersection, PreconditionViolated, RootSumMismatch, WeightBoundViolated,
    WeightNotRealizable,
)
from mldo.families import phi_p
from mldo.modform import E4, E6
from mldo.operators import Mldo
from mldo.qseries import QSeries, apply_mldo
from mldo.spectra import (
    basis_poly, charpoly, construct_monic, construct_quasimonic, map_solution_space,
    necessity_check, root_sum_check,
)
from mldo.spectra import _peval, _rational_roots

F = Fraction
D = Mldo.delta()


def char_value_by_action(a, k, lam):
    """F(k, a, lam) read off as the q^lam coefficient of a[k] q^lam."""
    s = QSeries.monomial(lam, lam + 1)
    return apply_mldo(a, k, s, lam + 1).coefficient(lam)


@settings(max_examples=30, deadline=None)
@given(operators(max_order=3, max_weight=12),
       st.sampled_from([F(0), F(1, 2), F(1), F(4)]),
       st.fractions(-3, 3, max_denominator=24))
def test_charpoly_matches_action_on_monomials(a, k, lam):
    cd = charpoly(k, a)
    val = _peval(cd.poly, lam) if not cd.is_zero else 0
    assert val == char_value_by_action(a, k, lam)


def test_basis_poly():
    assert basis_poly(0, 0) == [1]
    assert basis_poly(F(1, 2), 2) == [F(1, 24) * F(5, 24), -(F(1, 24) + F(5, 24)), 1]


def test_multiplicativity_and_root_sum_on_random_monic():
    rng = random.Random(13)
    for _ in range(50):
        a = rand_operator(rng, max_order=3, monic=True)
        b = rand_operator(rng, max_order=3, monic=True)
        k = F(rng.randint(-6, 12), rng.choice([1, 2, 3]))
        ab = charpoly(k, a * b).poly
        fa = charpoly(k + b.weight(), a).poly
        fb = charpoly(k, b).poly
        prod = [F(0)] * (len(fa) + len(fb) - 1)
        for i, x in enumerate(fa):
            for j, y in enumerate(fb):
                prod[i + j] += x * y
        assert ab == prod
        if a.ord() >= 1:
            assert root_sum_check(k, a)


@pytest.mark.parametrize("p", [1, 2, 5, 7, F(1, 3)])
def test_phi_p_roots(p):
    p = F(p)
    roots = charpoly(0, phi_p(p)).sorted_roots()
    assert roots == sorted([p / 24, -p / 48, F(1, 2) - p / 48])


def test_charpoly_printing():
    assert str(charpoly(0, phi_p(2))) == "(λ - 1/12)(λ + 1/24)(λ - 11/24)"
    assert str(charpoly(0, D * D - D.scale(F(5, 6)))) == "λ(λ - 1)"
    cd = charpoly(0, D * D - Mldo([E4]))
    assert cd.rational_roots == [] and len(cd.residual) == 3


def test_rational_roots_with_irrational_factor():
    # (x - 1/2)(x^2 - 2)
    roots, residual = _rational_roots([F(1), F(-2), F(-1, 2), F(1)])
    assert roots == [F(1, 2)]
    assert residual == [F(-2), F(0), F(1)]


def test_root_sum_precondition():
    with pytest.raises(PreconditionViolated):
        root_sum_check(0, Mldo([E4, 0, E4]))


# --- constructors -------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(-2, 2, max_denominator=48), min_size=1, max_size=3),
       st.sampled_from([F(0), F(1, 2), F(2)]))
def test_construct_monic_round_trip(roots, k):
    n = len(roots) + 1
    last = F(n) * (k + n - 1) / 12 - sum(roots)
    roots = roots + [last]
    try:
        a = construct_monic(k, roots)
    except WeightNotRealizable:
        return
    assert a.is_monic() and a.weight() == 2 * a.ord()
    assert sorted(charpoly(k, a).rational_roots) == sorted(roots)


def test_construct_monic_rebuilds_phi_p():
    for p in (1, 2, 5, 7, F(1, 3)):
        p = F(p)
        assert construct_monic(0, [p / 24, -p / 48, F(1, 2) - p / 48]) == phi_p(p)


def test_construct_quasimonic_weight():
    a = construct_quasimonic(0, [F(1, 6), F(1, 3)], 8)
    assert a.weight() == 8 and a.is_quasimonic()
    assert sorted(charpoly(0, a).rational_roots) == [F(1, 6), F(1, 3)]


def test_constructor_errors():
    with pytest.raises(RootSumMismatch):
        construct_monic(0, [F(1), F(2)])
    with pytest.raises(WeightNotRealizable):
        construct_quasimonic(0, [F(1, 7)], 4)


# --- mapping solution spaces --------------------------------------------------------

EXAMPLE = [
    (lambda p: -p * (p - 4) / 576, lambda p: -(3 * p * p + 72 * p + 512) / 2304,
     lambda p: -(p + 16) ** 2 * (p - 8) / 55296),
    (lambda p: -p * (p + 8) / 2304, lambda p: -(3 * p * p - 72 * p + 512) / 2304,
     lambda p: -(p - 8) ** 2 * (p - 32) / 55296),
    (lambda p: -(p - 16) * (p - 24) / 2304, lambda p: -(3 * p * p - 72 * p + 1664) / 2304,
     lambda p: -(p + 16) * (p - 8) * (p - 56) / 55296),
]


@pytest.mark.parametrize("p", [2, 6, 1, F(5, 2)])
@pytest.mark.parametrize("case", range(3))
def test_map_solution_space_example(p, case):
    p = F(p)
    x, c1, c0 = (f(p) for f in EXAMPLE[case])
    a = phi_p(p)
    b = Mldo([E4.scale(x), 0, 1])
    res = map_solution_space(0, a, b, 1)
    assert res.c == Mldo([E6.scale(c0), E4.scale(c1), 0, 1])
    assert res.c * b == res.d * a
    assert res.ok


def test_map_solution_space_errors():
    a = phi_p(2)
    with pytest.raises(EmptyIntersection):
        map_solution_space(0, a, Mldo([E4.scale(F(1, 7)), 0, 1]), 1)
    with pytest.raises(WeightBoundViolated):
        map_solution_space(0, a, a, 1)
    with pytest.raises(PreconditionViolated):
        map_solution_space(0, Mldo([E4, 0, E4]), D, 1)


def test_necessity_check():
    p = F(2)
    a = phi_p(p)
    b = Mldo([E4.scale(EXAMPLE[0][0](p)), 0, 1])
    res = map_solution_space(0, a, b, 1)
    assert necessity_check(0, a, b, res.c) == [p / 24]
