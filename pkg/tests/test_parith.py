import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perikos.errors import PrimeMismatch
from perikos.parith import GF, CoeffRing, Padic, PSeries, WittElem, conway_polynomial
from perikos.parith import _kernel
from perikos.parith.finite_field import is_primitive, search_conway

PRIMES = [2, 3, 5, 7]
rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10**6)


# -- finite fields -----------------------------------------------------------


@pytest.mark.parametrize("p, m, expected", [
    (2, 3, (1, 1, 0, 1)),    # x^3 + x + 1
    (3, 2, (2, 2, 1)),       # x^2 + 2x + 2
    (5, 2, (2, 4, 1)),       # x^2 + 4x + 2
    (2, 4, (1, 1, 0, 0, 1)),  # x^4 + x + 1
])
def test_conway_polynomials_known_values(p, m, expected):
    assert conway_polynomial(p, m) == expected


@pytest.mark.parametrize("p, m", [(2, 2), (3, 3), (5, 2), (7, 2)])
def test_conway_table_matches_search(p, m):
    assert tuple(search_conway(p, m)) == conway_polynomial(p, m)
    assert is_primitive(list(conway_polynomial(p, m)), p)


@pytest.mark.parametrize("p, m", [(2, 3), (3, 2), (5, 2)])
def test_gf_generator_order_and_frobenius(p, m):
    F = GF(p, m)
    g = F.gen()
    assert F.pow(g, p**m - 1) == F.one()
    assert F.frobenius(g, m) == g
    assert F.mul(g, F.inv(g)) == F.one()


# -- p-adic numbers ----------------------------------------------------------


def test_padic_one_third_in_z5():
    x = Padic.from_rational(5, Fraction(1, 3), 6)
    assert x.digits == [2, 3, 1, 3, 1, 3]
    assert (x * 3).agrees(Padic.one(5, 6))


def test_padic_zero_has_infinite_valuation():
    z = Padic.zero(3, 5)
    assert z.is_zero() and z.valuation == float("inf")


def test_padic_precision_propagation():
    a = Padic.from_rational(3, 9, 5)         # 3^2 + O(3^5)
    b = Padic.from_rational(3, 1, 4)
    assert (a + b).abs_precision == 4
    assert (a * b).abs_precision == 5        # min(5 + 0, 4 + 2)
    assert (a / 3).abs_precision == 4


def test_padic_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        Padic.one(3, 5) + Padic.one(5, 5)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(PRIMES), rationals, rationals)
def test_padic_field_axioms_against_fractions(p, x, y):
    N = 12
    a, b = Padic.from_rational(p, x, N), Padic.from_rational(p, y, N)
    assert (a + b).agrees(Padic.from_rational(p, x + y, N), N - 4)
    assert (a * b).agrees(Padic.from_rational(p, x * y, 2 * N), (a * b).abs_precision)
    if y != 0:
        q = a / b
        assert (q * b).agrees(a, min(q.abs_precision, a.abs_precision) - 4)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(PRIMES), rationals)
def test_padic_json_roundtrip(p, x):
    a = Padic.from_rational(p, x, 9)
    b = Padic.from_json(a.to_json())
    assert b == a


# -- Witt vectors ------------------------------------------------------------


@pytest.mark.parametrize("p, m", [(2, 2), (3, 2), (2, 3), (5, 2)])
def test_teichmuller_lift_properties(p, m):
    N = 8
    F = GF(p, m)
    t = WittElem.teichmuller(p, m, F.gen(), N)
    assert (t ** (p**m - 1)).agrees(WittElem.one(p, m, N))
    assert t.frobenius().agrees(t ** p)
    assert t.frobenius(m).agrees(t)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([(2, 2), (3, 2), (2, 3), (5, 3)]), st.data())
def test_frobenius_is_a_ring_automorphism(pm, data):
    p, m = pm
    N = 7
    coords = st.lists(st.integers(0, p**N - 1), min_size=m, max_size=m)
    a = WittElem.from_coords(p, m, data.draw(coords), N)
    b = WittElem.from_coords(p, m, data.draw(coords), N)
    assert (a * b).frobenius().agrees(a.frobenius() * b.frobenius())
    assert (a + b).frobenius().agrees(a.frobenius() + b.frobenius())
    assert a.frobenius(2).frobenius(-2).agrees(a)


def test_witt_inverse_and_json():
    rng = random.Random(3)
    for _ in range(20):
        a = WittElem.from_coords(3, 2, [rng.randrange(1, 3**6), rng.randrange(3**6)], 6)
        if not a.is_unit():
            continue
        assert (a * a.inverse()).agrees(WittElem.one(3, 2, 6))
        assert WittElem.from_json(a.to_json()).agrees(a)


def test_witt_residue_field_reduction():
    a = WittElem.from_coords(3, 2, [4, 5], 4)
    assert a.residue() == (1, 2)


# -- power series ------------------------------------------------------------


def _ring(p=3, m=1, prec=20):
    return CoeffRing(p, m, prec)


def test_reversion_gives_catalan_numbers():
    R = _ring()
    f = PSeries.from_dict(R, 1, 8, {1: 1, 2: 1})
    g = f.reverse()
    assert [g.exact_coeff((k,)) for k in range(1, 8)] == [1, -1, 2, -5, 14, -42, 132]
    assert g.is_exact


def test_exp_times_exp_minus_is_one():
    from math import factorial
    R = _ring(p=5, prec=30)
    e = PSeries.from_dict(R, 1, 12, {k: Fraction(1, factorial(k)) for k in range(12)})
    em = PSeries.from_dict(R, 1, 12, {k: Fraction((-1) ** k, factorial(k)) for k in range(12)})
    assert (e * em).agrees(PSeries.constant(R, 1, 12, 1))


def test_inverse_of_one_minus_x_is_geometric():
    R = _ring()
    f = PSeries.from_dict(R, 1, 10, {0: 1, 1: -1})
    g = f.inverse()
    assert all(g.exact_coeff((k,)) == 1 for k in range(10))


def test_composition_with_gaps_and_several_variables():
    R = _ring()
    f = PSeries.from_dict(R, 1, 10, {1: 1, 3: 2})
    g = PSeries.from_dict(R, 2, 10, {(1, 0): 1, (0, 1): 1})
    h = f.compose(g)
    # (x + y) + 2 (x + y)^3
    assert h.exact_coeff((2, 1)) == 6 and h.exact_coeff((1, 0)) == 1 and h.exact_coeff((1, 1)) == 0


def test_kronecker_product_matches_naive():
    rng = random.Random(7)
    order, nvars = 14, 2
    mons = _kernel.monomials_below(nvars, order)
    A = {e: (rng.randrange(0, 5**9),) for e in mons if rng.random() < 0.7}
    B = {e: (rng.randrange(0, 5**9),) for e in mons if rng.random() < 0.7}
    fast = _kernel._kronecker(A, B, nvars, order, 1)
    slow = _kernel._naive(A, B, order, 1)
    clean = lambda d: {e: v for e, v in d.items() if any(v)}  # noqa: E731
    assert clean(fast) == clean(slow)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=4, max_size=4),
       st.lists(st.integers(-20, 20), min_size=4, max_size=4),
       st.lists(st.integers(-20, 20), min_size=4, max_size=4))
def test_series_ring_laws(a, b, c):
    R = _ring(p=5)
    M = 8
    f, g, h = (PSeries.from_dict(R, 1, M, dict(enumerate(v))) for v in (a, b, c))
    assert (f * (g + h)) == f * g + f * h
    assert (f * g) * h == f * (g * h)
    assert f * g == g * f


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-30, 30), min_size=5, max_size=5))
def test_reverse_is_compositional_inverse(tail):
    R = _ring(p=3, prec=15)
    M = 7
    f = PSeries.from_dict(R, 1, M, {1: 1, **{k + 2: c for k, c in enumerate(tail)}})
    g = f.reverse()
    x = PSeries.variable(R, 1, M)
    assert f.compose(g).agrees(x)
    assert g.compose(f).agrees(x)
    assert g.reverse() == f


def test_series_json_roundtrip_keeps_exactness():
    R = _ring(p=2, m=2, prec=9)
    w = WittElem.from_coords(2, 2, [3, 1], 9)
    f = PSeries.from_dict(R, 2, 6, {(1, 0): 1, (1, 1): Fraction(1, 4), (2, 1): w})
    g = PSeries.from_json(f.to_json())
    assert g == f
    assert g.precision(1) == f.precision(1)


def test_series_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        PSeries.variable(_ring(3), 1, 5) + PSeries.variable(_ring(5), 1, 5)
