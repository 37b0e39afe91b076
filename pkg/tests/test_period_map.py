import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perikos import period_map as pm
from perikos.errors import ConvergenceError, DomainError, PrecisionError
from perikos.parith import Padic, WittElem


@pytest.mark.parametrize("h, p", [(1, 3), (2, 2), (2, 5), (3, 3), (4, 2)])
def test_origin_maps_to_first_basis_vector(h, p):
    P = pm.period_point(pm.RigidPoint(h, p, [0] * (h - 1)), 6)
    assert P.pivot == 0
    assert all(c.is_zero() for c in P.coords[1:])


def test_frozen_value_height_two_p5():
    P = pm.period_point(pm.RigidPoint(2, 5, [5]), 6)
    assert P.pivot == 0
    assert P.coords[1].agrees(Padic.from_rational(5, 12501, 6))


def test_first_order_term_is_u_over_p():
    # phi_1 / phi_0 = u / p + O(u^p) for h = 2
    p, u = 3, 3**4
    P = pm.period_point(pm.RigidPoint(2, p, [u]), 6)
    assert P.coords[1].agrees(Padic.from_rational(p, Fraction(u, p), 6), 6)


def test_unit_parameter_is_outside_domain():
    x = pm.RigidPoint(2, 3, [1])
    assert not pm.radius_check(x)
    with pytest.raises(DomainError):
        pm.period_point(x, 4)


def test_level_cap_raises_convergence_error():
    with pytest.raises(ConvergenceError):
        pm.period_point(pm.RigidPoint(2, 3, [3]), 30, max_level=2)


def test_low_precision_input_is_reported():
    u = Padic.from_rational(3, 3, 4)
    with pytest.raises(PrecisionError):
        pm.period_point(pm.RigidPoint(2, 3, [u]), 12)


def test_witt_valued_parameter():
    u = WittElem.from_coords(3, 2, [3, 6], 20)
    P = pm.period_point(pm.RigidPoint(2, 3, [u]), 5)
    assert isinstance(P.coords[1], WittElem)


def test_fixed_level_agrees_with_adaptive():
    x = pm.RigidPoint(3, 5, [5, 25])
    P = pm.period_point(x, 6)
    Q = pm.period_point(x, 6, level=2 * P.meta["level"] + 1)
    assert P == Q


def test_canonical_pivot_is_first_minimal_valuation():
    c = [Padic.from_rational(3, x, 10) for x in (9, 3, 6)]
    P = pm.ProjPoint.canonical(c)
    assert P.pivot == 1
    assert P.coords[1].agrees(Padic.one(3, 10))
    assert P.coords[2].agrees(Padic.from_rational(3, 2, 8))


def test_all_zero_coordinates_raise():
    with pytest.raises(PrecisionError):
        pm.ProjPoint.canonical([Padic.zero(3, 5), Padic.zero(3, 5)])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_canonical_form_is_scale_invariant(seed):
    rng = random.Random(seed)
    p, N = rng.choice([2, 3, 5]), 14
    coords = [Padic.from_rational(p, rng.randrange(1, p**8) * p ** rng.randrange(0, 3), N)
              for _ in range(rng.randint(2, 4))]
    lam = Padic.from_rational(p, rng.randrange(1, p**6) * p ** rng.randrange(-2, 3), N)
    assert pm.ProjPoint.canonical(coords) == pm.ProjPoint.canonical([c * lam for c in coords])


def test_json_roundtrips():
    x = pm.RigidPoint(3, 3, [3, Fraction(9, 2)])
    assert pm.RigidPoint.from_json(x.to_json()) == x
    P = pm.period_point(x, 5)
    assert pm.ProjPoint.from_json(P.to_json()) == P


def test_hodge_line_is_period_point():
    x = pm.RigidPoint(2, 2, [4])
    assert pm.hodge_line(x, 5) == pm.period_point(x, 5)
