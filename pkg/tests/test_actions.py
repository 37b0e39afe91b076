import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perikos import actions as ac
from perikos import linalg
from perikos.errors import DomainError
from perikos.ff_curve import AdicPoint, kappa
from perikos.parith import Padic, WittElem
from perikos.period_map import ProjPoint


def test_pi_squared_is_p():
    pi = ac.ODElem.pi(2, 3, 8)
    assert (pi * pi).agrees(ac.ODElem.scalar(2, 3, 3))


def test_matrix_of_pi():
    M = ac.matrix_of(ac.ODElem.pi(2, 3, 8))
    assert [[x.valuation for x in row] for row in M] == [[float("inf"), 1], [0, float("inf")]]


@pytest.mark.parametrize("h", [2, 3])
def test_pi_twists_scalars(h):
    rng = random.Random(h)
    p = 3
    pi = ac.ODElem.pi(h, p, 8)
    for _ in range(10):
        a = ac.random_witt(rng, p, h, 8)
        lhs = pi * ac.ODElem.scalar(h, p, a)
        rhs = ac.ODElem.scalar(h, p, a.frobenius()) * pi
        assert lhs.agrees(rhs)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([2, 3]), st.sampled_from([2, 3, 5]))
def test_od_associative_and_matrix_multiplicative(seed, h, p):
    rng = random.Random(seed)
    a, b, c = (ac.random_odelem(rng, h, p, 8, unit=False) for _ in range(3))
    assert ((a * b) * c).agrees(a * (b * c))
    assert linalg.mat_agrees(ac.matrix_of(a * b), linalg.mat_mul(ac.matrix_of(a), ac.matrix_of(b)))


def test_unit_detection():
    assert ac.ODElem.one(3, 2, 8).is_unit()
    assert not ac.ODElem.pi(3, 2, 8).is_unit()
    with pytest.raises(DomainError):
        ac.act_J(ac.ODElem.pi(2, 3, 8), ac.TowerPoint.base(2, 3, prec=8))


def test_commute_check_seeded():
    rng = random.Random(0)
    for _ in range(30):
        h = rng.choice([2, 3])
        s = ac.random_odelem(rng, h, 5, 8)
        g = ac.random_gl(rng, h, 5, 8)
        x = ac.random_tower_point(rng, h, 5, 8)
        assert ac.commute_check(s, g, x)


def test_central_teichmuller_scalar_is_trivial_projectively():
    rng = random.Random(1)
    x = ac.random_tower_point(rng, 2, 3, 8)
    t = WittElem.teichmuller(3, 2, (2, 0), 8)     # lift of 2 in F_3, fixed by sigma
    y = ac.act_J(ac.ODElem.scalar(2, 3, t), x)
    assert linalg.mat_agrees(y.iota, linalg.mat_scale(x.iota, t))


def test_weil_roundtrip_and_composition():
    rng = random.Random(2)
    x = ac.random_tower_point(rng, 3, 3, 8)
    for n in (1, 2, -1):
        w = ac.WeilElem(n, ("t",))
        assert ac.act_Weil(w.inverse(), ac.act_Weil(w, x)).agrees(x, 6)
    a, b = ac.WeilElem(1), ac.WeilElem(2)
    assert ac.act_Weil(b, ac.act_Weil(a, x)).agrees(ac.act_Weil(a * b, x), 6)


def test_weil_moves_adic_point():
    x = ac.TowerPoint.base(2, 3, prec=8)
    x = ac.TowerPoint(x.h, x.p, x.deformation, x.iota, x.alpha, AdicPoint(3, 1, 2))
    y = ac.act_Weil(ac.WeilElem(2), x)
    assert kappa(y.adic) == 9 * kappa(x.adic)


def test_gl_by_p_is_tower_transition():
    rng = random.Random(3)
    x = ac.random_tower_point(rng, 2, 5, 8)
    g = [[5, 0], [0, 5]]
    assert ac.act_GL(g, x).agrees(ac.tower_transition(x))
    assert not ac.tower_transition(ac.TowerPoint.base(2, 5, prec=8)).is_integral_level()


def test_j_action_on_period_is_a_group_action():
    rng = random.Random(4)
    h, p = 2, 3
    Y = ProjPoint.canonical([WittElem.one(p, h, 8), WittElem.from_coords(p, h, [3, 6], 8)])
    s, t = ac.random_odelem(rng, h, p, 8), ac.random_odelem(rng, h, p, 8)
    lhs = ac.act_J_on_period(s * t, Y)
    rhs = ac.act_J_on_period(s, ac.act_J_on_period(t, Y))
    assert lhs.agrees(rhs, 6)


def test_tower_point_json_roundtrip():
    rng = random.Random(5)
    x = ac.random_tower_point(rng, 2, 3, 6)
    assert ac.TowerPoint.from_json(x.to_json()).agrees(x)
    s = ac.random_odelem(rng, 3, 2, 6)
    assert ac.ODElem.from_json(s.to_json()).agrees(s)


def test_singular_level_structure_rejected():
    with pytest.raises(DomainError):
        ac.TowerPoint.make(2, 3, "G0", [[1, 0], [0, 1]], [[1, 2], [2, 4]], prec=6)
    with pytest.raises(DomainError):
        ac.act_GL([[Padic.one(3, 6), 0], [0, 0]], ac.TowerPoint.base(2, 3, prec=6))
