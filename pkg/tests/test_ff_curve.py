import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perikos import ff_curve as ff
from perikos.errors import DomainError
from perikos.isocrystals import SlopeData
from perikos.period_map import RigidPoint, period_point

INF = float("inf")
radii = st.fractions(min_value=Fraction(1, 500), max_value=1000, max_denominator=500)


def test_untilt_point_has_kappa_one():
    assert ff.kappa(ff.untilt_point(5)) == 1


def test_tags_and_axes():
    assert ff.AdicPoint(3, INF, INF).tag == ff.X_K
    assert ff.AdicPoint(3, INF, 2).tag == ff.P_AXIS
    assert ff.AdicPoint(3, 2, INF).tag == ff.W_AXIS
    assert ff.kappa(ff.AdicPoint(3, INF, 2)) == 0
    assert ff.kappa(ff.AdicPoint(3, 2, INF)) == INF
    with pytest.raises(DomainError):
        ff.kappa(ff.AdicPoint(3, INF, INF))


def test_fundamental_domain_examples():
    rep, n = ff.fundamental_domain(ff.AdicPoint(5, 1, 30))
    assert (ff.kappa(rep), n) == (Fraction(6, 5), -2)
    rep, n = ff.fundamental_domain(ff.AdicPoint(2, 8, 1))
    assert (ff.kappa(rep), n) == (1, 3)
    with pytest.raises(DomainError):
        ff.fundamental_domain(ff.AdicPoint(2, INF, 1))


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3, 5, 7]), radii, radii, st.integers(-6, 6))
def test_frobenius_scales_kappa(p, a, b, n):
    x = ff.AdicPoint(p, a, b)
    assert ff.kappa(ff.frobenius_move(x, n)) == Fraction(p) ** n * ff.kappa(x)
    rep, k = ff.fundamental_domain(x)
    assert 1 <= ff.kappa(rep) < p
    assert ff.fundamental_domain(ff.frobenius_move(x, n)) == (rep, k - n)


def test_bundle_invariants():
    E = ff.BundleFF.O(Fraction(1, 2)) + ff.BundleFF.O(-1, 2)
    assert E.rank_deg_slope() == (4, -1, Fraction(-1, 4))
    assert str(E) == "O(1/2) + O(-1)^2"
    assert E.hn_polygon() == [(0, 0), (2, 1), (4, -1)]
    assert not E.is_semistable()
    assert ff.BundleFF.from_json(E.to_json()) == E


def test_tensor_and_dual():
    a, b = ff.BundleFF.O(Fraction(1, 2)), ff.BundleFF.O(Fraction(1, 3))
    t = a.tensor(b)
    assert t == ff.BundleFF.O(Fraction(5, 6))
    assert t.rank == 6 and t.degree == 5
    assert a.tensor(a) == ff.BundleFF.O(1, 4)
    assert a.dual() == ff.BundleFF.O(Fraction(-1, 2))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                          st.integers(1, 3)), min_size=1, max_size=3),
       st.lists(st.tuples(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                          st.integers(1, 3)), min_size=1, max_size=3))
def test_rank_degree_multiplicativity(s, t):
    E, F = ff.BundleFF(tuple(s)), ff.BundleFF(tuple(t))
    T = E.tensor(F)
    assert T.rank == E.rank * F.rank
    assert T.degree == E.degree * F.rank + F.degree * E.rank
    assert E.dual().dual() == E
    assert (E + F).degree == E.degree + F.degree


def test_pdiv_classes():
    assert [str(E) for E in ff.pdiv_bundle_classes(2)] == ["O(1) + O(0)", "O(1/2)"]
    assert [str(E) for E in ff.pdiv_bundle_classes(1)] == ["O(1)"]
    for h in range(1, 7):
        classes = ff.pdiv_bundle_classes(h)
        assert len(classes) == h
        assert all(E.rank == h and E.degree == 1 for E in classes)


def test_hecke_validation_errors():
    E = ff.BundleFF.O(Fraction(1, 2))
    ff.hecke_validate(ff.ModificationTriple(E, ff.BundleFF.trivial(2), 1))
    with pytest.raises(ff.RankMismatch):
        ff.hecke_validate(ff.ModificationTriple(E, ff.BundleFF.trivial(3), 1))
    with pytest.raises(ff.DegreeMismatch):
        ff.hecke_validate(ff.ModificationTriple(E, ff.BundleFF.trivial(2), 2))


def test_bundle_from_isocrystal_sign():
    s = SlopeData.from_json([[1, 3, 3]])
    assert ff.bundle_from_isocrystal(s) == ff.BundleFF.O(Fraction(1, 3))
    assert ff.bundle_from_isocrystal(s, -1) == ff.BundleFF.O(Fraction(-1, 3))


def test_global_point_contract():
    x = RigidPoint(3, 3, [3, 9])
    g = ff.global_point(x, 5)
    assert g.fiber == ff.perdom_fiber(g.base_class)
    assert g.fiber.fiber_dim == 2
    assert g.point == period_point(x, 5)
    assert g.commutes(x)
    d = g.to_json()
    assert d["fiber"]["fiber"] == "P^2"
    assert d["triple"]["E"] == [[1, 3, 1]]  # one copy of O(1/3)


def test_adic_point_json():
    rng = random.Random(0)
    for _ in range(10):
        x = ff.AdicPoint(3, Fraction(rng.randint(1, 50), rng.randint(1, 50)), rng.choice([INF, 2]))
        assert ff.AdicPoint.from_json(x.to_json()) == x
