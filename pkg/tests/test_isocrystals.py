import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perikos import isocrystals as iso
from perikos import linalg
from perikos.errors import DomainError, PrecisionError
from perikos.parith import Padic

from oracles import brute_newton_slopes, lattice_polygons, random_witt


def test_diagonal_isocrystal():
    X = iso.Isocrystal.from_matrix(3, 1, [[1, 0], [0, 3]])
    assert iso.newton_polygon(X) == iso.SlopeData(((0, 1), (1, 1)))


def test_antidiagonal_has_slope_one_half():
    X = iso.Isocrystal.from_matrix(5, 1, [[0, 5], [1, 0]])
    assert iso.newton_polygon(X) == iso.SlopeData(((Fraction(1, 2), 2),))


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_onedim_dieudonne_slope(h):
    X = iso.dieudonne_of_onedim(h, 3, 10)
    assert iso.newton_polygon(X) == iso.SlopeData(((Fraction(1, h), h),))


def test_block_companion_realizes_slopes():
    s = iso.SlopeData.from_json([[1, 3, 3], [2, 1, 1]])
    assert iso.newton_polygon(iso.block_companion(5, s)) == s


def test_slope_data_validation():
    with pytest.raises(ValueError):
        iso.SlopeData(((Fraction(1, 2), 1),))
    s = iso.SlopeData.from_slopes([Fraction(1, 2), 0, Fraction(1, 2)])
    assert s.pairs == ((0, 1), (Fraction(1, 2), 2))
    assert s.rank == 3 and s.degree == 1
    assert s.vertices() == [(0, 0), (1, 0), (3, 1)]
    assert iso.SlopeData.from_json(s.to_json()) == s


def test_singular_matrix_rejected():
    with pytest.raises(DomainError):
        iso.Isocrystal.from_matrix(3, 1, [[1, 2], [2, 4]])


def test_unresolved_coefficient_raises():
    # trace known only mod 3^2 but the hull needs valuation >= 3 there
    z = Padic.zero(3, 2)
    with pytest.raises(PrecisionError):
        iso.polygon_from_charpoly([Padic.from_rational(3, 3**6, 20), z, Padic.one(3, 20)])


def test_berkowitz_agrees_with_leibniz():
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 4)
        A = [[random_witt(rng, 3, 2, 8) for _ in range(n)] for _ in range(n)]
        fast, slow = linalg.charpoly(A), linalg.charpoly_leibniz(A)
        assert all(a.agrees(b) for a, b in zip(fast, slow))


def test_kottwitz_counts_and_order():
    assert [len(iso.kottwitz_enumerate(h, 1)) for h in range(1, 9)] == list(range(1, 9))
    classes = iso.kottwitz_enumerate(4, 2)
    assert [str(c.slope_data) for c in classes] == [
        "{(0, 1), (1/2, 2), (1, 1)}", "{(0, 1), (2/3, 3)}", "{(0, 2), (1, 2)}",
        "{(1/3, 3), (1, 1)}", "{(1/2, 4)}"]
    assert all(c.in_b_prime for c in classes)


@pytest.mark.parametrize("h, d", [(3, 1), (4, 2), (5, 2), (6, 3)])
def test_kottwitz_matches_lattice_enumeration(h, d):
    ours = {c.slope_data.pairs for c in iso.kottwitz_enumerate(h, d)}
    assert ours == lattice_polygons(h, d)


@pytest.mark.parametrize("h", range(1, 7))
def test_kottwitz_duality(h):
    # slope lambda <-> 1 - lambda exchanges degree d and h - d
    for d in range(h + 1):
        a = {c.slope_data.pairs for c in iso.kottwitz_enumerate(h, d)}
        b = {tuple(sorted((1 - s, k) for s, k in c.slope_data.pairs))
             for c in iso.kottwitz_enumerate(h, h - d)}
        assert a == b


def test_slope_projection_rank():
    X = iso.block_companion(3, iso.SlopeData.from_json([[0, 1, 1], [1, 2, 2]]))
    assert iso.slope_projection_rank(X, 2, 1) == 2
    assert iso.slope_projection_rank(X, 1, 0) == 1


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3))
def test_newton_polygon_matches_brute_force(seed, p, n, m):
    rng = random.Random(seed)
    A = [[random_witt(rng, p, m, 12) for _ in range(n)] for _ in range(n)]
    if linalg.det(A).is_zero():
        return
    expected = brute_newton_slopes(A, p, m)
    X = iso.Isocrystal.from_matrix(p, m, A)
    if expected is None:
        with pytest.raises(PrecisionError):
            iso.newton_polygon(X)
    else:
        assert iso.newton_polygon(X).slopes() == expected


def test_sigma_conjugation_and_direct_sum():
    rng = random.Random(5)
    X = iso.Isocrystal.from_matrix(3, 2, [[0, 3], [1, 0]], 12)
    U = [[random_witt(rng, 3, 2, 12, max_val=0) for _ in range(2)] for _ in range(2)]
    if linalg.det(U).valuation == 0:
        assert iso.newton_polygon(X.sigma_conjugate(U)) == iso.newton_polygon(X)
    Y = X.direct_sum(iso.Isocrystal.from_matrix(3, 2, [[1]], 12))
    assert iso.newton_polygon(Y) == iso.SlopeData(((0, 1), (Fraction(1, 2), 2)))
