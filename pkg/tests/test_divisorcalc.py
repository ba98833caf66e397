from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import least_k_double_prime, least_k_prime, least_km_irrational, least_km_total
from treedfloer.divisorcalc import (
    ClassPairing,
    LatticePresentation,
    degree_ok,
    divisor_sphere_dim,
    intersection_from_area,
    km_irrational,
    km_rational,
    maslov_cover_check,
    max_tangency,
    resolve_ceiling,
    sufficient_degree,
    three_point_conclusion,
    weak_bound,
)


def rational_pres(n, omegas, t0=1, alpha=()):
    N = max(len(n), len(alpha))
    return LatticePresentation(N, t0, tuple(n), tuple((w, 0) for w in omegas), alpha=tuple(alpha))


def irrational_pres(n, ms, t0=1):
    return LatticePresentation(len(n), t0, tuple(n), tuple((0, m) for m in ms))


def test_km_rational_third_over_two():
    res = km_rational(rational_pres([2], [Fraction(1, 3)]))
    assert res.k_m == 6
    assert res.k_prime * res.k_double_prime == 6
    assert least_km_total(1, 1, [2], [Fraction(1, 3)]) == 6


def test_km_rational_integral_areas():
    res = km_rational(rational_pres([1, 1], [2, 5]))
    assert (res.k_prime, res.k_double_prime, res.k_m) == (1, 1, 1)


def test_adjusted_alpha_vanishes_on_boundary_basis():
    p = LatticePresentation(3, 1, (2, 3), ((Fraction(1, 2), 0), (1, 0)), alpha=(4, -1, Fraction(1, 3)))
    res = km_rational(p)
    assert res.adjusted_alpha == (0, 0, Fraction(1, 3))


def test_adjusted_alpha_rejects_fractional_values():
    p = LatticePresentation(1, 1, (1,), ((1, 0),), alpha=(Fraction(1, 2),))
    with pytest.raises(ValueError, match="not integral"):
        km_rational(p)


def test_km_rational_rejects_irrational_area():
    with pytest.raises(ValueError, match="non-rational"):
        km_rational(irrational_pres([1], [1]))


def test_km_irrational_examples():
    res = km_irrational(irrational_pres([2, 3], [1, 1]))
    assert res.k_m == 6 and res.l == (3, 2)
    res = km_irrational(irrational_pres([1], [5]))
    assert res.k_m == 1 and res.l == (5,)
    res = km_irrational(irrational_pres([6], [1]))
    assert res.k_m == 6
    assert res.intersections == ("6*C",)
    assert res.ceiling is None


def test_km_irrational_resolves_ceiling_from_interval():
    # e is somewhere in (1.41, 1.42); ceil(3e) = 5
    res = km_irrational(irrational_pres([6], [1], t0=3), 1, (Fraction(141, 100), Fraction(142, 100)))
    assert res.ceiling == 5
    assert res.intersections == ("30",)


def test_resolve_ceiling_refuses_wide_interval():
    with pytest.raises(ValueError, match="refine"):
        resolve_ceiling(2, (Fraction(1), Fraction(2)))


def test_km_irrational_rejects_nonpositive_areas():
    with pytest.raises(ValueError, match="areas must be positive"):
        km_irrational(irrational_pres([1], [-2]))


def test_weak_bound_examples():
    wb = weak_bound(1, 1, 1, 2, Fraction(1, 3), [3])
    assert wb.C_beta == 6
    assert wb.threshold == 13
    assert not wb.holds
    assert weak_bound(1, 13, 1, 2, Fraction(1, 3), [3]).holds
    assert weak_bound(1, 1, 0, 2, Fraction(1, 3), [3]).holds
    with pytest.raises(ValueError):
        weak_bound(1, 1, 1, 1, 1, [1])


def test_intersection_from_area():
    assert intersection_from_area("exact", 3, m0=2) == 6
    assert intersection_from_area("twisted", 1, t0k=5, alpha_boundary=2) == 3
    assert intersection_from_area("twisted", 0, t0k=5, alpha_boundary=0) == 0


@given(st.fractions(min_value=0, max_value=50), st.fractions(min_value=0, max_value=50), st.integers(1, 20))
def test_exact_intersection_linear_and_positive(a, b, m0):
    f = lambda x: intersection_from_area("exact", x, m0=m0)
    assert f(a + b) == f(a) + f(b)
    if a > 0:
        assert f(a) > 0


def test_sufficient_degree_examples():
    good = ClassPairing("sphere", 2, 11, dim=6, name="a")
    bad = ClassPairing("sphere", 2, 10, dim=6, name="b")
    disk0 = ClassPairing("disk", 0, 0, name="c")
    assert degree_ok(good) and not degree_ok(bad) and not degree_ok(disk0)
    assert sufficient_degree([good, bad, disk0]) == [bad, disk0]
    assert divisor_sphere_dim(good) == -17
    assert max_tangency(good) == 3
    assert three_point_conclusion(good)


def test_maslov_cover():
    assert maslov_cover_check(4, 2)
    assert not maslov_cover_check(3, 2)
    assert all(maslov_cover_check(1, c) for c in range(-3, 5))


# ---------------------------------------------------------------------------
# brute-force minimality


def random_rational(rng):
    M = rng.randint(1, 3)
    n = [rng.randint(1, 6) for _ in range(M)]
    om = [Fraction(rng.randint(1, 24), rng.randint(1, 12)) for _ in range(M)]
    return rng.randint(1, 4), rng.randint(1, 3), n, om


def test_km_rational_minimal_against_search():
    rng = random.Random(11)
    for _ in range(200):
        t0, k, n, om = random_rational(rng)
        res = km_rational(rational_pres(n, om, t0), k)
        assert res.k_prime == least_k_prime(t0, k, om)
        assert res.k_double_prime == least_k_double_prime(res.residues)
        assert res.k_m == least_km_total(t0, k, n, om)


def test_km_irrational_minimal_against_search():
    rng = random.Random(12)
    for _ in range(200):
        M = rng.randint(1, 4)
        n = [rng.randint(1, 12) for _ in range(M)]
        ms = [rng.randint(1, 12) for _ in range(M)]
        res = km_irrational(irrational_pres(n, ms))
        assert res.k_m == least_km_irrational(n, ms)
        assert all(l * ni == res.k_m * mi for l, ni, mi in zip(res.l, n, ms))


@settings(max_examples=300)
@given(st.integers(1, 40), st.integers(-10, 10), st.integers(1, 60), st.integers(1, 5))
def test_sufficient_degree_forces_negative_expdim(half_dim, c1, D, omega):
    # consistent: a class of positive area meets the divisor positively
    c = ClassPairing("sphere", c1, D, omega=omega, dim=2 * half_dim)
    if degree_ok(c):
        assert divisor_sphere_dim(c) < 0
        assert three_point_conclusion(c) == (D > 2 * max_tangency(c))


def test_presentation_json_round_trip():
    p = LatticePresentation(2, 3, (2, 5), ((Fraction(1, 3), 0), (0, 2)), m0=2, alpha=(1, Fraction(-1, 2)))
    assert LatticePresentation.from_json(p.to_json()) == p


def test_presentation_validation():
    with pytest.raises(ValueError):
        LatticePresentation(1, 0, (1,), ((1, 0),))
    with pytest.raises(ValueError):
        LatticePresentation(1, 1, (0,), ((1, 0),))
    with pytest.raises(ValueError):
        LatticePresentation(1, 1, (1, 1), ((1, 0), (1, 0)))
