import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectral_riesz.riesz import (SpectrumQuery, Variant, counting,
                                  counting_closed_hemisphere_dirichlet,
                                  counting_closed_hemisphere_neumann,
                                  counting_closed_sphere, eigenvalue_average,
                                  lemma_sum, max_level_index_pow,
                                  nth_eigenvalue, poly_transform_check,
                                  prefix_sums, riesz1_closed_sphere,
                                  riesz_mean)
from spectral_riesz.spaces import (hemisphere_dirichlet, hemisphere_neumann,
                                   max_level_index, sphere)

S2 = SpectrumQuery(sphere(2))
S3 = SpectrumQuery(sphere(3))

rational_z = st.fractions(min_value=0, max_value=2000)


def test_counting_examples():
    assert counting(S2, 6) == 9
    assert counting(SpectrumQuery(hemisphere_dirichlet(2)), 2) == 1
    assert counting(S2, -1) == 0
    assert counting(SpectrumQuery(hemisphere_neumann(2)), 2) == 3


def test_counting_polya_equality_on_hemisphere():
    # N^D(2) = 1 equals the Polya bound z/2 at z = 2.
    assert counting(SpectrumQuery(hemisphere_dirichlet(2)), 2) == Fraction(2, 2)


def test_riesz_mean_examples():
    assert riesz_mean(S2, 1, 2) == 2            # equals z^2/2 at a level
    assert riesz_mean(S3, 1, 3) == 3
    assert riesz_mean(SpectrumQuery(sphere(1)), 1, 1) == 1
    assert riesz_mean(SpectrumQuery(sphere(2), power=4), 1, 81) == 276
    assert riesz_mean(SpectrumQuery(sphere(2), power=4), 1, 81) - 81 == 195


def test_riesz_mean_gamma_two():
    assert riesz_mean(S3, 2, 3) == 9
    # exact rational path
    z = Fraction(7, 2)
    r2 = riesz_mean(S2, 2, z)
    assert r2 == (z - 0) ** 2 + 3 * (z - 2) ** 2


def test_riesz1_closed_sphere_examples():
    assert riesz1_closed_sphere(2, 3.75) == 9
    assert riesz1_closed_sphere(3, 3) == 3
    assert riesz1_closed_sphere(2, 0) == 0


@given(st.integers(1, 8), rational_z)
@settings(max_examples=200, deadline=None)
def test_sphere_closed_form_matches_brute_force_exactly(d, z):
    q = SpectrumQuery(sphere(d))
    assert riesz1_closed_sphere(d, z) == riesz_mean(q, 1, z)


@given(st.integers(2, 8), rational_z)
@settings(max_examples=200, deadline=None)
def test_hemisphere_counting_closed_forms(d, z):
    qd = SpectrumQuery(hemisphere_dirichlet(d))
    qn = SpectrumQuery(hemisphere_neumann(d))
    ld = max_level_index(hemisphere_dirichlet(d), z)
    ln = max_level_index(hemisphere_neumann(d), z)
    assert counting(qd, z) == counting_closed_hemisphere_dirichlet(d, ld)
    assert counting(qn, z) == counting_closed_hemisphere_neumann(d, ln)
    assert counting(SpectrumQuery(sphere(d)), z) \
        == counting_closed_sphere(d, ln)


@given(st.integers(1, 6), rational_z)
@settings(max_examples=150, deadline=None)
def test_float_path_within_1e12_of_rational(d, z):
    q = SpectrumQuery(sphere(d))
    exact = riesz_mean(q, 1, z)
    if exact == 0:
        return
    approx = riesz_mean(q, 1, float(z))
    assert abs(approx / float(exact) - 1) <= 1e-12


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_hemisphere_counting_identities(d):
    # N^N(w(w+d-1)) = (floor(w)+d)/floor(w) N^D(same) and
    # N^N(w(w+d-1)) = N^D((w+1)(w+d)) for integer and non-integer w.
    qd = SpectrumQuery(hemisphere_dirichlet(d))
    qn = SpectrumQuery(hemisphere_neumann(d))
    for w in [Fraction(1), Fraction(3, 2), Fraction(2), Fraction(17, 5),
              Fraction(7), Fraction(29, 4), Fraction(12)]:
        z = w * (w + d - 1)
        nn = counting(qn, z)
        nd = counting(qd, z)
        fl = math.floor(w)
        assert nn * fl == (fl + d) * nd
        assert nn == counting(qd, (w + 1) * (w + d))


@given(rational_z, rational_z)
@settings(max_examples=100, deadline=None)
def test_monotone_in_z(z1, z2):
    lo, hi = min(z1, z2), max(z1, z2)
    assert counting(S2, lo) <= counting(S2, hi)
    assert riesz_mean(S2, 1, lo) <= riesz_mean(S2, 1, hi)
    assert riesz_mean(S2, 2, lo) <= riesz_mean(S2, 2, hi)


@given(rational_z, rational_z)
@settings(max_examples=100, deadline=None)
def test_r1_midpoint_convexity(z1, z2):
    mid = (z1 + z2) / 2
    assert riesz_mean(S2, 1, mid) * 2 <= riesz_mean(S2, 1, z1) \
        + riesz_mean(S2, 1, z2)


def test_r2_is_c1_at_breakpoints():
    # One-sided difference quotients of R_2 agree at the energy levels
    # (d/dz R_2 = 2 R_1 is continuous); exact rational arithmetic.
    h = Fraction(1, 10 ** 10)
    for l in range(1, 12):
        lam = l * (l + 1)
        left = (riesz_mean(S2, 2, lam) - riesz_mean(S2, 2, lam - h)) / h
        right = (riesz_mean(S2, 2, lam + h) - riesz_mean(S2, 2, lam)) / h
        assert abs(float(right - left) / float(left)) <= 1e-9


def test_r2_derivative_is_twice_r1():
    # Central difference inside one linearity interval is exact.
    h = Fraction(1, 100)
    for z in [Fraction(5), Fraction(25, 2), Fraction(33)]:
        central = (riesz_mean(S2, 2, z + h) - riesz_mean(S2, 2, z - h)) / (2 * h)
        assert central == 2 * riesz_mean(S2, 1, z)


def test_buckling_spectrum_drops_only_the_zero_mode():
    qb = SpectrumQuery(sphere(2), variant=Variant.BUCKLING)
    for z in [0, Fraction(1, 2), 2, 5, 30, 200]:
        assert counting(qb, z) == counting(S2, z) - 1
    with pytest.raises(ValueError):
        SpectrumQuery(hemisphere_dirichlet(2), variant=Variant.BUCKLING)


def test_lemma_sum_examples():
    assert lemma_sum(1, 2) == 0
    assert lemma_sum(1, 6) == 12
    assert lemma_sum(4, 81) == 195


def test_lemma_sum_is_buckling_riesz_mean():
    for p in (1, 2, 3, 5):
        q = SpectrumQuery(sphere(2), power=p, variant=Variant.BUCKLING)
        for z in (Fraction(11, 2), 40, 1000):
            assert lemma_sum(p, z) == riesz_mean(q, 1, z)


def test_eigenvalue_average_examples():
    assert eigenvalue_average(S2, 1) == 0
    assert eigenvalue_average(S2, 4) == Fraction(6, 4)
    assert eigenvalue_average(S3, 5) == Fraction(12, 5)
    with pytest.raises(ValueError):
        eigenvalue_average(S2, 0)


def test_prefix_sums_match_flattened_spectrum():
    q = SpectrumQuery(sphere(2))
    flat = []
    l = 0
    while len(flat) < 60:
        lam = l * (l + 1)
        flat.extend([lam] * (2 * l + 1))
        l += 1
    for k in (1, 2, 4, 9, 10, 25, 59):
        ps = prefix_sums(q, k)
        assert ps.sum1 == sum(flat[:k])
        assert ps.sum2 == sum(v * v for v in flat[:k])
        assert nth_eigenvalue(q, k) == flat[k - 1]


def test_prefix_sums_nondecreasing():
    vals = [prefix_sums(S3, k) for k in range(1, 40)]
    assert all(a.sum1 <= b.sum1 and a.sum2 <= b.sum2
               for a, b in zip(vals, vals[1:]))


def test_poly_transform_examples():
    assert poly_transform_check(2, 2, 2) == 0
    # both sides of the first identity equal 4 at d=2, p=2, z=2
    assert riesz_mean(SpectrumQuery(sphere(2), power=2), 1, 4) == 4
    assert poly_transform_check(3, 2, 0) == 0
    assert poly_transform_check(2, 3, 6) <= Fraction(1, 10 ** 10)


@given(st.integers(2, 3), st.integers(2, 4),
       st.fractions(min_value=0, max_value=600))
@settings(max_examples=100, deadline=None)
def test_poly_transform_residual_zero_on_rationals(d, p, z):
    lhs = riesz_mean(SpectrumQuery(sphere(d), power=p), 1, z ** p)
    assert poly_transform_check(d, p, z) <= Fraction(1, 10 ** 10) * (1 + lhs)


def test_max_level_index_pow():
    q = SpectrumQuery(sphere(2), power=3)
    assert max_level_index_pow(q, 8) == 1          # 2^3 = 8 inclusive
    assert max_level_index_pow(q, 7.9) == 0
    assert max_level_index_pow(SpectrumQuery(hemisphere_dirichlet(2)), 1) is None


def test_level_cap_is_enforced():
    with pytest.raises(ValueError):
        counting(S2, 10 ** 9, level_cap=100)
