import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spectral_riesz.spaces import (Family, Space, hemisphere_dirichlet,
                                   hemisphere_neumann, sphere)
from spectral_riesz.weyl import (expansion, expansion_coefficients,
                                 gamma_asymptotic_check, gamma_exact_half,
                                 gamma_real, lclass, lclass_boundary_volume,
                                 lclass_volume, pab, pab_inverse, pab_product,
                                 pab_shifted, snapped_fluctuation, volumes)


def test_lclass_volume_paper_values():
    assert lclass_volume(sphere(2), 1) == Fraction(1, 2)
    assert lclass_volume(sphere(3), 0) == Fraction(1, 3)
    assert lclass_volume(sphere(2), 1, 4) == Fraction(4, 5)


def test_constant_identities_exact_up_to_d16():
    for d in range(1, 17):
        fact = math.factorial(d)
        assert lclass_volume(sphere(d), 0) == Fraction(2, fact)
        assert lclass_volume(sphere(d), 1) == Fraction(4, (d + 2) * fact)
        assert lclass_volume(sphere(d), 2) \
            == Fraction(16, (d + 2) * (d + 4) * fact)


def test_lclass_matches_float_gamma_formula():
    for gamma, d, p in [(0, 3, 1), (1, 5, 1), (2, 4, 1), (1, 2, 4),
                        (1, 3, 2), (2, 7, 3)]:
        got = lclass(gamma, d, p).value
        want = ((4 * math.pi) ** (-d / 2) * math.gamma(gamma + 1)
                * math.gamma(1 + d / (2 * p))
                / (math.gamma(1 + d / 2) * math.gamma(1 + gamma + d / (2 * p))))
        assert abs(got / want - 1) < 1e-14


def test_lclass_times_sphere_volume_consistency():
    for d in (1, 2, 3, 5, 8):
        for gamma in (0, 1, 2):
            lhs = lclass(gamma, d).value * float(volumes(d).sphere)
            assert abs(lhs / float(lclass_volume(sphere(d), gamma)) - 1) < 1e-14


def test_volumes_examples():
    v2 = volumes(2)
    assert (float(v2.sphere), float(v2.hemisphere), float(v2.boundary),
            float(v2.ball)) == (4 * math.pi, 2 * math.pi, 2 * math.pi,
                                math.pi)
    v1 = volumes(1)
    assert float(v1.sphere) == 2 * math.pi
    assert v1.hemisphere is None and v1.boundary is None
    assert float(v1.ball) == 2.0
    v3 = volumes(3)
    assert abs(float(v3.sphere) - 2 * math.pi ** 2) < 1e-14
    assert abs(float(v3.boundary) - 4 * math.pi) < 1e-14
    assert abs(float(v3.ball) - 4 * math.pi / 3) < 1e-14


def test_gamma_exact_half():
    assert gamma_exact_half(12).as_fraction() == math.factorial(5)
    g = gamma_exact_half(7)  # Gamma(7/2) = 15/8 sqrt(pi)
    assert g.coef == Fraction(15, 8) and g.pi_halves == 1
    assert gamma_real(6.0) == 120.0


def test_hemisphere_surface_coefficient_is_rational():
    # (1/4) L_{1,d-1}|bd S^d_+| / (L_{1,d}|S^d_+|) = d(d+2)/(2(d+1))
    for d in range(2, 9):
        ratio = Fraction(1, 4) * lclass_boundary_volume(d, 1) \
            / lclass_volume(hemisphere_dirichlet(d), 1)
        assert ratio == Fraction(d * (d + 2), 2 * (d + 1))


# ---------------------------------------------------------------------------
# Expansions


def test_expansion_leading_term_only():
    for space, quantity in [(sphere(3), "N"), (sphere(3), "R1"),
                            (hemisphere_dirichlet(4), "N"),
                            (hemisphere_neumann(4), "R1")]:
        ev = expansion(space, quantity, 500.0, 1)
        lead = float(lclass_volume(space, 0 if quantity == "N" else 1))
        expo = space.dim / 2 + (0 if quantity == "N" else 1)
        assert ev.ratio == 1.0
        assert ev.value == pytest.approx(lead * 500.0 ** expo, rel=1e-15)


def test_sphere_r1_second_term_vanishes_at_levels_when_d2():
    # psi = -1/2 at integer w kills the d = 2 bracket entirely.
    z = 30  # lambda_(5) on S^2
    ev = expansion(sphere(2), "R1", z, 2)
    assert ev.ratio == 1.0


def test_hemisphere_nd_two_term_example():
    z = 3.75  # w = 1.5, psi = 0
    ev = expansion(hemisphere_dirichlet(2), "N", z, 2)
    assert ev.value == pytest.approx(z / 2 * (1 - z ** -0.5), rel=1e-15)


def test_expansion_bad_requests():
    with pytest.raises(ValueError):
        expansion(Space(Family.REAL_PROJECTIVE, 3), "N", 10.0, 2)
    with pytest.raises(ValueError):
        expansion(sphere(2), "R1", 10.0, 3)   # two-term theorem only
    with pytest.raises(ValueError):
        expansion(sphere(2), "R2", 10.0, 1)
    with pytest.raises(ValueError):
        expansion(sphere(2), "N", 0.0, 1)


def test_remainder_scale_below_last_retained_power():
    last_power = {1: 0.0, 2: -0.5, 3: -1.0}
    for terms in (1, 2, 3):
        ev = expansion(hemisphere_dirichlet(3), "N", 100.0, terms)
        assert ev.remainder_scale < last_power[terms]
    ev = expansion(sphere(3), "R1", 100.0, 2)
    assert ev.remainder_scale == -1.25


@given(st.integers(2, 8),
       st.floats(min_value=-0.5, max_value=0.4999))
@settings(max_examples=100)
def test_dirichlet_neumann_coefficient_symmetry(d, psi):
    # z^(-1/2) coefficients exact negatives, z^(-1) coefficients identical.
    _, ch_d, c1_d, _, _ = expansion_coefficients(
        hemisphere_dirichlet(d), "R1", psi)
    _, ch_n, c1_n, _, _ = expansion_coefficients(
        hemisphere_neumann(d), "R1", psi)
    assert ch_d == -ch_n
    assert c1_d == c1_n


@given(st.integers(2, 8),
       st.floats(min_value=-0.5, max_value=0.4999))
@settings(max_examples=100)
def test_sphere_counting_coefficients_decompose(d, psi):
    # N = N^D + N^N level by level, so the sphere bracket is the average
    # of the two hemisphere brackets (the leading terms halve).
    lead_s, ch_s, c1_s, _, _ = expansion_coefficients(sphere(d), "N", psi)
    lead_d, ch_d, c1_d, _, _ = expansion_coefficients(
        hemisphere_dirichlet(d), "N", psi)
    lead_n, ch_n, c1_n, _, _ = expansion_coefficients(
        hemisphere_neumann(d), "N", psi)
    assert lead_s == lead_d + lead_n
    assert abs(ch_s - (ch_d + ch_n) / 2) < 1e-12
    assert abs(c1_s - (c1_d + c1_n) / 2) < 1e-12


def test_snapped_fluctuation():
    assert snapped_fluctuation(5.0) == -0.5
    assert snapped_fluctuation(5.0 + 2 * math.ulp(5.0)) == -0.5
    assert snapped_fluctuation(5.0 - 2 * math.ulp(5.0)) == -0.5
    assert snapped_fluctuation(5.25) == -0.25


# ---------------------------------------------------------------------------
# Appendix utilities


def test_pab_examples():
    assert pab(0, 0, 0.37) == 1.0
    assert pab(2, 3, Fraction(1, 2)) == Fraction(11, 4)
    assert pab_product([(1, 0), (-1, 0)]) == (0, -1)
    assert pab_product([(Fraction(1, 12), Fraction(1, 288))]) \
        == (Fraction(1, 12), Fraction(1, 288))


def test_pab_inverse_and_shift():
    a, b = pab_inverse(Fraction(1, 12), Fraction(1, 288))
    assert (a, b) == (Fraction(-1, 12), Fraction(1, 288))
    a, b = pab_shifted(Fraction(1, 12), Fraction(1, 288), 3)
    assert (a, b) == (Fraction(1, 12), Fraction(1, 288) - Fraction(1, 4))


def test_pab_product_drops_third_order_only():
    # Exact check through order x^2 against the literal product.
    pairs = [(Fraction(1, 3), Fraction(2, 5)), (Fraction(-1, 2), Fraction(1, 7)),
             (Fraction(2), Fraction(-3))]
    a, bc = pab_product(pairs)
    x = Fraction(1, 97)
    literal = Fraction(1)
    for ai, bi in pairs:
        literal *= pab(ai, bi, x)
    truncated = pab(a, bc, x)
    diff = literal - truncated
    assert abs(diff) <= 3 * x ** 3  # bounded cubic remainder


def test_gamma_asymptotic_check():
    rep = gamma_asymptotic_check([10.0, 20.0, 50.0, 100.0])
    assert rep.max_scaled_deviation < 1.0
    devs = dict(rep.deviations)
    assert devs[100.0] < devs[10.0]
    # the scaled deviation tends to the third Stirling coefficient
    assert rep.max_scaled_deviation == pytest.approx(139 / 51840, rel=0.05)
    with pytest.raises(ValueError):
        gamma_asymptotic_check([2.0])
