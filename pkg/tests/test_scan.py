import math

import pytest

from spectral_riesz.scan import (DEFAULT_LEVEL_RANGE, GridPolicy, Series,
                                 figure, gap_extrema, w_grid)
from spectral_riesz.spaces import invert_w, sphere
from spectral_riesz.weyl import lclass_volume

EXPECTED_LAYOUT = {
    "f1": 4, "f2": 12, "f34": 6, "f4": 2, "f5": 2,
    "f6": 1, "f7": 3, "f8": 3, "f9": 4, "f10": 4,
}


@pytest.mark.parametrize("fig_id,count", sorted(EXPECTED_LAYOUT.items()))
def test_figure_series_layout(fig_id, count):
    series = figure(fig_id, resolution=6, l_max=12)
    assert len(series) == count
    for s in series:
        zs = [z for z, _ in s.points]
        assert zs == sorted(zs)
        assert all(math.isfinite(v) for _, v in s.points)


def test_unknown_figure_rejected():
    with pytest.raises(ValueError):
        figure("f11")


def test_figures_reproducible_bit_for_bit():
    a = figure("f5", resolution=10, l_max=15)
    b = figure("f5", resolution=10, l_max=15)
    assert a == b


def test_f1_lower_series_touches_zero_at_levels():
    s = next(s for s in figure("f1", 8, 12) if s.label == "r1_vs_lower")
    by_z = dict(s.points)
    for lam in (2.0, 6.0, 12.0, 20.0):
        assert by_z[lam] == 0.0
    # strictly positive off the levels
    assert all(v >= 0.0 for v in by_z.values())


def test_f2_panels_agree_exactly_on_overlaps():
    series = {s.label: dict(s.points) for s in figure("f2", 6, 16)}
    full = series["nd_vs_weyl:panel1"]
    for panel in ("nd_vs_weyl:panel2", "nd_vs_weyl:panel3",
                  "nd_vs_weyl:panel4"):
        for z, v in series[panel].items():
            assert full[z] == v


def test_f5_upper_series_nonpositive_and_vanishing_at_half_integer_w():
    s = next(s for s in figure("f5", 8, 40)
             if s.label == "r1_vs_shifted_upper")
    assert max(v for _, v in s.points) <= 0.0
    at_env = [abs(v) for z, v in s.points
              if abs(invert_w(3, z) % 1 - 0.5) < 1e-9 and z > 100]
    # decays like z^(-3/2) along the psi = 0 envelope
    assert at_env and at_env[-1] < 1e-6 and at_env[-1] < at_env[0] / 10


def test_f10_p4_series_crosses_zero_near_81():
    s = next(s for s in figure("f10", 40, 6) if "p4" in s.label)
    window = [(z, v) for z, v in s.points if 60 <= z <= 110]
    assert any(v1 * v2 < 0 for (_, v1), (_, v2) in zip(window, window[1:]))
    # and the z = 81 value itself is positive: 195 > 194.4
    verify = [v for z, v in s.points if abs(z - 81) < 2]
    assert all(v > 0 for v in verify)


def test_f9_series_cover_dimensions_2_to_5():
    labels = {s.label for s in figure("f9", 4, 8)}
    assert labels == {f"r1_bih_vs_weyl_d{d}" for d in (2, 3, 4, 5)}


@pytest.mark.parametrize("fig_id,pair", [
    ("f4", ("r1_vs_leading", "r1_vs_two_term")),
    ("f7", ("r1d_vs_weyl", "r1d_vs_three_term")),
    ("f8", ("r1n_vs_weyl", "r1n_vs_three_term")),
])
def test_expansion_series_decay_faster_than_leading(fig_id, pair):
    series = {s.label: s for s in figure(fig_id, 10, DEFAULT_LEVEL_RANGE)}
    lead_label, exp_label = pair
    zmax = series[lead_label].points[-1][0]
    top = lambda s: max(abs(v) for z, v in s.points if z >= zmax / 10)
    assert top(series[lead_label]) >= 10 * top(series[exp_label])


def test_f6_three_term_beats_leading_by_factor_ten():
    three = figure("f6", 10, DEFAULT_LEVEL_RANGE)[0]
    from spectral_riesz.riesz import SpectrumQuery, counting
    q = SpectrumQuery(sphere(3))
    lead = float(lclass_volume(sphere(3), 0))
    zmax = three.points[-1][0]
    lead_sup = max(abs(counting(q, z) / (lead * z ** 1.5) - 1)
                   for z, _ in three.points if z >= zmax / 10)
    exp_sup = max(abs(v) for z, v in three.points if z >= zmax / 10)
    assert lead_sup >= 10 * exp_sup


def test_series_invariants_enforced():
    with pytest.raises(ValueError):
        Series("bad", ((1.0, 0.0), (1.0, 1.0)), GridPolicy.UNIFORM_IN_Z)
    with pytest.raises(ValueError):
        Series("bad", ((1.0, math.nan),), GridPolicy.UNIFORM_IN_Z)


def test_gap_extrema_match_closed_form_maximizer():
    d = 3
    c = float(lclass_volume(sphere(d), 1))
    zd = d * (2 * d - 1) / 12
    for e in gap_extrema(sphere(d), [1, 7, 25], (c, d / 2 + 1, zd)):
        L = e.level
        predicted = L * (L + d) + 2 * zd / d     # rho_b - b
        assert e.z_star == pytest.approx(predicted, abs=1e-6 * predicted)
        assert e.is_unique
        assert e.ratio_star < 1.0


def test_gap_extrema_plain_weyl_reference_interior_maximum():
    d = 3
    c = float(lclass_volume(sphere(d), 1))
    (e,) = gap_extrema(sphere(d), [1], (c, d / 2 + 1, 0.0))
    assert 3.0 < e.z_star < 8.0
    assert e.is_unique and e.ratio_star > 1.0


def test_gap_extrema_empty_range():
    c = float(lclass_volume(sphere(3), 1))
    assert gap_extrema(sphere(3), [], (c, 2.5, 0.0)) == []


def test_gap_extrema_requires_sphere():
    from spectral_riesz.spaces import hemisphere_dirichlet
    with pytest.raises(ValueError):
        gap_extrema(hemisphere_dirichlet(3), [1], (1.0, 2.5, 0.0))


def test_w_grid_is_strictly_increasing():
    g = w_grid(3, 10, 16)
    assert g == sorted(set(g))
    assert g[0] == 0.0 and g[-1] == 10 * 12
