"""Figure-reproduction series and per-gap extremum scans.

Series are ratio-minus-one curves of the raw spectral quantities against
their bounds, Weyl terms or truncated expansions, on deterministic grids
(no randomness, fixed phases inside each level interval), so every value
is reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, List, Sequence, Tuple

from . import bounds
from .riesz import SpectrumQuery, riesz_mean, counting
from .spaces import Space, hemisphere_dirichlet, hemisphere_neumann, sphere
from .weyl import expansion, lclass_volume


class GridPolicy(Enum):
    UNIFORM_IN_Z = "uniform-in-z"
    UNIFORM_IN_W = "uniform-in-w"
    LEVELS_PLUS_MIDPOINTS = "levels-plus-midpoints"


@dataclass(frozen=True)
class Series:
    """One labelled curve: strictly increasing z, finite values only."""

    label: str
    points: Tuple[Tuple[float, float], ...]
    grid_policy: GridPolicy

    def __post_init__(self):
        zs = [z for z, _ in self.points]
        if any(b <= a for a, b in zip(zs, zs[1:])):
            raise ValueError("series grid must be strictly increasing")
        if any(not math.isfinite(v) for _, v in self.points):
            raise ValueError("series values must be finite")


@dataclass(frozen=True)
class GapExtremum:
    level: int
    z_star: float
    ratio_star: float
    is_unique: bool


DEFAULT_POINTS_PER_INTERVAL = 40
DEFAULT_LEVEL_RANGE = 60


def w_grid(d: int, l_max: int,
           per_interval: int = DEFAULT_POINTS_PER_INTERVAL) -> List[float]:
    """Uniform-in-w grid: fixed fluctuation phases in every level interval."""
    out = []
    for l in range(l_max):
        for k in range(per_interval):
            w = l + k / per_interval
            out.append(w * (w + d - 1))
    w = float(l_max)
    out.append(w * (w + d - 1))
    return out


def _series(label: str, zs: Sequence[float], ratio: Callable[[float], float],
            policy: GridPolicy = GridPolicy.UNIFORM_IN_W) -> Series:
    pts = tuple((float(z), ratio(float(z))) for z in zs if z > 0)
    return Series(label, pts, policy)


def _bound_ratio(query: SpectrumQuery, bound_id: str, prm: dict, side: str,
                 gamma: int = 1):
    def ratio(z: float) -> float:
        target = float(riesz_mean(query, gamma, z))
        ref = float(bounds.bound_value(bound_id, prm, z, side=side))
        return target / ref - 1.0
    return ratio


def _counting_ratio(query: SpectrumQuery, bound_id: str, prm: dict, side: str):
    def ratio(z: float) -> float:
        return counting(query, z) / float(
            bounds.bound_value(bound_id, prm, z, side=side)) - 1.0
    return ratio


def _expansion_ratio(space: Space, quantity: str, terms: int):
    q = SpectrumQuery(space)
    def ratio(z: float) -> float:
        approx = expansion(space, quantity, z, terms).value
        raw = counting(q, z) if quantity == "N" else float(riesz_mean(q, 1, z))
        return raw / approx - 1.0
    return ratio


def _weyl_ratio_power(q: SpectrumQuery, const: float, exponent: float,
                      drop_zero_level: bool = False):
    def ratio(z: float) -> float:
        raw = float(riesz_mean(q, 1, z))
        if drop_zero_level:
            raw -= z
        return raw / (const * z ** exponent) - 1.0
    return ratio


def figure(fig_id: str, resolution: int = DEFAULT_POINTS_PER_INTERVAL,
           l_max: int = DEFAULT_LEVEL_RANGE) -> List[Series]:
    """Data series behind the ten figures; see the builder for each layout.

    resolution is the number of grid points per level interval (uniform in
    the auxiliary variable w); ranges default to z in (0, lambda_(l_max)].
    """
    builders = {
        "f1": _figure_f1, "f2": _figure_f2, "f34": _figure_f34,
        "f4": _figure_f4, "f5": _figure_f5, "f6": _figure_f6,
        "f7": _figure_f7, "f8": _figure_f8, "f9": _figure_f9,
        "f10": _figure_f10,
    }
    if fig_id not in builders:
        raise ValueError(f"unknown figure id {fig_id!r}; "
                         f"valid: {', '.join(sorted(builders))}")
    return builders[fig_id](resolution, l_max)


def _figure_f1(res, l_max):
    # S^2: R1 against the plain and the improved two-sided bounds.
    zs = w_grid(2, l_max, res)
    q = SpectrumQuery(sphere(2))
    return [
        _series("r1_vs_upper", zs, _bound_ratio(q, "s2.r1.upper", {}, "upper")),
        _series("r1_vs_lower", zs, _bound_ratio(q, "s2.r1.lower", {}, "lower")),
        _series("r1_vs_upper_improved", zs,
                _bound_ratio(q, "s2.r1.upper.imp", {}, "upper")),
        _series("r1_vs_lower_improved", zs,
                _bound_ratio(q, "s2.r1.lower.imp", {}, "lower")),
    ]


def _figure_f2(res, l_max):
    # S^2_+ Dirichlet counting: Weyl term and the two-sided bound, the
    # same series over four nested zoom ranges (identical overlaps).
    q = SpectrumQuery(hemisphere_dirichlet(2))
    zs = w_grid(2, l_max, res)
    base = [
        ("nd_vs_weyl", _counting_ratio(q, "hemi2.nd.polya", {}, "upper")),
        ("nd_vs_upper", _counting_ratio(q, "hemi2.nd.twosided", {}, "upper")),
        ("nd_vs_lower", _counting_ratio(q, "hemi2.nd.twosided", {}, "lower")),
    ]
    panels = [l_max, l_max // 2, l_max // 4, l_max // 8]
    out = []
    for i, lcap in enumerate(panels, start=1):
        zcap = float(lcap * (lcap + 1))
        sub = [z for z in zs if z <= zcap]
        for label, fn in base:
            out.append(_series(f"{label}:panel{i}", sub, fn))
    return out


def _figure_f34(res, l_max):
    qd = SpectrumQuery(hemisphere_dirichlet(2))
    qn = SpectrumQuery(hemisphere_neumann(2))
    zs = w_grid(2, l_max, res)
    weyl_d = _weyl_ratio_power(qd, 0.25, 2.0)
    weyl_n = _weyl_ratio_power(qn, 0.25, 2.0)
    return [
        _series("r1d_vs_weyl", zs, weyl_d),
        _series("r1d_vs_upper", zs, _bound_ratio(qd, "hemi2.r1d.upper", {}, "upper")),
        _series("r1d_vs_lower", [z for z in zs if z > 2],
                _bound_ratio(qd, "hemi2.r1d.lower", {}, "lower")),
        _series("r1n_vs_weyl", zs, weyl_n),
        _series("r1n_vs_upper", zs, _bound_ratio(qn, "hemi2.r1n.upper", {}, "upper")),
        _series("r1n_vs_lower", [z for z in zs if z > 2],
                _bound_ratio(qn, "hemi2.r1n.lower", {}, "lower")),
    ]


def _figure_f4(res, l_max):
    zs = w_grid(3, l_max, res)
    sp3 = sphere(3)
    return [
        _series("r1_vs_leading", zs, _expansion_ratio(sp3, "R1", 1)),
        _series("r1_vs_two_term", zs, _expansion_ratio(sp3, "R1", 2)),
    ]


def _figure_f5(res, l_max):
    zs = w_grid(3, l_max, res)
    q = SpectrumQuery(sphere(3))
    return [
        _series("r1_vs_shifted_upper", zs,
                _bound_ratio(q, "sd.r1.upper.shift", {"d": 3}, "upper")),
        _series("r1_vs_shifted_lower", zs,
                _bound_ratio(q, "sd.r1.lower.shift", {"d": 3}, "lower")),
    ]


def _figure_f6(res, l_max):
    zs = w_grid(3, l_max, res)
    return [_series("n_vs_three_term", zs, _expansion_ratio(sphere(3), "N", 3))]


def _figure_f7(res, l_max):
    zs = w_grid(3, l_max, res)
    hd = hemisphere_dirichlet(3)
    qd = SpectrumQuery(hd)
    lead = float(lclass_volume(hd, 1))
    return [
        _series("nd_vs_three_term", [z for z in zs if z > 3],
                _expansion_ratio(hd, "N", 3)),
        _series("r1d_vs_weyl", [z for z in zs if z > 3],
                _weyl_ratio_power(qd, lead, 2.5)),
        _series("r1d_vs_three_term", [z for z in zs if z > 3],
                _expansion_ratio(hd, "R1", 3)),
    ]


def _figure_f8(res, l_max):
    zs = w_grid(3, l_max, res)
    hn = hemisphere_neumann(3)
    qn = SpectrumQuery(hn)
    lead = float(lclass_volume(hn, 1))
    return [
        _series("nn_vs_three_term", zs, _expansion_ratio(hn, "N", 3)),
        _series("r1n_vs_weyl", zs, _weyl_ratio_power(qn, lead, 2.5)),
        _series("r1n_vs_three_term", zs, _expansion_ratio(hn, "R1", 3)),
    ]


def _figure_f9(res, l_max):
    out = []
    for d in (2, 3, 4, 5):
        q = SpectrumQuery(sphere(d), power=2)
        lead = float(lclass_volume(sphere(d), 1, 2))
        zs = [z * z for z in w_grid(d, l_max, res)]
        out.append(_series(f"r1_bih_vs_weyl_d{d}", zs,
                           _weyl_ratio_power(q, lead, 1 + d / 4)))
    return out


def _figure_f10(res, l_max):
    out = []
    for p in (2, 3, 4, 5):
        q = SpectrumQuery(sphere(2), power=p)
        lead = float(lclass_volume(sphere(2), 1, p))
        zs = [z ** p for z in w_grid(2, l_max, res)]
        out.append(_series(f"r1_p{p}_minus_z_vs_weyl", zs,
                           _weyl_ratio_power(q, lead, 1 + 1 / p,
                                             drop_zero_level=True)))
    return out


# ---------------------------------------------------------------------------
# Per-gap extrema


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                tol: float) -> Tuple[float, float]:
    invphi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c1 = b - (b - a) * invphi
    c2 = a + (b - a) * invphi
    f1, f2 = f(c1), f(c2)
    while b - a > tol:
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + (b - a) * invphi
            f2 = f(c2)
        else:
            b, c2, f2 = c2, c1, f1
            c1 = b - (b - a) * invphi
            f1 = f(c1)
    z = (a + b) / 2
    return z, f(z)


def gap_extrema(space: Space, l_range: Sequence[int],
                reference: Tuple[float, float, float],
                quantity: str = "R1", power: int = 1,
                subgrid: int = 256) -> List[GapExtremum]:
    """Maximum of quantity / (C (z+b)^q) inside each level gap.

    reference = (C, q, b).  Golden-section localization to
    |dz| <= 1e-10 lambda_(l+1); uniqueness certified by counting the sign
    changes of the numerical derivative over a 256-point subgrid.
    """
    from .spaces import Family
    if space.family is not Family.SPHERE:
        raise ValueError("gap extrema scans expect a sphere")
    c_ref, q_ref, b_ref = reference
    q = SpectrumQuery(space, power=power)
    if quantity != "R1":
        raise ValueError("gap extrema are defined for R1 scans")

    def ratio(z: float) -> float:
        return float(riesz_mean(q, 1, z)) / (c_ref * (z + b_ref) ** q_ref)

    out = []
    for l in l_range:
        lo = float(q.level_value(l))
        hi = float(q.level_value(l + 1))
        z_star, r_star = _golden_max(ratio, lo, hi, 1e-10 * hi)
        values = [ratio(lo + (hi - lo) * i / subgrid) for i in range(subgrid + 1)]
        diffs = [b - a for a, b in zip(values, values[1:])]
        signs = [d for d in diffs if d != 0.0]
        changes = sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)
        out.append(GapExtremum(l, z_star, r_star, changes == 1))
    return out
