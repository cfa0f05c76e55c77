"""Catalog of the sharp spectral bounds, with verification machinery.

Every inequality is a catalog entry: an id, the spectrum it constrains,
one or two sides with closed-form evaluators, recorded equality points,
and an expected_valid flag.  Entries with expected_valid=False reproduce
documented counterexamples and must exhibit at least one violation.

Evaluators accept int/Fraction arguments and stay exact whenever the
closed form is rational (square roots of perfect rational squares
included), so recorded equality points test with slack exactly zero.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .riesz import (SpectrumQuery, Variant, counting, eigenvalue_average,
                    riesz_mean)
from .spaces import (DEFAULT_LEVEL_CAP, Real, Space, fluctuation,
                     hemisphere_dirichlet, hemisphere_neumann, invert_w,
                     sphere)
from .weyl import lclass, lclass_volume

# ---------------------------------------------------------------------------
# Exactness-preserving numeric helpers


def _isqrt_if_square(n: int) -> Optional[int]:
    r = math.isqrt(n)
    return r if r * r == n else None


def _sqrt(x):
    """Square root; Fraction in, Fraction out when x is a perfect square."""
    if isinstance(x, float):
        return math.sqrt(x)
    xq = Fraction(x)
    rn = _isqrt_if_square(xq.numerator)
    rd = _isqrt_if_square(xq.denominator)
    if rn is not None and rd is not None:
        return Fraction(rn, rd)
    return math.sqrt(xq)


def _pow_half(x, halves: int):
    """x^(halves/2), exact when possible."""
    if halves % 2 == 0:
        return x ** (halves // 2)
    s = _sqrt(x)
    if isinstance(s, float):
        return float(x) ** (halves / 2.0)
    return x ** (halves // 2) * s


def _integer_nth_root(m: int, n: int) -> int:
    """floor(m^(1/n)) by integer Newton iteration (no float overflow)."""
    if m < 2:
        return m
    r = 1 << -(-m.bit_length() // n)  # >= m^(1/n)
    while True:
        nr = ((n - 1) * r + m // r ** (n - 1)) // n
        if nr >= r:
            return r
        r = nr


def _nth_root(x, n: int):
    """x^(1/n); Fraction in, Fraction out when x is a perfect n-th power."""
    if isinstance(x, float):
        return x ** (1.0 / n)
    xq = Fraction(x)
    rn = _integer_nth_root(xq.numerator, n)
    rd = _integer_nth_root(xq.denominator, n)
    if rn ** n == xq.numerator and rd ** n == xq.denominator:
        return Fraction(rn, rd)
    return float(xq) ** (1.0 / n)


def _w_of(d: int, z):
    """w with w(w+d-1) = z; exact Fraction when the discriminant is square."""
    if not isinstance(z, float):
        disc = (d - 1) ** 2 + 4 * Fraction(z)
        r = _sqrt(disc)
        if not isinstance(r, float):
            return (r - (d - 1)) / 2
    return invert_w(d, float(z))


def _psi_of(d: int, z):
    return fluctuation(_w_of(d, z))


def _q(x) -> Fraction:
    return Fraction(x)


def _normalize_arg(z):
    # Ints must ride the exact path: a bare int would hit float division.
    return Fraction(z) if isinstance(z, int) else z


# ---------------------------------------------------------------------------
# Catalog data model


@dataclass(frozen=True)
class SideRule:
    side: str  # 'lower' or 'upper'
    evaluate: Callable


@dataclass(frozen=True)
class BoundSpec:
    id: str
    title: str
    quantity: str  # 'N' | 'R1' | 'R2' | 'average'
    query: Callable[[dict], SpectrumQuery]
    sides: Tuple[SideRule, ...]
    validate: Callable[[dict], dict]
    expected_valid: bool = True
    equality: Optional[Callable[[dict, int], list]] = None
    equality_side: Optional[str] = None  # None: applies to every side
    witnesses: Optional[Callable[[dict, float], list]] = None
    power_shift: Optional[Callable[[dict], Tuple[float, float, float]]] = None
    notes: str = ""

    @property
    def side_names(self):
        return tuple(s.side for s in self.sides)


_CATALOG: Dict[str, BoundSpec] = {}
_ALIASES: Dict[str, str] = {}


def _register(spec: BoundSpec, *aliases: str):
    _CATALOG[spec.id] = spec
    for a in aliases:
        _ALIASES[a] = spec.id


def catalog() -> Dict[str, BoundSpec]:
    return dict(_CATALOG)


def get(bound_id: str) -> BoundSpec:
    key = _ALIASES.get(bound_id, bound_id)
    if key not in _CATALOG:
        known = ", ".join(sorted(_CATALOG))
        raise KeyError(f"unknown bound id {bound_id!r}; known ids: {known}")
    return _CATALOG[key]


# ---------------------------------------------------------------------------
# Parameter validators


def _no_params(defaults: dict = {}):
    def validate(params: dict) -> dict:
        out = dict(defaults)
        extra = set(params) - set(defaults)
        if extra:
            raise ValueError(f"unexpected parameters {sorted(extra)}")
        out.update({k: params[k] for k in params})
        return out
    return validate


def _with_d(dmin: int, dmax: Optional[int] = None, extra: dict = {}):
    def validate(params: dict) -> dict:
        out = {"d": None, **extra}
        out.update(params)
        d = out.get("d")
        if d is None:
            raise ValueError("parameter d is required")
        if d < dmin or (dmax is not None and d > dmax):
            hi = dmax if dmax is not None else "inf"
            raise ValueError(f"d={d} outside declared range [{dmin}, {hi}]")
        unknown = set(out) - {"d", *extra}
        if unknown:
            raise ValueError(f"unexpected parameters {sorted(unknown)}")
        return out
    return validate


def _area_validator(full_area: Callable[[dict], float], base):
    def validate(params: dict) -> dict:
        out = base(dict((k, v) for k, v in params.items() if k != "area"))
        area = params.get("area")
        if area is None:
            area = full_area(out)
        area = float(area)
        if not 0 <= area <= full_area(out) * (1 + 1e-12):
            raise ValueError(f"area {area} outside [0, {full_area(out)}]")
        out["area"] = area
        return out
    return validate


# ---------------------------------------------------------------------------
# Shared formula pieces

_SQRT_PI = math.pi ** 0.5


def _zd(d: int) -> Fraction:
    return Fraction(d * (2 * d - 1), 12)


def _bd(d: int) -> Fraction:
    return Fraction(d * (d - 2), 6)


def _sphere_levels(l_hi: int, base=0):
    return [l * (l + 1) for l in range(base, l_hi)]


def _upper_env_points(count: int):
    # z = (l+1)^2 - 1/2, the S^2 upper-bound equality family.
    return [Fraction(2 * (l + 1) ** 2 - 1, 2) for l in range(count)]


def optimal_shift(d: int, l: int) -> float:
    """Per-gap optimal shift b(l) -> z_d as l -> infinity.

    b(l) = d/(d+2) (4^(-1/d) ((d+2l)(d+l-1)!/l!)^(2/d) - l(l+d)).
    """
    if d < 2 or l < 1:
        raise ValueError("need d >= 2, l >= 1")
    x = (d + 2 * l) * math.prod(range(l + 1, l + d))
    val = _nth_root(Fraction(x * x, 4), d)
    return float(Fraction(d, d + 2) * (_q(val) - l * (l + d))) \
        if isinstance(val, Fraction) else d / (d + 2) * (val - l * (l + d))


@dataclass(frozen=True)
class Bly345Diagnostics:
    """Interior-maximum diagnostics of the hemisphere gap ratio, any d >= 2.

    The Berezin-Li-Yau check on S^d_+ reduces to the per-gap maximum of
    R1^D over the Weyl term; these are the objects that decide it.
    """

    d: int
    level: int
    x_crit: float        # interior critical point of the gap ratio
    z_crit: float        # (L+d)(L + 1/(d+1))
    ratio_at_crit: float  # f_L(x_L)
    ratio_at_level: float  # f_L(0)


def bly345_gap_diagnostics(d: int, level: int) -> Bly345Diagnostics:
    if d < 2 or level < 1:
        raise ValueError("need d >= 2, level >= 1")
    L = level
    z_star = Fraction((L + d) * ((d + 1) * L + 1), d + 1)
    # Solve (L+x)(L+x+d-1) = z* for the fractional part x.
    c = 2 * L + d - 1
    x = (-c + math.sqrt(c * c + 4 * float(z_star - L * (L + d - 1)))) / 2
    f_crit = math.prod(range(L, L + d)) / float(z_star) ** (d / 2)
    lam = L * (L + d - 1)
    q = SpectrumQuery(hemisphere_dirichlet(d))
    c1 = float(lclass_volume(hemisphere_dirichlet(d), 1))
    f0 = float(riesz_mean(q, 1, lam)) / (c1 * lam ** (1 + d / 2))
    return Bly345Diagnostics(d, L, x, float(z_star), f_crit, f0)


# ---------------------------------------------------------------------------
# Entry definitions

def _build_catalog():
    half = Fraction(1, 2)

    # --- S^2, closed -------------------------------------------------------
    s2_query = lambda p: SpectrumQuery(sphere(2))

    def s2_lower(p, z):
        return z * z / _q(2) if not isinstance(z, float) else 0.5 * z * z

    def s2_upper(p, z):
        t = z + (half if not isinstance(z, float) else 0.5)
        return t * t / (_q(2) if not isinstance(z, float) else 2.0)

    def _osc(z):
        psi = _psi_of(2, z)
        quarter = Fraction(1, 4) if not isinstance(psi, float) else 0.25
        return quarter - psi * psi

    def s2_lower_imp(p, z):
        osc = _osc(z)
        base = s2_lower(p, z)
        if osc == 0:
            return base
        return base + 2 * osc * (z - _sqrt(z) / 2)

    def s2_upper_imp(p, z):
        osc = _osc(z)
        base = s2_lower(p, z)
        if osc == 0:
            return base
        h = half if not isinstance(z, float) else 0.5
        return base + 2 * osc * (z + _sqrt(z) / 2 + h)

    lam_points = lambda p, n: [l * (l + 1) for l in range(n)]
    _register(BoundSpec(
        "s2.r1.lower", "R1 on S^2 >= z^2/2", "R1", s2_query,
        (SideRule("lower", s2_lower),), _no_params(),
        equality=lam_points,
        power_shift=lambda p: (0.5, 2.0, 0.0)))
    _register(BoundSpec(
        "s2.r1.upper", "R1 on S^2 <= (z+1/2)^2/2", "R1", s2_query,
        (SideRule("upper", s2_upper),), _no_params(),
        equality=lambda p, n: _upper_env_points(n),
        power_shift=lambda p: (0.5, 2.0, 0.5)))
    _register(BoundSpec(
        "s2.r1.lower.imp", "improved S^2 lower bound with fluctuation term",
        "R1", s2_query, (SideRule("lower", s2_lower_imp),), _no_params(),
        equality=lam_points))
    _register(BoundSpec(
        "s2.r1.upper.imp", "improved S^2 upper bound with fluctuation term",
        "R1", s2_query, (SideRule("upper", s2_upper_imp),), _no_params(),
        equality=lam_points))

    # --- S^2_+ -------------------------------------------------------------
    hd2 = lambda p: SpectrumQuery(hemisphere_dirichlet(2))
    hn2 = lambda p: SpectrumQuery(hemisphere_neumann(2))

    _register(BoundSpec(
        "hemi2.nd.polya", "Polya on the hemisphere: N^D <= z/2", "N", hd2,
        (SideRule("upper", lambda p, z: z / _q(2) if not isinstance(z, float)
                  else 0.5 * z),),
        _no_params(), equality=lam_points))

    def nd_two_upper(p, z):
        if z == 0:
            return _q(0) if not isinstance(z, float) else 0.0
        a = _psi_of(2, z) + (half if not isinstance(z, float) else 0.5)
        if a == 0:
            return z / 2
        t = _sqrt(z) - a
        return t * t / 2

    def nd_two_lower(p, z):
        if z == 0:
            return _q(0) if not isinstance(z, float) else 0.0
        a = _psi_of(2, z) + (half if not isinstance(z, float) else 0.5)
        if a == 0:
            return z / 2
        return nd_two_upper(p, z) - a / (8 * _sqrt(z))

    _register(BoundSpec(
        "hemi2.nd.twosided", "two-sided fluctuation bound for N^D on S^2_+",
        "N", hd2,
        (SideRule("lower", nd_two_lower), SideRule("upper", nd_two_upper)),
        _no_params(), equality=lam_points))

    def r1d_core(z):
        quarter = Fraction(1, 4) if not isinstance(z, float) else 0.25
        return z * z / 4 - z * _sqrt(z + quarter) / 3

    _register(BoundSpec(
        "hemi2.r1d.lower", "R1^D on S^2_+ >= z^2/4 - z sqrt(z+1/4)/3",
        "R1", hd2, (SideRule("lower", lambda p, z: r1d_core(z)),),
        _no_params(), equality=lambda p, n: [l * (l + 1)
                                             for l in range(1, n + 1)]))
    _register(BoundSpec(
        "hemi2.r1d.upper", "R1^D on S^2_+, upper bound with +z/4 term",
        "R1", hd2, (SideRule("upper", lambda p, z: r1d_core(z) + z / 4),),
        _no_params()))

    def r1n_core(z):
        quarter = Fraction(1, 4) if not isinstance(z, float) else 0.25
        return z * z / 4 + z * _sqrt(z + quarter) / 3

    _register(BoundSpec(
        "hemi2.r1n.lower", "R1^N on S^2_+ >= z^2/4 + z sqrt(z+1/4)/3",
        "R1", hn2, (SideRule("lower", lambda p, z: r1n_core(z)),),
        _no_params(), equality=lam_points))
    _register(BoundSpec(
        "hemi2.r1n.upper", "R1^N on S^2_+, upper bound with +z term",
        "R1", hn2, (SideRule("upper", lambda p, z: r1n_core(z) + z),),
        _no_params()))

    # --- domains of S^2_+ and S^2 -----------------------------------------
    area2p = lambda p: 2 * math.pi
    _register(BoundSpec(
        "dom.s2p.bly", "Berezin-Li-Yau for domains of S^2_+", "R1", hd2,
        (SideRule("upper", lambda p, z: p["area"] * float(z) ** 2
                  / (8 * math.pi)),),
        _area_validator(area2p, _no_params())))
    _register(BoundSpec(
        "dom.s2p.bly.imp", "improved Berezin-Li-Yau with shift (z-1/2)^2",
        "R1", hd2,
        (SideRule("upper", lambda p, z: p["area"] * (float(z) - 0.5) ** 2
                  / (8 * math.pi)),),
        _area_validator(area2p, _no_params())))

    buck2 = lambda p: SpectrumQuery(sphere(2), variant=Variant.BUCKLING)
    _register(BoundSpec(
        "lem.blys1", "sphere sum without l=0: <= z^2/2", "R1", buck2,
        (SideRule("upper", s2_lower),), _no_params()))

    def blys2_upper(p, z):
        t = z - (half if not isinstance(z, float) else 0.5)
        return t * t / 2

    _register(BoundSpec(
        "lem.blys2", "sphere sum without l=0: <= (z-1/2)^2/2", "R1", buck2,
        (SideRule("upper", blys2_upper),),
        _no_params(), equality=lambda p, n: _upper_env_points(n)))

    _register(BoundSpec(
        "dom.s2.buckling", "Berezin-Li-Yau for buckling on domains of S^2",
        "R1", buck2,
        (SideRule("upper", lambda p, z: p["area"] * (float(z) - 0.5) ** 2
                  / (8 * math.pi)),),
        _area_validator(lambda p: 4 * math.pi, _no_params())))

    # --- S^d, closed -------------------------------------------------------
    sd_query = lambda p: SpectrumQuery(sphere(p["d"]))

    def sd_lower(p, z):
        c = lclass_volume(sphere(p["d"]), 1)
        v = _pow_half(z, p["d"] + 2)
        return c * v if not isinstance(v, float) else float(c) * v

    def sd_lower_shift(p, z):
        d = p["d"]
        c = lclass_volume(sphere(d), 1)
        shift = Fraction(d * (d - 2) * (d + 2), 12)
        v = _pow_half(z, d)
        if isinstance(v, float):
            return float(c) * v * (float(z) + float(shift))
        return c * v * (z + shift)

    def sd_upper_shift(p, z):
        d = p["d"]
        c = lclass_volume(sphere(d), 1)
        zd = _zd(d)
        t = (z + zd) if not isinstance(z, float) else z + float(zd)
        v = _pow_half(t, d + 2)
        return c * v if not isinstance(v, float) else float(c) * v

    def sd_equality(p, n):
        d = p["d"]
        if d == 2:
            return [l * (l + 1) for l in range(n)]
        raise ValueError(f"no finite equality points for d={d}")

    _register(BoundSpec(
        "sd.r1.lower", "Weyl lower bound for R1 on S^d", "R1", sd_query,
        (SideRule("lower", sd_lower),), _with_d(2),
        equality=sd_equality,
        power_shift=lambda p: (float(lclass_volume(sphere(p["d"]), 1)),
                               p["d"] / 2 + 1, 0.0)))
    _register(BoundSpec(
        "sd.r1.lower.shift", "refined lower bound with d(d-2)(d+2)/(12z)",
        "R1", sd_query, (SideRule("lower", sd_lower_shift),), _with_d(2),
        equality=sd_equality))

    def sd_upper_equality(p, n):
        d = p["d"]
        if d == 2:
            return _upper_env_points(n)
        # No equality z for d >= 3; expose the per-gap optimal shifts
        # b(l) -> z_d instead (see optimal_shift).
        return [optimal_shift(d, l) for l in range(1, n + 1)]

    _register(BoundSpec(
        "sd.r1.upper.shift", "shifted Weyl upper bound, shift z_d=d(2d-1)/12",
        "R1", sd_query, (SideRule("upper", sd_upper_shift),), _with_d(2),
        equality=sd_upper_equality,
        power_shift=lambda p: (float(lclass_volume(sphere(p["d"]), 1)),
                               p["d"] / 2 + 1, float(_zd(p["d"])))))

    _register(BoundSpec(
        "fail.sd.r1.lower.bdshift",
        "lower bound with the liminf shift b_d fails for d >= 3",
        "R1", sd_query,
        (SideRule("lower", lambda p, z: float(lclass_volume(
            sphere(p["d"]), 1)) * (float(z) + float(_bd(p["d"])))
            ** (p["d"] / 2 + 1)),),
        _with_d(3), expected_valid=False))

    # --- averages on S^d ---------------------------------------------------
    def avg_upper(p, k):
        d = p["d"]
        w0 = lclass_volume(sphere(d), 0)
        val = _nth_root((Fraction(k) / w0) ** 2, d)
        return Fraction(d, d + 2) * val if not isinstance(val, float) \
            else d / (d + 2) * val

    def avg_lower(p, k):
        up = avg_upper(p, k)
        zd = _zd(p["d"])
        return up - zd if not isinstance(up, float) else up - float(zd)

    _register(BoundSpec(
        "sd.avg.twosided", "two-sided bounds for eigenvalue averages on S^d",
        "average", sd_query,
        (SideRule("lower", avg_lower), SideRule("upper", avg_upper)),
        _with_d(2),
        equality=lambda p, n: [1] if p["d"] == 2 else [],
        equality_side="lower"))

    _register(BoundSpec(
        "fail.liyau.d≥6",
        "hemisphere Li-Yau average bound fails for d >= 6",
        "average", lambda p: SpectrumQuery(hemisphere_dirichlet(p["d"])),
        (SideRule("lower", lambda p, k: p["d"] / (p["d"] + 2)
                  * math.factorial(p["d"]) ** (2 / p["d"])
                  * float(k) ** (2 / p["d"])),),
        _with_d(6), expected_valid=False), "fail.liyau.d>=6")

    # --- domains of S^d ----------------------------------------------------
    def sd_area(p):
        from .weyl import volumes
        return float(volumes(p["d"]).sphere)

    _register(BoundSpec(
        "dom.sd.bly.shift", "shifted Berezin-Li-Yau for domains of S^d",
        "R1", sd_query,
        (SideRule("upper", lambda p, z: lclass(1, p["d"]).value * p["area"]
                  * (float(z) + float(_zd(p["d"]))) ** (p["d"] / 2 + 1)),),
        _area_validator(sd_area, _with_d(2))))

    _register(BoundSpec(
        "dom.sd.kroger.imp", "improved Kroger bound for domains of S^d",
        "R1", sd_query,
        (SideRule("lower", lambda p, z: lclass(1, p["d"]).value * p["area"]
                  * float(z) ** (p["d"] / 2)
                  * (float(z) + float(Fraction(p["d"] * (p["d"] - 2)
                                               * (p["d"] + 2), 12)))),),
        _area_validator(sd_area, _with_d(2))))

    # --- S^1 ----------------------------------------------------------------
    s1_query = lambda p: SpectrumQuery(sphere(1))

    def s1_upper(p, z):
        c = Fraction(1, 12)
        t = (z + c) if not isinstance(z, float) else z + float(c)
        v = _pow_half(t, 3)
        return Fraction(4, 3) * v if not isinstance(v, float) else 4 / 3 * v

    _register(BoundSpec(
        "s1.r1.upper.shift", "R1 on the circle <= 4/3 (z+1/12)^(3/2)",
        "R1", s1_query, (SideRule("upper", s1_upper),), _no_params(),
        equality=lambda p, n: [Fraction(3 * (2 * l + 1) ** 2 - 1, 12)
                               for l in range(n)],
        power_shift=lambda p: (4 / 3, 1.5, float(Fraction(1, 12)))))

    def s1_weyl(p, z):
        v = _pow_half(z, 3)
        return Fraction(4, 3) * v if not isinstance(v, float) else 4 / 3 * v

    def s1_witnesses(p, zmax):
        out = []
        l = 0
        while True:
            base = l + 0.5
            z_plus = (base + math.sqrt(3) / 6) ** 2
            z_minus = (base - math.sqrt(3) / 6) ** 2
            if z_minus > zmax:
                break
            out.extend(t for t in (z_minus, z_plus) if t <= zmax)
            l += 1
        return out

    _register(BoundSpec(
        "fail.s1.weyl", "Weyl term is neither bound for R1 on the circle",
        "R1", s1_query,
        (SideRule("lower", s1_weyl), SideRule("upper", s1_weyl)),
        _no_params(), expected_valid=False, witnesses=s1_witnesses))

    # --- hemisphere S^d_+ --------------------------------------------------
    hd_query = lambda p: SpectrumQuery(hemisphere_dirichlet(p["d"]))

    _register(BoundSpec(
        "hemi.d.bly345", "Berezin-Li-Yau on S^d_+ for d = 3, 4, 5",
        "R1", hd_query,
        (SideRule("upper", lambda p, z: float(lclass_volume(
            hemisphere_dirichlet(p["d"]), 1))
            * float(z) ** (p["d"] / 2 + 1)),),
        _with_d(3, 5),
        power_shift=lambda p: (float(lclass_volume(
            hemisphere_dirichlet(p["d"]), 1)), p["d"] / 2 + 1, 0.0)))

    _register(BoundSpec(
        "fail.hemi.polya.d≥3", "Polya fails on S^d_+ for d >= 3",
        "N", hd_query,
        (SideRule("upper", lambda p, z: float(z) ** (p["d"] / 2)
                  / math.factorial(p["d"])),),
        _with_d(3), expected_valid=False), "fail.hemi.polya.d>=3")

    # --- polyharmonic ------------------------------------------------------
    def sdp_query(p):
        return SpectrumQuery(sphere(p["d"]), power=p["p"])

    def _validate_r1p(params: dict) -> dict:
        out = {"d": None, "p": None}
        out.update(params)
        d, p = out.get("d"), out.get("p")
        if d is None or p is None:
            raise ValueError("parameters d and p are required")
        if d < 2:
            raise ValueError("d must be >= 2")
        if p < (1 if d == 2 else 2):
            raise ValueError("p out of range (corollary allows p>=1 at d=2, "
                             "theorem needs p>=2)")
        if set(out) - {"d", "p"}:
            raise ValueError("unexpected parameters")
        return out

    def r1p_lower(prm, z):
        d, p = prm["d"], prm["p"]
        lp = float(lclass_volume(sphere(d), 1, p))
        zf = float(z)
        if d == 2:
            return (lp * zf ** (1 + 1 / p) - (p - 1) / 2 * zf
                    - p / 8 * zf ** (1 - 1 / p))
        u = zf ** (1 / p) + float(_zd(d))
        main = zf ** (1 + d / (2 * p))
        corr = 2 * (p - 1) / (d + 2) * lp * (u ** (d / 2 + p) - main)
        return lp * main - corr

    def r1p_upper(prm, z):
        d, p = prm["d"], prm["p"]
        lp = float(lclass_volume(sphere(d), 1, p))
        zf = float(z)
        if d == 2:
            return (lp * zf ** (1 + 1 / p) + p / 2 * zf
                    + p / 8 * zf ** (1 - 1 / p))
        u = zf ** (1 / p) + float(_zd(d))
        main = zf ** (1 + d / (2 * p))
        corr = 2 * (p - 1) / (d + 2) * lp * (u ** (d / 2 + p) - main)
        return lp * u ** (d / 2 + p) + corr

    _register(BoundSpec(
        "sd.r1p.twosided", "two-sided shifted Weyl bounds for (-Delta)^p",
        "R1", sdp_query,
        (SideRule("lower", r1p_lower), SideRule("upper", r1p_upper)),
        _validate_r1p))

    def r1p_weyl(prm, z):
        d, p = prm["d"], prm["p"]
        return float(lclass_volume(sphere(d), 1, p)) \
            * float(z) ** (1 + d / (2 * p))

    def r1p_witnesses(prm, zmax):
        out = []
        l = 1
        while True:
            a = (l * (l + 1)) ** 2
            b = (l + 1) ** 2 * ((l + 1) ** 2 + 1)
            if a > zmax and b > zmax:
                break
            out.extend(t for t in (a, b) if t <= zmax)
            l += 1
        return out

    def _validate_r1p_weyl(params: dict) -> dict:
        out = {"d": 2, "p": 2}
        out.update(params)
        if (out["d"], out["p"]) != (2, 2):
            raise ValueError("documented counterexample is d = 2, p = 2")
        return out

    _register(BoundSpec(
        "fail.r1p.weyl", "Weyl term is neither bound for R1 of Delta^2 on S^2",
        "R1", sdp_query,
        (SideRule("lower", r1p_weyl), SideRule("upper", r1p_weyl)),
        _validate_r1p_weyl, expected_valid=False, witnesses=r1p_witnesses))

    _register(BoundSpec(
        "sd.r12.lower", "Weyl lower bound for the biharmonic R1 on S^d, d>=3",
        "R1", lambda p: SpectrumQuery(sphere(p["d"]), power=2),
        (SideRule("lower", lambda p, z: float(lclass_volume(
            sphere(p["d"]), 1, 2)) * float(z) ** (1 + p["d"] / 4)),),
        _with_d(3)))

    def _validate_p(pmin):
        def validate(params: dict) -> dict:
            out = {"p": None}
            out.update(params)
            if out.get("p") is None:
                raise ValueError("parameter p is required")
            if out["p"] < pmin:
                raise ValueError(f"p must be >= {pmin}")
            if set(out) - {"p"}:
                raise ValueError("unexpected parameters")
            return out
        return validate

    _register(BoundSpec(
        "hemi2.poly.bly", "polyharmonic Berezin-Li-Yau on S^2_+",
        "R1", lambda p: SpectrumQuery(hemisphere_dirichlet(2), power=p["p"]),
        (SideRule("upper", lambda p, z: p["p"] / (2 * (p["p"] + 1))
                  * float(z) ** (1 + 1 / p["p"])),),
        _validate_p(1)))

    def _validate_p23(params: dict) -> dict:
        out = dict(params)
        p = out.get("p")
        if p not in (2, 3):
            raise ValueError("p must be 2 or 3")
        if set(out) - {"p", "area"}:
            raise ValueError("unexpected parameters")
        return {"p": p, "area": out.get("area")}

    def poly23_upper(prm, z):
        zf = float(z)
        if prm["p"] == 2:
            return prm["area"] * zf ** 1.5 / (6 * math.pi)
        return 3 * prm["area"] * zf ** (4 / 3) / (16 * math.pi)

    _register(BoundSpec(
        "dom.s2p.poly23",
        "biharmonic/triharmonic Berezin-Li-Yau for domains of S^2_+",
        "R1", lambda p: SpectrumQuery(hemisphere_dirichlet(2), power=p["p"]),
        (SideRule("upper", poly23_upper),),
        _area_validator(lambda p: 2 * math.pi, _validate_p23)))

    _register(BoundSpec(
        "dom.sd.neubih.lower",
        "Kroger bound for the Neumann biharmonic on domains of S^d, d>=3",
        "R1", lambda p: SpectrumQuery(sphere(p["d"]), power=2),
        (SideRule("lower", lambda p, z: lclass(1, p["d"], 2).value
                  * p["area"] * float(z) ** (1 + p["d"] / 4)),),
        _area_validator(sd_area, _with_d(3))))

    # --- R2 on rank-one spaces ---------------------------------------------
    def _validate_space(params: dict) -> dict:
        out = {"space": sphere(2)}
        out.update(params)
        space = out["space"]
        if not isinstance(space, Space):
            raise ValueError("parameter 'space' must be a Space")
        if not space.is_closed:
            raise ValueError("R2 sum-rule bounds apply to closed spaces")
        if space.dim < 2:
            # The gap-minimum positivity (d-2)/(d+2) L(L+d) needs d >= 2;
            # on the circle the lower bound genuinely fails (z ~ 1537).
            raise ValueError("R2 two-sided bounds require dim >= 2")
        if set(out) - {"space"}:
            raise ValueError("unexpected parameters")
        return out

    def r2_lower(prm, z):
        sp = prm["space"]
        c = lclass_volume(sp, 2)
        v = _pow_half(z, sp.dim + 4)
        return c * v if not isinstance(v, float) else float(c) * v

    def r2_upper(prm, z):
        sp = prm["space"]
        c = lclass_volume(sp, 2)
        b = Fraction(sp.dim * sp.first_positive_eigenvalue, 4)
        t = (z + b) if not isinstance(z, float) else z + float(b)
        v = _pow_half(t, sp.dim + 4)
        return c * v if not isinstance(v, float) else float(c) * v

    _register(BoundSpec(
        "sd.r2.twosided", "two-sided Weyl bounds for R2 on rank-one spaces",
        "R2", lambda p: SpectrumQuery(p["space"]),
        (SideRule("lower", r2_lower), SideRule("upper", r2_upper)),
        _validate_space))


_build_catalog()


# ---------------------------------------------------------------------------
# Evaluation, equality points, verification


def bound_value(bound_id: str, params: Optional[dict] = None, z: Real = None,
                side: Optional[str] = None):
    """Evaluate the bound's closed form; exact rational when it is rational.

    `side` is required for two-sided entries; z is the spectral parameter
    (or k for average entries).
    """
    spec = get(bound_id)
    prm = spec.validate(dict(params or {}))
    if z is None:
        raise ValueError("z (or k) is required")
    rules = {s.side: s for s in spec.sides}
    if side is None:
        if len(rules) > 1:
            raise ValueError(f"{spec.id} is two-sided; pass side="
                             f"{sorted(rules)}")
        side = next(iter(rules))
    if side not in rules:
        raise ValueError(f"{spec.id} has no side {side!r}")
    if spec.quantity == "average":
        return rules[side].evaluate(prm, z)
    return rules[side].evaluate(prm, _normalize_arg(z))


def equality_points(bound_id: str, params: Optional[dict] = None,
                    count: int = 8) -> list:
    """First recorded equality points (exact where closed forms allow).

    For sd.r1.upper.shift at d >= 3 the returned values are the per-gap
    optimal shifts b(l) (whose limit is z_d), the sharpness data the
    theorem carries instead of finite equality z's.
    """
    spec = get(bound_id)
    if spec.equality is None:
        raise ValueError(f"{spec.id} has no recorded equality structure")
    prm = spec.validate(dict(params or {}))
    return spec.equality(prm, count)


@dataclass(frozen=True)
class Violation:
    z: float
    target: float
    bound: float
    slack: float
    side: str


@dataclass(frozen=True)
class SideReport:
    side: str
    n_points: int
    min_slack: float
    argmin_z: float
    n_violations: int
    first_witness: Optional[Violation]
    violations: Tuple[Violation, ...]          # capped
    gap_min_slack: Tuple[Tuple[int, float], ...]
    points: Tuple[Tuple[float, float, float, float], ...]  # (z, target, bound, slack)


@dataclass(frozen=True)
class EqualityCheck:
    z: float
    side: str
    slack: float


@dataclass(frozen=True)
class ScanReport:
    bound_id: str
    params: str
    expected_valid: bool
    level_cap: int
    sides: Tuple[SideReport, ...]
    equality_checks: Tuple[EqualityCheck, ...]

    @property
    def passed(self) -> bool:
        if self.expected_valid:
            return (all(s.n_violations == 0 for s in self.sides)
                    and all(abs(e.slack) <= 1e-9 for e in self.equality_checks))
        return all(s.n_violations >= 1 for s in self.sides)

    def to_dict(self) -> dict:
        import dataclasses
        d = dataclasses.asdict(self)
        d["passed"] = self.passed
        return d


def _target_value(spec: BoundSpec, prm: dict, x, level_cap: int):
    q = spec.query(prm)
    if spec.quantity == "N":
        return counting(q, x, level_cap=level_cap)
    if spec.quantity == "R1":
        return riesz_mean(q, 1, x, level_cap=level_cap)
    if spec.quantity == "R2":
        return riesz_mean(q, 2, x, level_cap=level_cap)
    if spec.quantity == "average":
        return eigenvalue_average(q, x, level_cap=level_cap)
    raise AssertionError(spec.quantity)


def _worker_count() -> int:
    raw = os.environ.get("SPECTRAL_RIESZ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def standard_grid(bound_id: str, params: Optional[dict] = None,
                  zmax: Optional[float] = None, points: int = 2000,
                  levels: int = 40) -> list:
    """Default verification grid.

    z entries: uniform points on [0, zmax] (zmax defaults to the query's
    40th level value), all level endpoints, recorded equality points and
    documented witness points.  average entries: k = 1..points range.
    """
    spec = get(bound_id)
    prm = spec.validate(dict(params or {}))
    if spec.quantity == "average":
        kmax = int(zmax) if zmax else min(points, 500)
        return list(range(1, kmax + 1))
    q = spec.query(prm)
    if zmax is None:
        zmax = float(q.level_value(q.min_level + levels - 1))
    pts = {i * zmax / points for i in range(points + 1)}
    l = q.min_level
    while q.level_value(l) <= zmax:
        pts.add(float(q.level_value(l)))
        l += 1
    if spec.equality is not None:
        try:
            for e in spec.equality(prm, levels + 2):
                if 0 <= e <= zmax:
                    pts.add(float(e))
        except ValueError:
            pass
    if spec.witnesses is not None:
        pts.update(float(t) for t in spec.witnesses(prm, zmax))
    return sorted(pts)


def _scan_side(spec, prm, rule: SideRule, grid: Sequence, level_cap: int,
               tol: float = 1e-9):
    rows = []
    q = spec.query(prm)
    lam_cache: List[int] = []

    def gap_index(zf: float) -> int:
        while not lam_cache or lam_cache[-1] <= zf:
            lam_cache.append(q.level_value(q.min_level + len(lam_cache)))
        import bisect
        return bisect.bisect_right(lam_cache, zf) - 1 + q.min_level

    def scan_chunk(chunk):
        out = []
        for x in chunk:
            tgt = float(_target_value(spec, prm, x, level_cap))
            bnd = float(rule.evaluate(prm, x))
            slack = (bnd - tgt) if rule.side == "upper" else (tgt - bnd)
            out.append((float(x), tgt, bnd, slack))
        return out

    workers = _worker_count()
    if workers > 1 and len(grid) > 64:
        chunks = [grid[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(scan_chunk, chunks):
                rows.extend(part)
        rows.sort(key=lambda r: r[0])
    else:
        rows = scan_chunk(grid)

    min_slack, arg = math.inf, 0.0
    violations = []
    gap_min: Dict[int, float] = {}
    for zf, tgt, bnd, slack in rows:
        if slack < min_slack:
            min_slack, arg = slack, zf
        if spec.quantity != "average":
            gi = gap_index(zf)
            gap_min[gi] = min(gap_min.get(gi, math.inf), slack)
        if slack < -tol * max(1.0, abs(bnd)):
            violations.append(Violation(zf, tgt, bnd, slack, rule.side))
    return SideReport(
        rule.side, len(rows), min_slack, arg, len(violations),
        violations[0] if violations else None, tuple(violations[:20]),
        tuple(sorted(gap_min.items())), tuple(rows))


def verify(bound_id: str, params: Optional[dict] = None,
           grid: Optional[Sequence] = None, *,
           zmax: Optional[float] = None, points: int = 2000,
           levels: int = 40, tol: float = 1e-9,
           level_cap: int = DEFAULT_LEVEL_CAP) -> ScanReport:
    """Scan a bound over a grid and report slacks, violations, equalities.

    Violations are slacks below -1e-9 * max(1, |bound|); the documented
    counterexamples (expected_valid=False) must produce at least one and
    report the first witness.  Failures are report content, never raises.
    """
    spec = get(bound_id)
    prm = spec.validate(dict(params or {}))
    if grid is None:
        grid = standard_grid(bound_id, prm, zmax=zmax, points=points,
                             levels=levels)
    sides = tuple(_scan_side(spec, prm, rule, grid, level_cap, tol)
                  for rule in spec.sides)

    eq_checks = []
    if spec.equality is not None and spec.expected_valid:
        try:
            eq_pts = spec.equality(prm, min(levels, 12))
        except ValueError:
            eq_pts = []
        for rule in spec.sides:
            if spec.equality_side is not None and rule.side != spec.equality_side:
                continue
            for e in eq_pts:
                if isinstance(e, float):
                    continue  # informational values (e.g. b(l) shifts)
                tgt = _target_value(spec, prm, e, level_cap)
                bnd = rule.evaluate(prm, e if spec.quantity == "average"
                                    else _normalize_arg(e))
                slack = (bnd - tgt) if rule.side == "upper" else (tgt - bnd)
                eq_checks.append(EqualityCheck(float(e), rule.side,
                                               float(slack)))
    prm_repr = ", ".join(
        f"{k}={prm[k].describe() if isinstance(prm[k], Space) else prm[k]}"
        for k in sorted(prm) if prm[k] is not None)
    return ScanReport(spec.id, prm_repr, spec.expected_valid, level_cap,
                      sides, tuple(eq_checks))


# ---------------------------------------------------------------------------
# Legendre transform: Riesz-mean bounds -> average bounds


def legendre_average_bound(bound_id: str, params: Optional[dict] = None,
                           k: int = 1, side: Optional[str] = None) -> float:
    """max_z (k z - B(z)) / k: converts an R1 bound into an average bound.

    An upper bound B for R1 yields a lower bound for the eigenvalue
    average; a lower bound yields an upper bound.  Closed form when B is
    a pure shifted power, golden-section refinement to 1e-10 otherwise.
    """
    spec = get(bound_id)
    if spec.quantity != "R1":
        raise ValueError(f"{spec.id} does not bound R1")
    if k < 1:
        raise ValueError("k must be >= 1")
    prm = spec.validate(dict(params or {}))
    rules = {s.side: s for s in spec.sides}
    if side is None:
        if len(rules) > 1:
            raise ValueError(f"{spec.id} is two-sided; pass side=...")
        side = next(iter(rules))
    rule = rules[side]

    if spec.power_shift is not None:
        c, qexp, b = spec.power_shift(prm)
        # maximize k z - c (z+b)^q over z >= 0
        zstar = (k / (c * qexp)) ** (1 / (qexp - 1)) - b
        if zstar <= 0:
            return -c * b ** qexp / k
        return (k * zstar - c * (zstar + b) ** qexp) / k

    def g(z):
        return k * z - float(rule.evaluate(prm, z))

    # Bracket the argmax with a coarse scan, then golden-section refine.
    zhi = 1.0
    while g(zhi * 2) > g(zhi) or g(zhi * 4) > g(zhi):
        zhi *= 2
        if zhi > 1e12:
            raise ArithmeticError("no interior maximum found")
    n = 4000
    best_i = max(range(n + 1), key=lambda i: g(4 * zhi * i / n))
    lo = 4 * zhi * max(best_i - 1, 0) / n
    hi = 4 * zhi * min(best_i + 1, n) / n
    invphi = (math.sqrt(5) - 1) / 2
    a, bspan = lo, hi
    c1 = bspan - (bspan - a) * invphi
    c2 = a + (bspan - a) * invphi
    f1, f2 = g(c1), g(c2)
    while bspan - a > 1e-10 * max(1.0, abs(bspan)):
        if f1 < f2:
            a, c1, f1 = c1, c2, f2
            c2 = a + (bspan - a) * invphi
            f2 = g(c2)
        else:
            bspan, c2, f2 = c2, c1, f1
            c1 = bspan - (bspan - a) * invphi
            f1 = g(c1)
    return max(f1, f2) / k


def cor_new_average_lower(d: int, k: int) -> float:
    """Closed form of the lower average bound on S^d (Legendre of the
    shifted upper bound): d/(d+2) (k / (L_0 |S^d|))^(2/d) - z_d."""
    w0 = lclass_volume(sphere(d), 0)
    return d / (d + 2) * float(Fraction(k) / w0) ** (2 / d) - float(_zd(d))


def cor_new_average_upper(d: int, k: int) -> float:
    return d / (d + 2) * float(Fraction(k) / lclass_volume(sphere(d), 0)) \
        ** (2 / d)
