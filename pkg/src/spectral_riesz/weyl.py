"""Semiclassical constants, volumes, and asymptotic expansions.

The constants L^class_{gamma,d} and their polyharmonic variants are kept
exact: for gamma in {0, 1, 2} every constant here is a rational multiple
of a half-integer power of pi, and the products with the space volumes
are plain rationals.  Expansion coefficients are transcribed from the
two/three-term theorems and certified numerically by the test suite, not
derived symbolically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from .spaces import Family, Real, Space, fluctuation, invert_w

# ---------------------------------------------------------------------------
# Exact pi-multiples and Gamma at integer/half-integer points


@dataclass(frozen=True)
class PiMultiple:
    """Exact value coef * pi^(pi_halves/2)."""

    coef: Fraction
    pi_halves: int

    def __float__(self) -> float:
        return float(self.coef) * math.pi ** (self.pi_halves / 2)

    def __mul__(self, other):
        if isinstance(other, PiMultiple):
            return PiMultiple(self.coef * other.coef,
                              self.pi_halves + other.pi_halves)
        return PiMultiple(self.coef * Fraction(other), self.pi_halves)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiMultiple):
            return PiMultiple(self.coef / other.coef,
                              self.pi_halves - other.pi_halves)
        return PiMultiple(self.coef / Fraction(other), self.pi_halves)

    def as_fraction(self) -> Fraction:
        if self.pi_halves != 0:
            raise ValueError("value is not rational")
        return self.coef


def gamma_exact_half(two_x: int) -> PiMultiple:
    """Gamma(two_x / 2) by exact recursion down to Gamma(1) or Gamma(1/2)."""
    if two_x <= 0:
        raise ValueError("argument must be positive")
    if two_x % 2 == 0:
        return PiMultiple(Fraction(math.factorial(two_x // 2 - 1)), 0)
    # Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    n = (two_x - 1) // 2
    return PiMultiple(Fraction(math.factorial(2 * n),
                               4 ** n * math.factorial(n)), 1)


def gamma_real(x: float) -> float:
    """Gamma for general real x (Lanczos-class, ~1 ulp); utility only."""
    if x > 0 and float(x).is_integer():
        return float(math.factorial(int(x) - 1))
    return math.gamma(x)


# ---------------------------------------------------------------------------
# Semiclassical constants and volumes


@dataclass(frozen=True)
class SemiclassicalConstant:
    """L^class_{gamma,d,p}; value > 0, exact as a pi-multiple."""

    gamma: int
    d: int
    p: int
    value: float
    exact: PiMultiple


def _pochhammer(x: Fraction, n: int) -> Fraction:
    out = Fraction(1)
    for i in range(n):
        out *= x + i
    return out


def lclass(gamma: int, d: int, p: int = 1) -> SemiclassicalConstant:
    """L^class_{gamma,d,p} = (4 pi)^(-d/2) Gamma(gamma+1) Gamma(1 + d/2p)
    / (Gamma(1 + d/2) Gamma(1 + gamma + d/2p)).

    For integer gamma the ratio of the two fractional Gammas is the
    reciprocal Pochhammer product, so the value is an exact rational
    multiple of pi^(-d/2) (times 1/sqrt(pi) in odd dimension).
    """
    if gamma not in (0, 1, 2):
        raise ValueError("gamma must be 0, 1 or 2")
    if d < 1 or p < 1:
        raise ValueError("d and p must be >= 1")
    four_pow = Fraction(1, 2 ** d)  # 4^(-d/2) exactly
    ratio = Fraction(math.factorial(gamma)) / _pochhammer(1 + Fraction(d, 2 * p),
                                                          gamma)
    exact = PiMultiple(four_pow * ratio, 0) / gamma_exact_half(d + 2)
    exact = PiMultiple(exact.coef, exact.pi_halves - d)
    return SemiclassicalConstant(gamma, d, p, float(exact), exact)


@dataclass(frozen=True)
class Volumes:
    """|S^d|, |S^d_+|, |boundary of S^d_+| = |S^(d-1)|, omega_d (unit ball)."""

    sphere: PiMultiple
    hemisphere: Optional[PiMultiple]
    boundary: Optional[PiMultiple]
    ball: PiMultiple


def volumes(d: int) -> Volumes:
    """Exact closed forms via Gamma at integer/half-integer points.

    Hemisphere entries require d >= 2 and are None for the circle.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    sph = PiMultiple(Fraction(2), d + 1) / gamma_exact_half(d + 1)
    ball = PiMultiple(Fraction(1), d) / gamma_exact_half(d + 2)
    if d == 1:
        return Volumes(sph, None, None, ball)
    hemi = PiMultiple(sph.coef / 2, sph.pi_halves)
    bnd = PiMultiple(Fraction(2), d) / gamma_exact_half(d)
    return Volumes(sph, hemi, bnd, ball)


_W0 = {
    # L^class_{0,d} |M^d| as an exact rational, per family.
    Family.SPHERE: lambda d: Fraction(2, math.factorial(d)),
    Family.HEMISPHERE_DIRICHLET: lambda d: Fraction(1, math.factorial(d)),
    Family.HEMISPHERE_NEUMANN: lambda d: Fraction(1, math.factorial(d)),
    Family.REAL_PROJECTIVE: lambda d: Fraction(1, math.factorial(d)),
    Family.COMPLEX_PROJECTIVE:
        lambda d: Fraction(1, math.factorial(d // 2) ** 2),
    Family.QUATERNION_PROJECTIVE:
        lambda d: Fraction(2, d * math.factorial(d // 2 - 1)
                           * math.factorial(d // 2 + 1)),
    Family.CAYLEY_PLANE:
        lambda d: Fraction(3, 4 * math.factorial(7) * math.factorial(11)),
}


def lclass_volume(space: Space, gamma: int, p: int = 1) -> Fraction:
    """L^class_{gamma,d,p} * |M^d| as an exact rational.

    For hemisphere spaces the measure is |S^d_+|.  The gamma = 0 value
    fixes the volume normalization implied by the eigenvalue conventions
    (e.g. 2/d! for the sphere); higher gamma follows from the rational
    ratio of the semiclassical constants.
    """
    if gamma not in (0, 1, 2):
        raise ValueError("gamma must be 0, 1 or 2")
    w0 = _W0[space.family](space.dim)
    ratio = Fraction(math.factorial(gamma)) / _pochhammer(
        1 + Fraction(space.dim, 2 * p), gamma)
    return w0 * ratio


def lclass_boundary_volume(d: int, gamma: int) -> Fraction:
    """L^class_{gamma,d-1} * |S^(d-1)| as an exact rational (d >= 2)."""
    if d < 2:
        raise ValueError("boundary term needs d >= 2")
    return lclass_volume(Space(Family.SPHERE, d - 1), gamma)


# ---------------------------------------------------------------------------
# Fluctuation with deterministic snapping


def snapped_fluctuation(w: float) -> float:
    """psi(w), with w within 8 ulp of an integer snapped to that integer.

    The expansions are discontinuous in psi at the energy levels; the snap
    makes grid evaluations reproducible when w is recovered from z by
    floating inversion.
    """
    r = round(w)
    if abs(w - r) <= 8 * math.ulp(max(1.0, abs(w))):
        return -0.5
    return fluctuation(w)


# ---------------------------------------------------------------------------
# Two/three-term expansions


@dataclass(frozen=True)
class ExpansionEval:
    """Truncated expansion at z: approximation to the raw quantity.

    `ratio` is the truncated bracket (raw approx divided by the leading
    Weyl term); `remainder_scale` is the relative power of z carried by
    the first omitted term, strictly below the last retained power.
    """

    value: float
    ratio: float
    order: int
    remainder_scale: float


def expansion_coefficients(space: Space, quantity: str, psi: float):
    """(leading rational, c_half, c_one, max_terms, remainder_scale).

    The bracket is 1 + c_half z^(-1/2) + c_one z^(-1); psi enters the
    oscillating coefficients.  The sphere R_1 expansion has no z^(-1/2)
    term and only two retained terms.
    """
    d = space.dim
    fam = space.family
    if quantity == "N":
        lead = lclass_volume(space, 0)
        if fam is Family.SPHERE:
            return (lead, -d * psi,
                    d * (d - 1) * (12 * psi ** 2 + 2 * d - 1) / 24.0, 3, -1.5)
        if fam is Family.HEMISPHERE_DIRICHLET:
            return (lead, -d * (1 + 2 * psi) / 2.0,
                    (d * (d - 1) / 2.0) * ((0.5 + psi) ** 2 + (d - 2) / 6.0),
                    3, -1.5)
        if fam is Family.HEMISPHERE_NEUMANN:
            return (lead, d * (1 - 2 * psi) / 2.0,
                    (d * (d - 1) / 2.0) * ((0.5 - psi) ** 2 + (d - 2) / 6.0),
                    3, -1.5)
    elif quantity == "R1":
        lead = lclass_volume(space, 1)
        osc = 0.25 - psi ** 2
        if fam is Family.SPHERE:
            return (lead, 0.0,
                    (d * (d + 2) / 12.0) * (d - 2 + 6 * osc), 2, -1.25)
        surf = d * (d + 2) / (2.0 * (d + 1))
        third = (d * (d + 2) / 2.0) * (osc + (d - 2) / 6.0)
        if fam is Family.HEMISPHERE_DIRICHLET:
            return (lead, -surf, third, 3, -1.5)
        if fam is Family.HEMISPHERE_NEUMANN:
            return (lead, surf, third, 3, -1.5)
    raise ValueError(f"no expansion theorem for quantity {quantity!r} "
                     f"on {space.describe()}")


def expansion(space: Space, quantity: str, z: Real, terms: int) -> ExpansionEval:
    """Truncated semiclassical expansion times the leading Weyl term.

    quantity is 'N' or 'R1'; terms counts retained terms of the relevant
    theorem (sphere R_1 has at most 2, the others at most 3).
    """
    if z <= 0:
        raise ValueError("expansion requires z > 0")
    zf = float(z)
    w = invert_w(space.dim, zf)
    psi = snapped_fluctuation(w)
    lead, c_half, c_one, max_terms, rem = expansion_coefficients(
        space, quantity, psi)
    if not 1 <= terms <= max_terms:
        raise ValueError(f"terms must be in 1..{max_terms} for {quantity} "
                         f"on {space.describe()}")
    ratio = 1.0
    # Sphere R_1 skips the absent z^(-1/2) order: term 2 is the z^(-1) one.
    powers = [c_half, c_one] if max_terms == 3 else [c_one]
    scales = [zf ** -0.5, 1.0 / zf] if max_terms == 3 else [1.0 / zf]
    retained = terms - 1
    for coeff, scale in zip(powers[:retained], scales[:retained]):
        ratio += coeff * scale
    next_power = {3: (-0.5, -1.0, rem), 2: (-1.0, rem)}[max_terms]
    remainder = next_power[terms - 1]
    exponent = (space.dim / 2.0) if quantity == "N" else (space.dim / 2.0 + 1)
    value = float(lead) * zf ** exponent * ratio
    return ExpansionEval(value, ratio, terms, remainder)


# ---------------------------------------------------------------------------
# Quadratic-polynomial bookkeeping and the Stirling check


def pab(a, b, x):
    """P_{a,b}(x) = 1 + a x + b x^2."""
    return 1 + a * x + b * x * x


def pab_product(pairs: Sequence[Tuple[Real, Real]]):
    """Combined (A, B+C) with Prod P_{a_j,b_j} = P_{A,B+C} + O(x^3).

    A = Sigma a_j, B = Sigma b_j, C = (A^2 - Sigma a_j^2) / 2.
    """
    pairs = list(pairs)
    a_total = sum((Fraction(a) for a, _ in pairs), Fraction(0))
    b_total = sum((Fraction(b) for _, b in pairs), Fraction(0))
    sq = sum((Fraction(a) ** 2 for a, _ in pairs), Fraction(0))
    c = (a_total ** 2 - sq) / 2
    return a_total, b_total + c


def pab_inverse(a, b):
    """1 / P_{a,b} = P_{-a, a^2-b} + O(x^3)."""
    a = Fraction(a)
    return -a, a * a - Fraction(b)


def pab_shifted(a, b, c):
    """P_{a,b}(x / (1 + c x)) = P_{a, b - a c}(x) + O(x^3)."""
    return Fraction(a), Fraction(b) - Fraction(a) * Fraction(c)


@dataclass(frozen=True)
class StirlingCheck:
    max_scaled_deviation: float       # max over grid of |ratio - 1| * x^3
    deviations: Tuple[Tuple[float, float], ...]  # (x, |ratio - 1|)


def gamma_asymptotic_check(x_grid: Iterable[float]) -> StirlingCheck:
    """|Gamma(x) / two-term Stirling - 1| * x^3 over a grid of x >= 5.

    The two-term Stirling factor is P_{1/12, 1/288}(1/x); the scaled
    deviation tends to the third Stirling coefficient 139/51840.
    """
    rows = []
    worst = 0.0
    for x in x_grid:
        if x < 5:
            raise ValueError("grid points must satisfy x >= 5")
        stirling = (math.sqrt(2 * math.pi) * x ** (x - 0.5) * math.exp(-x)
                    * pab(1 / 12.0, 1 / 288.0, 1.0 / x))
        dev = abs(gamma_real(x) / stirling - 1.0)
        rows.append((x, dev))
        worst = max(worst, dev * x ** 3)
    return StirlingCheck(worst, tuple(rows))
