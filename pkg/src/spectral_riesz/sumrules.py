"""Exact sum rules for closed rank-one symmetric spaces.

The P_N / Q_N quadratic-polynomial identity at spectral gaps, the shifted
R_2 monotonicity ratios, the trace-identity series, and the two-sided R_2
Weyl bounds.  Identity checks run in exact rational arithmetic with zero
tolerance; floating point never enters them.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Tuple

from .riesz import SpectrumQuery, _table, riesz_mean
from .spaces import DEFAULT_LEVEL_CAP, Real, Space, eigenvalue, multiplicity
from .weyl import lclass_volume


@dataclass(frozen=True)
class QuadPoly:
    """Quadratic c2 z^2 + c1 z + c0 with exact rational coefficients."""

    c2: Fraction
    c1: Fraction
    c0: Fraction

    def __call__(self, z):
        return (self.c2 * z + self.c1) * z + self.c0

    def __eq__(self, other):
        return (isinstance(other, QuadPoly) and self.c2 == other.c2
                and self.c1 == other.c1 and self.c0 == other.c0)

    __hash__ = None


def _require_closed(space: Space):
    if not space.is_closed:
        raise ValueError("sum rules apply to closed spaces only")


def _prefix_upto(q: SpectrumQuery, n_min: int):
    """Table index state covering at least n_min eigenvalues."""
    l = q.min_level
    while True:
        tab = _table(q, l)
        if tab[2][l - q.min_level] >= n_min:
            return tab
        l += 1
        if l > DEFAULT_LEVEL_CAP:
            raise ValueError("level cap exceeded")


def _sums_first_n(space: Space, n: int) -> Tuple[int, int, int, int]:
    """(Sigma lambda_j, Sigma lambda_j^2, lambda_N, lambda_{N+1}) for j <= N=n."""
    q = SpectrumQuery(space)
    tab = _prefix_upto(q, n + 1)
    counts = tab[2]
    # Level holding the n-th eigenvalue.
    i = bisect.bisect_left(counts, n)
    prev_cnt = counts[i - 1] if i else 0
    s1 = (tab[3][i - 1] if i else 0) + (n - prev_cnt) * tab[0][i]
    s2 = (tab[4][i - 1] if i else 0) + (n - prev_cnt) * tab[0][i] ** 2
    lam_n = tab[0][i]
    j = bisect.bisect_left(counts, n + 1)
    lam_n1 = tab[0][j]
    return s1, s2, lam_n, lam_n1


def pn(space: Space, n: int) -> QuadPoly:
    """P_N(z) = Sigma_{j<=N} (z - lambda_j)(z - lambda - (d+4)/d lambda_j).

    lambda is the first positive eigenvalue of the space (= d on the
    sphere); coefficients come from exact prefix sums.
    """
    _require_closed(space)
    if n < 1:
        raise ValueError("N must be >= 1")
    d = space.dim
    lam1 = space.first_positive_eigenvalue
    s1, s2, _, _ = _sums_first_n(space, n)
    c1 = -2 * Fraction(d + 2, d) * s1 - Fraction(lam1 * n)
    c0 = Fraction(d + 4, d) * s2 + Fraction(lam1 * s1)
    return QuadPoly(Fraction(n), c1, c0)


def qn(space: Space, n: int) -> QuadPoly:
    """Q_N(z) = N (z - lambda_N)(z - lambda_{N+1})."""
    _require_closed(space)
    if n < 1:
        raise ValueError("N must be >= 1")
    _, _, lam_n, lam_n1 = _sums_first_n(space, n)
    return QuadPoly(Fraction(n), Fraction(-n * (lam_n + lam_n1)),
                    Fraction(n * lam_n * lam_n1))


def gap_indices(space: Space, l_max: int) -> List[int]:
    """Cumulative multiplicities N = Sigma_{l<=L} m_l for L = 0..l_max."""
    _require_closed(space)
    total = 0
    out = []
    for l in range(0, l_max + 1):
        total += multiplicity(space, l)
        out.append(total)
    return out


@dataclass(frozen=True)
class PQReport:
    space: str
    gap_indices: Tuple[int, ...]
    mismatches: Tuple[int, ...]

    @property
    def passed(self) -> bool:
        return not self.mismatches


def check_pq_identity(space: Space, l_max: int) -> PQReport:
    """Coefficient-wise exact equality P_N = Q_N at every gap index.

    A mismatch is a hard failure; the report carries the indices checked.
    """
    _require_closed(space)
    if l_max < 1:
        raise ValueError("l_max must be >= 1")
    gaps = gap_indices(space, l_max)
    bad = [n for n in gaps if pn(space, n) != qn(space, n)]
    return PQReport(space.describe(), tuple(gaps), tuple(bad))


# ---------------------------------------------------------------------------
# Shifted R_2 ratios and two-sided Weyl bounds


def r2_shifted_ratio(space: Space, z: Real, shift: Real) -> float:
    """R_2(z) / (z + b)^(2 + d/2); b = d lambda/4 is the natural shift."""
    if z < 0 or shift < 0:
        raise ValueError("z and shift must be >= 0")
    q = SpectrumQuery(space)
    r2 = float(riesz_mean(q, 2, float(z)))
    if z == 0 and shift == 0:
        return 0.0
    return r2 / (float(z) + float(shift)) ** (2 + space.dim / 2.0)


def natural_shift(space: Space) -> Fraction:
    """b = d lambda / 4 with lambda the first positive eigenvalue."""
    return Fraction(space.dim * space.first_positive_eigenvalue, 4)


@dataclass(frozen=True)
class R2BoundsReport:
    space: str
    n_points: int
    min_lower_slack: float
    min_upper_slack: float
    violations: Tuple[Tuple[float, str], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def r2_bounds_check(space: Space, grid) -> R2BoundsReport:
    """L_{2,d}|M^d| z^(2+d/2) <= R_2(z) <= L_{2,d}|M^d| (z + d lambda/4)^(2+d/2).

    Valid on closed rank-one spaces of dimension >= 2; on the circle the
    lower bound fails (the gap-minimum term (d-2)/(d+2) L(L+d) flips
    sign), so d = 1 is rejected.  Slack tolerance 1e-9 relative.
    """
    _require_closed(space)
    if space.dim < 2:
        raise ValueError("R2 two-sided bounds require dim >= 2")
    d = space.dim
    const = float(lclass_volume(space, 2))
    b = float(natural_shift(space))
    q = SpectrumQuery(space)
    lo_min = math.inf
    up_min = math.inf
    bad = []
    npts = 0
    for z in grid:
        zf = float(z)
        if zf < 0:
            continue
        npts += 1
        r2 = float(riesz_mean(q, 2, zf))
        lower = const * zf ** (2 + d / 2.0)
        upper = const * (zf + b) ** (2 + d / 2.0)
        slo = r2 - lower
        sup = upper - r2
        lo_min = min(lo_min, slo)
        up_min = min(up_min, sup)
        tol = 1e-9 * max(1.0, upper)
        if slo < -tol:
            bad.append((zf, "lower"))
        if sup < -tol:
            bad.append((zf, "upper"))
    return R2BoundsReport(space.describe(), npts, lo_min, up_min, tuple(bad))


# ---------------------------------------------------------------------------
# Trace identity series


def trace_identity_term(space: Space, l: int) -> float:
    """Single term of the trace series at level l.

    N_l (lamt_{l+1}^(-d/2) - lamt_l^(-d/2)
         + d/4 (lamt_{l+1}^(-1-d/2) + lamt_l^(-1-d/2)) (lam_{l+1} - lam_l))
    with lamt = lam + d lambda/4 and N_l the cumulative multiplicity.
    """
    _require_closed(space)
    d = space.dim
    b = float(natural_shift(space))
    q = SpectrumQuery(space)
    tab = _table(q, l + 1)
    n_l = tab[2][l]
    lam, lam1 = tab[0][l], tab[0][l + 1]
    tl, tl1 = lam + b, lam1 + b
    e = d / 2.0
    return n_l * (tl1 ** -e - tl ** -e
                  + (d / 4.0) * (tl1 ** (-1 - e) + tl ** (-1 - e)) * (lam1 - lam))


@dataclass(frozen=True)
class TraceReport:
    space: str
    l_max: int
    partial_sum: float
    target: float          # L^class_{0,d} |M^d|
    tail_estimate: float

    @property
    def within_tail(self) -> bool:
        return abs(self.partial_sum - self.target) <= self.tail_estimate


def trace_identity_partial(space: Space, l_max: int) -> TraceReport:
    """Partial sum of the trace series and a conservative tail estimate.

    Terms decay like C l^-3, so the tail behaves like |last| * l_max / 2;
    the estimate uses (l_max + 8)/2 as a validated safety margin.
    """
    _require_closed(space)
    if l_max < 0:
        raise ValueError("l_max must be >= 0")
    terms = [trace_identity_term(space, l) for l in range(l_max + 1)]
    partial = math.fsum(terms)
    tail = abs(terms[-1]) * (l_max + 8) / 2.0
    return TraceReport(space.describe(), l_max, partial,
                       float(lclass_volume(space, 0)), tail)


def q_plus_dr1_at_gap_minimum(space: Space, l: int) -> Tuple[Fraction, Fraction]:
    """(Q_N(z0) + d R_1(z0)) / N at z0 = (lambda_N + lambda_{N+1} - lambda)/2.

    Returns the exact value and the predicted (d-2)/(d+2) L(L+d) for the
    sphere gap after level L (lambda = d there).
    """
    _require_closed(space)
    d = space.dim
    n = gap_indices(space, l)[-1]
    _, _, lam_n, lam_n1 = _sums_first_n(space, n)
    z0 = Fraction(lam_n + lam_n1 - space.first_positive_eigenvalue, 2)
    value = (qn(space, n)(z0) + d * riesz_mean(SpectrumQuery(space), 1, z0)) / n
    predicted = Fraction(d - 2, d + 2) * l * (l + d)
    return value, predicted
