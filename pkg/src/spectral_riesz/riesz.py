"""Counting functions and Riesz-means, exact and floating.

Two evaluation paths everywhere: with int/Fraction arguments every result
is an exact rational (the oracle of record); with float arguments the
result is plain binary64 and is tested to stay within 1e-12 relative of
the rational path.  Prefix sums over the multiplicity-expanded spectrum
are cached per spectrum as immutable snapshots, so concurrent readers are
safe without locking on the read side.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Tuple

from .spaces import (DEFAULT_LEVEL_CAP, Family, Real, Space, eigenvalue,
                     max_level_index, multiplicity, sphere,
                     hemisphere_dirichlet)


class Variant(Enum):
    STANDARD = "standard"
    BUCKLING = "buckling"


@dataclass(frozen=True)
class SpectrumQuery:
    """Spectrum selector: space, operator power p for (-Delta)^p, variant.

    The buckling spectrum exists on the whole sphere only and equals the
    Laplacian spectrum with the l = 0 level removed.
    """

    space: Space
    power: int = 1
    variant: Variant = Variant.STANDARD

    def __post_init__(self):
        if self.power < 1:
            raise ValueError("power must be >= 1")
        if self.variant is Variant.BUCKLING and self.space.family is not Family.SPHERE:
            raise ValueError("buckling spectrum is only defined on spheres")

    @property
    def min_level(self) -> int:
        if self.variant is Variant.BUCKLING:
            return 1
        return self.space.min_level

    def level_value(self, l: int) -> int:
        """Exact eigenvalue lambda_(l)^p of level l for this query."""
        return eigenvalue(self.space, l) ** self.power


@dataclass(frozen=True)
class PrefixSums:
    """Exact prefix sums over the first k eigenvalues (multiplicities expanded)."""

    k: int
    sum1: int  # sum of lambda_j
    sum2: int  # sum of lambda_j^2


# Per-query cached columns: levels' lambda^p, mult, cumulative count,
# cumulative sum of m*lambda^p and of m*lambda^(2p).
_Table = Tuple[Tuple[int, ...], Tuple[int, ...], Tuple[int, ...],
               Tuple[int, ...], Tuple[int, ...]]
_tables: dict = {}
_tables_lock = threading.Lock()


def _table(q: SpectrumQuery, upto_level: int) -> _Table:
    """Immutable prefix table covering levels min_level..upto_level (>=)."""
    tab = _tables.get(q)
    if tab is not None and len(tab[0]) > upto_level - q.min_level:
        return tab
    with _tables_lock:
        tab = _tables.get(q)
        have = len(tab[0]) if tab else 0
        need = upto_level - q.min_level + 1
        if have >= need:
            return tab
        lams = list(tab[0]) if tab else []
        mults = list(tab[1]) if tab else []
        cnt = list(tab[2]) if tab else []
        s1 = list(tab[3]) if tab else []
        s2 = list(tab[4]) if tab else []
        grow_to = max(need, 2 * have, 16)
        for i in range(have, grow_to):
            l = q.min_level + i
            lam = q.level_value(l)
            m = multiplicity(q.space, l)
            lams.append(lam)
            mults.append(m)
            cnt.append((cnt[-1] if cnt else 0) + m)
            s1.append((s1[-1] if s1 else 0) + m * lam)
            s2.append((s2[-1] if s2 else 0) + m * lam * lam)
        new = (tuple(lams), tuple(mults), tuple(cnt), tuple(s1), tuple(s2))
        _tables[q] = new
        return new


def max_level_index_pow(q: SpectrumQuery, z: Real, *,
                        level_cap: int = DEFAULT_LEVEL_CAP) -> Optional[int]:
    """Largest l with lambda_(l)^p <= z (exact comparisons), or None."""
    if z < 0:
        return None
    lmin = q.min_level
    if q.level_value(lmin) > z:
        return None
    if q.power == 1:
        base = max_level_index(q.space, z, level_cap=level_cap)
    else:
        zroot = float(z) ** (1.0 / q.power)
        # Overshoot the seed by a whisker; exact comparisons fix it below.
        base = max_level_index(q.space, zroot * (1 + 1e-12) + 1,
                               level_cap=level_cap)
    l = base if base is not None else lmin
    while l > lmin and q.level_value(l) > z:
        l -= 1
    while q.level_value(l + 1) <= z:
        l += 1
        if l > level_cap:
            raise ValueError(f"level cap {level_cap} exceeded at z={z!r}")
    return l if q.level_value(l) <= z else None


def counting(q: SpectrumQuery, z: Real, *,
             level_cap: int = DEFAULT_LEVEL_CAP) -> int:
    """N(z): number of eigenvalues lambda_j^p <= z, inclusive at equality."""
    L = max_level_index_pow(q, z, level_cap=level_cap)
    if L is None:
        return 0
    tab = _table(q, L)
    return tab[2][L - q.min_level]


def riesz_mean(q: SpectrumQuery, gamma: int, z: Real, *,
               level_cap: int = DEFAULT_LEVEL_CAP):
    """R_gamma(z) = sum_j (z - lambda_j^p)_+^gamma for gamma in {1, 2}.

    Exact Fraction for int/Fraction z, binary64 for float z.
    """
    if gamma not in (1, 2):
        raise ValueError("riesz_mean covers gamma in {1, 2}; use counting for 0")
    if z < 0:
        raise ValueError("riesz_mean requires z >= 0")
    exact = not isinstance(z, float)
    L = max_level_index_pow(q, z, level_cap=level_cap)
    if L is None:
        return Fraction(0) if exact else 0.0
    tab = _table(q, L)
    i = L - q.min_level
    n, s1, s2 = tab[2][i], tab[3][i], tab[4][i]
    if exact:
        zq = Fraction(z)
        return n * zq - s1 if gamma == 1 else n * zq * zq - 2 * s1 * zq + s2
    if gamma == 1:
        return n * z - float(s1)
    return (n * z - 2.0 * float(s1)) * z + float(s2)


def prefix_sums(q: SpectrumQuery, k: int, *,
                level_cap: int = DEFAULT_LEVEL_CAP) -> PrefixSums:
    """Exact Sigma lambda_j and Sigma lambda_j^2 over the first k eigenvalues."""
    if k < 1:
        raise ValueError("k must be >= 1")
    l = q.min_level
    while True:
        tab = _table(q, l)
        i = l - q.min_level
        if tab[2][i] >= k:
            break
        l += 1
        if l > level_cap:
            raise ValueError(f"level cap {level_cap} exceeded at k={k}")
    prev_cnt = tab[2][i - 1] if i else 0
    prev_s1 = tab[3][i - 1] if i else 0
    prev_s2 = tab[4][i - 1] if i else 0
    take = k - prev_cnt
    lam = tab[0][i]
    return PrefixSums(k, prev_s1 + take * lam, prev_s2 + take * lam * lam)


def eigenvalue_average(q: SpectrumQuery, k: int, *,
                       level_cap: int = DEFAULT_LEVEL_CAP) -> Fraction:
    """(1/k) Sigma_{j<=k} lambda_j, exact."""
    return Fraction(prefix_sums(q, k, level_cap=level_cap).sum1, k)


def nth_eigenvalue(q: SpectrumQuery, j: int, *,
                   level_cap: int = DEFAULT_LEVEL_CAP) -> int:
    """lambda_j of the flattened spectrum (1-based, nondecreasing)."""
    if j < 1:
        raise ValueError("j must be >= 1")
    l = q.min_level
    while True:
        tab = _table(q, l)
        i = l - q.min_level
        if tab[2][i] >= j:
            return tab[0][i]
        l += 1
        if l > level_cap:
            raise ValueError(f"level cap {level_cap} exceeded at j={j}")


# ---------------------------------------------------------------------------
# Closed forms (Gamma ratios as exact integer binomial products)

def counting_closed_hemisphere_dirichlet(d: int, L: Optional[int]) -> int:
    """N^D at floor(w)=L on the Dirichlet hemisphere: C(L+d-1, d)."""
    if L is None or L < 1:
        return 0
    return math.comb(L + d - 1, d)


def counting_closed_hemisphere_neumann(d: int, L: int) -> int:
    """N^N at floor(w)=L on the Neumann hemisphere: C(L+d, d)."""
    return math.comb(L + d, d)


def counting_closed_sphere(d: int, L: int) -> int:
    """N at floor(w)=L on the closed sphere: (2L+d)/d * C(L+d-1, d-1)."""
    return (2 * L + d) * math.comb(L + d - 1, d - 1) // d


def riesz1_closed_sphere(d: int, z: Real, *,
                         level_cap: int = DEFAULT_LEVEL_CAP):
    """Closed form for R_1 on the d-sphere.

    (2L+d) Gamma(L+d) / ((d+2) Gamma(L+1) Gamma(d+1)) * (-dL(L+d) + (d+2)z)
    with L the largest level index below z; the Gamma ratio is evaluated as
    an integer product.  Exact rational for rational z.
    """
    if z < 0:
        raise ValueError("riesz1_closed_sphere requires z >= 0")
    space = sphere(d)
    L = max_level_index(space, z, level_cap=level_cap)
    exact = not isinstance(z, float)
    gamma_ratio = math.prod(range(L + 1, L + d))  # Gamma(L+d)/Gamma(L+1)
    pre = Fraction((2 * L + d) * gamma_ratio,
                   (d + 2) * math.factorial(d))
    lin = -d * L * (L + d) + (d + 2) * (Fraction(z) if exact else z)
    return pre * lin if exact else float(pre) * lin


def lemma_sum(p: int, z: Real, *, level_cap: int = DEFAULT_LEVEL_CAP):
    """Sigma_{l>=1} (2l+1) (z - l^p (l+1)^p)_+  (the S^2 sum without l=0).

    Identical to the first Riesz-mean of the buckling spectrum on S^2
    raised to the power p.
    """
    q = SpectrumQuery(sphere(2), power=p, variant=Variant.BUCKLING)
    if z < 0:
        raise ValueError("lemma_sum requires z >= 0")
    return riesz_mean(q, 1, z, level_cap=level_cap)


# ---------------------------------------------------------------------------
# Integral transforms for polyharmonic Riesz means (exact piecewise form)

def _breakpoints_below(q: SpectrumQuery, z: Real, level_cap: int):
    L = max_level_index_pow(q, z, level_cap=level_cap)
    if L is None:
        return []
    tab = _table(q, L)
    return list(tab[0][:L - q.min_level + 1])


def _integral_power_times_r1(q: SpectrumQuery, z, p: int, level_cap: int):
    """integral_0^z u^(p-2) R_1(u) du, exactly on the piecewise-linear pieces.

    On [lambda_(l), lambda_(l+1)) the mean is R_1(u) = N_l u - S_l; the
    antiderivative of u^(p-2) (N u - S) is N u^p / p - S u^(p-1) / (p-1).
    """
    bps = _breakpoints_below(q, z, level_cap)
    total = Fraction(0)
    n = s1 = 0
    lmin = q.min_level
    for i, lo in enumerate(bps):
        m = multiplicity(q.space, lmin + i)
        n += m
        s1 += m * lo
        hi = bps[i + 1] if i + 1 < len(bps) else z
        if hi > lo:
            total += Fraction(n, p) * (hi ** p - lo ** p) \
                - Fraction(s1, p - 1) * (hi ** (p - 1) - lo ** (p - 1))
    return total


def _integral_power_times_counting(q: SpectrumQuery, z, p: int, level_cap: int):
    """integral_0^z u^(p-1) N(u) du = (1/p) Sigma_l N_l (b_{l+1}^p - b_l^p)."""
    bps = _breakpoints_below(q, z, level_cap)
    total = Fraction(0)
    n = 0
    lmin = q.min_level
    for i, lo in enumerate(bps):
        n += multiplicity(q.space, lmin + i)
        hi = bps[i + 1] if i + 1 < len(bps) else z
        if hi > lo:
            total += Fraction(n, p) * (hi ** p - lo ** p)
    return total


def poly_transform_check(d: int, p: int, z: Real, *,
                         level_cap: int = DEFAULT_LEVEL_CAP):
    """Residual of the two polyharmonic integral-transform identities.

    Identity 1 (whole sphere spectrum):
        Sigma (z^p - lambda_j^p)_+ =
            -p(p-1) * integral_0^z u^(p-2) R_1(u) du + p z^(p-1) R_1(z)
    Identity 2 (Dirichlet hemisphere spectrum):
        Sigma (z^p - lambda_j^p)_+ = p * integral_0^z u^(p-1) N^D(u) du

    Both integrals are evaluated exactly by breakpoint decomposition, so
    for rational z the residual is exactly zero.  Returns the max absolute
    residual of the two identities.
    """
    if p < 2:
        raise ValueError("transforms require p >= 2")
    if z < 0:
        raise ValueError("poly_transform_check requires z >= 0")
    zq = Fraction(z) if not isinstance(z, float) else Fraction(*z.as_integer_ratio())
    residuals = []

    q1 = SpectrumQuery(sphere(d), power=1)
    qp = SpectrumQuery(sphere(d), power=p)
    lhs1 = riesz_mean(qp, 1, zq ** p, level_cap=level_cap)
    integ = _integral_power_times_r1(q1, zq, p, level_cap)
    rhs1 = -p * (p - 1) * integ + p * zq ** (p - 1) * riesz_mean(q1, 1, zq)
    residuals.append(abs(lhs1 - rhs1))

    h1 = SpectrumQuery(hemisphere_dirichlet(d), power=1)
    hp = SpectrumQuery(hemisphere_dirichlet(d), power=p)
    lhs2 = riesz_mean(hp, 1, zq ** p, level_cap=level_cap)
    rhs2 = p * _integral_power_times_counting(h1, zq, p, level_cap)
    residuals.append(abs(lhs2 - rhs2))

    worst = max(residuals)
    return worst if not isinstance(z, float) else float(worst)
