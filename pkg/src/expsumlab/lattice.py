"""Exact lattice-point counting.

Covers the divisor summatory function (hyperbola method), thin shells around
the power-difference surface k^d - j^d = E, the symmetric two-sided count
R_d(x), representation counts of sums of d-th powers, Green-Ruzsa digit sets,
and the interval-domination comparison for decreasing weights.

Counting conventions are exact and explicit:

* shell counts use the strict window |k^d - j^d - E| < D with j < k over the
  positive integers (so N starts at 1);
* R_d(x) uses the half-open condition 0 < |k|^d - |j|^d <= x over all of Z^2.

Real-valued E, D are honored exactly: integer quantities are compared with
the real bounds through exact rational thresholds, so boundary lattice points
are never misclassified by float rounding.  All powers are arbitrary
precision; counts above 128 bits raise instead of wrapping.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import GuardError, check_count
from .expsum import FrequencySpectrum, RepresentationTable, representation_table

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class ShellQuery:
    """Parameters of one shell count: |k^d - j^d - E| < D, j < k in N."""

    d: int
    E: float
    D: float

    def __post_init__(self):
        if self.d < 2 or self.d != int(self.d):
            raise ValueError("d must be an integer >= 2")
        if self.E < 1 or self.D < 1:
            raise ValueError("E and D must be at least 1")
        if self.E + self.D > 2**63:
            raise GuardError("E + D exceeds the supported range")


@dataclass(frozen=True)
class CountResult:
    count: int
    method: str
    work: int


def _strict_window(E: float, D: float) -> tuple[int, int]:
    """Integers v with E - D < v < E + D, as an inclusive [lo, hi] range.

    Exact for any float inputs: the bounds are converted to rationals before
    rounding, so v = E +- D itself is always excluded.
    """
    lo_f = Fraction(E) - Fraction(D)
    hi_f = Fraction(E) + Fraction(D)
    return math.floor(lo_f) + 1, math.ceil(hi_f) - 1


def _search_first(lo: int, hi: int, pred: Callable[[int], bool]) -> tuple[int, int]:
    """Smallest x in [lo, hi] with pred(x), else hi + 1; returns (x, steps)."""
    steps = 0
    while lo < hi:
        mid = (lo + hi) // 2
        steps += 1
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    steps += 1
    return (lo if pred(lo) else hi + 1), steps


def shell_count_brute(q: ShellQuery) -> CountResult:
    """Count shell pairs by scanning j and bisecting the k-range.

    j runs while d * j^{d-1} stays below E + D (no larger j can admit any k);
    for each j the admissible k form a contiguous block located by integer
    binary search on the strictly increasing map k -> k^d.
    """
    lo, hi = _strict_window(q.E, q.D)
    d = q.d
    lo = max(lo, 1)  # the difference k^d - j^d is at least 1 anyway
    count = 0
    work = 0
    j = 1
    slope = d  # d * j^{d-1}, maintained incrementally for the loop guard
    while slope <= hi:
        jd = j**d
        lo_target = jd + lo
        hi_target = jd + hi
        a = j + 1
        b = j + hi // slope + 1
        while a < b:  # smallest k with k^d >= lo_target
            mid = (a + b) >> 1
            work += 1
            if mid**d >= lo_target:
                b = mid
            else:
                a = mid + 1
        if a**d >= lo_target:
            k_lo = a
            a = k_lo
            b = j + hi // slope + 2
            while a < b:  # smallest k with k^d > hi_target
                mid = (a + b) >> 1
                work += 1
                if mid**d > hi_target:
                    b = mid
                else:
                    a = mid + 1
            count += a - k_lo
        j += 1
        slope = d * j ** (d - 1)
    return CountResult(check_count(count, "shell count"), "brute", work)


def _g(j: int, b: int, d: int) -> int:
    return (j + b) ** d - j**d - b**d


def shell_count_fast(q: ShellQuery) -> CountResult:
    """Count shell pairs by scanning the difference b = k - j.

    Writing k = j + b turns the window into bounds on the strictly
    increasing g(j) = (j+b)^d - j^d - b^d, and each b needs only two integer
    binary searches; total work O((E+D)^{1/d} log(E+D)).
    """
    lo, hi = _strict_window(q.E, q.D)
    d = q.d
    count = 0
    work = 0
    b = 1
    while b**d <= hi:
        bd = b**d
        g_lo = max(lo - bd, 1)  # g(j) >= 1 automatically for j >= 1
        g_hi = hi - bd
        if g_hi >= g_lo:
            ub = _floor_root(max(g_hi // (d * b), 1), d - 1) + 1
            x = 1
            y = ub
            while x < y:  # smallest j with g(j) >= g_lo
                mid = (x + y) >> 1
                work += 1
                if (mid + b) ** d - mid**d - bd >= g_lo:
                    y = mid
                else:
                    x = mid + 1
            if (x + b) ** d - x**d - bd >= g_lo:
                j_lo = x
                y = ub + 1
                while x < y:  # smallest j with g(j) > g_hi
                    mid = (x + y) >> 1
                    work += 1
                    if (mid + b) ** d - mid**d - bd > g_hi:
                        y = mid
                    else:
                        x = mid + 1
                count += x - j_lo
        b += 1
    return CountResult(check_count(count, "shell count"), "fast", work)


def _floor_root(v: int, d: int) -> int:
    """Largest integer r with r^d <= v (v >= 0, d >= 1), exactly."""
    if v < 0:
        raise ValueError("v must be nonnegative")
    if d == 1:
        return v
    if d == 2:
        return math.isqrt(v)
    if v == 0:
        return 0
    r = int(round(v ** (1.0 / d)))
    while r > 0 and r**d > v:
        r -= 1
    while (r + 1) ** d <= v:
        r += 1
    return r


def shell_sup_ratio(d: int, D: float, e_samples: int) -> tuple[int, float, float]:
    """Maximize the shell count over D <= E <= D^2 and scale by D^{2/d}.

    The grid is every integer in [D, D^2] when that fits the sample budget;
    otherwise a geometric grid plus the endpoints plus every realized
    difference k^d - j^d with j <= 2 D^{1/d} (counts peak near actual
    differences).  Returns (sup count, sup count / D^{2/d}, argmax E); ties
    resolve toward smaller E.
    """
    if e_samples < 1:
        raise ValueError("e_samples must be positive")
    if D < 1:
        raise ValueError("D must be at least 1")
    lo_e = math.ceil(Fraction(D))
    hi_e = math.floor(Fraction(D) * Fraction(D))
    lo_e = max(lo_e, 1)
    grid: list[float]
    if hi_e - lo_e + 1 <= e_samples:
        grid = [float(e) for e in range(lo_e, hi_e + 1)]
    else:
        es = {float(D), float(D) * float(D)}
        ratio = (hi_e / lo_e) ** (1.0 / max(e_samples - 1, 1))
        x = float(lo_e)
        for _ in range(e_samples):
            es.add(min(max(x, float(D)), float(D) * float(D)))
            x *= ratio
        j_cap = int(2 * D ** (1.0 / d)) + 1
        for j in range(1, j_cap + 1):
            k = j + 1
            while True:
                diff = k**d - j**d
                if diff > hi_e:
                    break
                if diff >= lo_e:
                    es.add(float(diff))
                k += 1
        grid = sorted(es)
    best_count = -1
    best_e = grid[0]
    for e in grid:
        c = shell_count_fast(ShellQuery(d, e, D)).count
        if c > best_count:
            best_count = c
            best_e = e
    return best_count, best_count / D ** (2.0 / d), best_e


def shell_power_law_bound(d: int, D: float, s: float) -> float:
    """Predicted count scale for shells |k^d - j^d - D^s| < D, unit constant.

    Two regimes split at s = d^2/(d^2 - d - 1); the exponents agree there,
    so the bound is continuous in s.
    """
    if d < 3 or d != int(d):
        raise ValueError("d must be an integer >= 3")
    if not (1.0 < s <= 2.0):
        raise ValueError("s must lie in (1, 2]")
    if D < 1:
        raise ValueError("D must be at least 1")
    split = d * d / (d * d - d - 1.0)
    if s <= split:
        return D ** (1.0 + s * (2.0 / d - 1.0))
    return D ** ((s / d) * (1.0 - 1.0 / d))


def hyperbolic_count(d: int, x: float) -> int:
    """R_d(x) = #{(j,k) in Z^2 : 0 < |k|^d - |j|^d <= x}.

    Decomposes by sign symmetry: 4 * (positive-pair count with the half-open
    condition) + 2 * floor(x^{1/d}) for the axis pairs (0, +-k).
    """
    if d < 2 or d != int(d):
        raise ValueError("d must be an integer >= 2")
    if x < 1:
        raise ValueError("x must be at least 1")
    fx = math.floor(Fraction(x))
    positive = 0
    b = 1
    while b**d <= fx:
        # count j >= 1 with 0 < g(j) + b^d <= fx; g > 0 always holds
        g_hi = fx - b**d
        if g_hi >= _g(1, b, d):
            ub = _floor_root(max(g_hi // (d * b), 1), d - 1) + 1 if d > 1 else g_hi
            j_hi, _ = _search_first(1, ub + 1, lambda j: _g(j, b, d) > g_hi)
            positive += j_hi - 1
        b += 1
    axis = _floor_root(fx, d)
    return check_count(4 * positive + 2 * axis, "hyperbolic count")


# ---------------------------------------------------------------------------
# divisor summatory function
# ---------------------------------------------------------------------------

def divisor_summatory(x: float) -> int:
    """D(x) = sum_{n <= x} d(n) by the hyperbola identity, O(sqrt x) time.

    D(x) = 2 * sum_{a <= sqrt x} floor(x/a) - floor(sqrt x)^2.
    """
    if x < 1:
        raise ValueError("x must be at least 1")
    n = math.floor(Fraction(x))
    s = math.isqrt(n)
    if n < 2**62:
        a = np.arange(1, s + 1, dtype=np.int64)
        total = int(np.sum(n // a))
    else:
        total = sum(n // a for a in range(1, s + 1))
    return check_count(2 * total - s * s, "divisor summatory")


def divisor_error(x: float) -> float:
    """Error term D(x) - x log x - (2*gamma - 1) x of the divisor sum."""
    if x < 1:
        raise ValueError("x must be at least 1")
    return divisor_summatory(x) - x * math.log(x) - (2 * EULER_GAMMA - 1) * x


# ---------------------------------------------------------------------------
# representation counts of d-th powers
# ---------------------------------------------------------------------------

def representation_count(n: int, d: int, M: int) -> RepresentationTable:
    """Table of R(m) = #{(j_1..j_n) : 1 <= j_i <= M, sum j_i^d = m}, exact."""
    if n < 1 or d < 1 or M < 1:
        raise ValueError("n, d, M must be positive integers")
    if n * M**d > 2**40:
        raise GuardError("dense representation table exceeds the guard n*M^d <= 2^40")
    spectrum = FrequencySpectrum.unit(j**d for j in range(1, M + 1))
    return representation_table(spectrum, n)


def diophantine_count(n: int, d: int, M: int) -> int:
    """Number of 2n-tuples with equal sums of d-th powers: sum_m R(m)^2."""
    table = representation_count(n, d, M)
    total = sum(c * c for c in table.counts.values())
    return check_count(total, "diophantine count")


# ---------------------------------------------------------------------------
# Green-Ruzsa digit sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GreenRuzsaSpec:
    """Base-D digit set with k digits drawn from {0, 1, 3}; |set| = 3^k."""

    base: int
    digits: int

    def __post_init__(self):
        if self.base < 5:
            raise ValueError("base must be at least 5")
        if self.digits < 1:
            raise ValueError("digits must be at least 1")


def greenruzsa_generate(spec: GreenRuzsaSpec) -> list[int]:
    """All integers whose base-D digits (k of them) lie in {0, 1, 3}, sorted.

    Base >= 5 separates the digit choices, so all 3^k values are distinct.
    """
    if 3**spec.digits > 2**24:
        raise GuardError("3^k exceeds the guard 2^24")
    values = [0]
    power = 1
    for _ in range(spec.digits):
        values = [v + digit * power for v in values for digit in (0, 1, 3)]
        power *= spec.base
    values.sort()
    return values


def sparsity_count(sorted_set: Sequence[int], center: int, radius: int) -> int:
    """|set intersect [center - radius, center + radius]| by binary search."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    lo = bisect_left(sorted_set, center - radius)
    hi = bisect_right(sorted_set, center + radius)
    return hi - lo


# ---------------------------------------------------------------------------
# interval domination for decreasing weights
# ---------------------------------------------------------------------------

def domination_check(
    phi: Callable[[float], float],
    A: Sequence[int],
    b: int,
    d: int,
) -> tuple[float, float, bool]:
    """Compare sum_{j<k in A} phi(k^d - j^d) against the packed interval.

    The right side replaces A by the interval {b, ..., b + |A| - 1}; for a
    positive decreasing phi with 0 < b <= min(A) the left side never exceeds
    the right.  Returns (lhs, rhs, lhs <= rhs up to 1e-12 relative slack).
    """
    a = sorted(set(int(v) for v in A))
    if len(a) != len(A):
        raise ValueError("A must have distinct elements")
    if not a:
        raise ValueError("A must be nonempty")
    if d < 2 or d != int(d):
        raise ValueError("d must be an integer >= 2")
    if not (0 < b <= a[0]):
        raise ValueError("b must satisfy 0 < b <= min(A)")
    args: list[int] = []
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            args.append(a[j] ** d - a[i] ** d)
    rhs_args: list[int] = []
    top = b + len(a) - 1
    for j in range(b, top + 1):
        for k in range(j + 1, top + 1):
            rhs_args.append(k**d - j**d)
    queried = sorted(set(args + rhs_args))
    vals = {q: float(phi(q)) for q in queried}
    for q in queried:
        if not vals[q] > 0:
            raise ValueError("phi must be positive on the queried domain")
    for q1, q2 in zip(queried, queried[1:]):
        if vals[q2] > vals[q1] * (1 + 1e-12):
            raise ValueError("phi must be decreasing on the queried domain")
    lhs = math.fsum(vals[q] for q in args)
    rhs = math.fsum(vals[q] for q in rhs_args)
    return lhs, rhs, lhs <= rhs + 1e-12 * rhs
