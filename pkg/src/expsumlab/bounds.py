"""Executable inequality oracles for the Poisson process.

Each operation computes an exact probabilistic quantity on one side and the
corresponding analytic bound on the other, returning both together with the
verdict.  Tail sums run in log space with explicit stopping rules (50
consecutive terms below 1e-18 of the accumulated mass, then a geometric
remainder bound), since the interesting scales reach e^{50} and beyond.

The bounds covered: Gaussian-like concentration of N(m) around m, the mode
bounds sup_t P[N(t)=a] <= 1/sqrt(2 pi a) and sup_a P[N(t)=a] at a = floor(t),
Robbins' two-sided Stirling refinement, mode bounds for positive integer
combinations of independent Poisson variables and for sums of process
increments, and the transfer of |x-y| windows across the sqrt(t log t) scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .moments import (
    SignedTimeMultiset,
    coincidence_probability_poisson,
    interval_coefficients,
)
from .processes import SeedSpec

_E50 = math.exp(50.0)
_TINY_FRACTION = 1e-18
_TINY_RUN = 50


@dataclass(frozen=True)
class BoundCheck:
    exact: float
    bound: float
    holds: bool
    slack: float


def _check(exact: float, bound: float) -> BoundCheck:
    holds = exact <= bound + 1e-12 * max(1.0, bound)
    return BoundCheck(exact, bound, holds, bound - exact)


_logfact_cache: list[float] = [0.0]


def _logfact(k: int) -> float:
    while len(_logfact_cache) <= k:
        _logfact_cache.append(_logfact_cache[-1] + math.log(len(_logfact_cache)))
    return _logfact_cache[k]


def _logpmf(a: int, lam: float) -> float:
    if lam == 0.0:
        return 0.0 if a == 0 else -math.inf
    return -lam + a * math.log(lam) - math.lgamma(a + 1)


def poisson_concentration_check(m: int, lam: float) -> BoundCheck:
    """P[|N(m) - m| > lam*sqrt(m)] against the bound 2 e^{-lam^2/4}.

    Both tails are summed exactly: the lower tail is finite, the upper tail
    runs until the stopping rule fires past 2m, where the term ratio is below
    1/2 and the remainder is dominated by the last term.
    """
    if m < 1 or m != int(m):
        raise ValueError("m must be a positive integer")
    if not (0.0 < lam <= math.sqrt(m)):
        raise ValueError("lam must lie in (0, sqrt(m)]")
    dev = lam * math.sqrt(m)
    terms: list[float] = []
    # lower tail: a < m - dev
    a0 = math.ceil(m - dev) - 1
    if a0 >= 0:
        term = math.exp(_logpmf(a0, float(m)))
        a = a0
        while a >= 0:
            terms.append(term)
            term *= a / m
            a -= 1
    # upper tail: a > m + dev
    a = math.floor(m + dev) + 1
    term = math.exp(_logpmf(a, float(m)))
    running = 0.0
    tiny_run = 0
    while True:
        terms.append(term)
        running += term
        if term < _TINY_FRACTION * max(running, 1e-300):
            tiny_run += 1
        else:
            tiny_run = 0
        if tiny_run >= _TINY_RUN and a > 2 * m:
            break  # remainder <= term * r/(1-r) <= term, itself negligible
        a += 1
        term *= m / a
    exact = math.fsum(terms)
    return _check(exact, 2.0 * math.exp(-lam * lam / 4.0))


def pmf_sup_over_t(a: int) -> BoundCheck:
    """sup_t P[N(t) = a] = a^a e^{-a} / a! against 1/sqrt(2 pi a).

    The supremum over the mean sits at t = a; evaluated in log space.
    """
    if a < 1 or a != int(a):
        raise ValueError("a must be a positive integer")
    exact = math.exp(a * math.log(a) - a - math.lgamma(a + 1))
    return _check(exact, 1.0 / math.sqrt(2.0 * math.pi * a))


def pmf_sup_over_a(t: float) -> tuple[int, float, float]:
    """(argmax, value, bound) of a -> P[N(t) = a]; the mode is floor(t).

    A scan over a in [0, t + 10 sqrt(t) + 10] confirms no strictly larger
    value exists (at integer t the pmf ties at t-1 and t).
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    k = math.floor(t)
    value = math.exp(_logpmf(k, t)) if t > 0 else 1.0
    bound = 1.0 if k == 0 else min(1.0, 1.0 / math.sqrt(2.0 * math.pi * k))
    a_max = int(t + 10.0 * math.sqrt(t) + 10.0)
    if t > 0:
        _logfact(a_max)
        arange = np.arange(a_max + 1, dtype=np.float64)
        logs = -t + arange * math.log(t) - np.asarray(_logfact_cache[: a_max + 1])
        top = float(np.max(logs))
        if top > math.log(max(value, 1e-300)) + 1e-10:
            raise RuntimeError("pmf mode scan found a larger value than floor(t)")
    return k, value, bound


def robbins_check(n: int) -> tuple[BoundCheck, BoundCheck]:
    """Both sides of Robbins' refinement of Stirling's formula.

    (2 pi n)^{-1/2} e^{-1/(12n)} <= n^n/(n! e^n) <= (2 pi n)^{-1/2} e^{-1/(12n+1)},
    evaluated in log space.
    """
    if n < 1 or n != int(n):
        raise ValueError("n must be a positive integer")
    log_ratio = n * math.log(n) - n - math.lgamma(n + 1)
    base = -0.5 * math.log(2.0 * math.pi * n)
    lower = _check(math.exp(base - 1.0 / (12.0 * n)), math.exp(log_ratio))
    upper = _check(math.exp(log_ratio), math.exp(base - 1.0 / (12.0 * n + 1.0)))
    return lower, upper


def _combo_exact_probability(means: Sequence[float], coeffs: Sequence[int], a: int) -> float:
    # P[sum_i c_i X_i = a] for independent Poisson X_i; exact because any
    # configuration overshooting a can never come back down.
    dist = np.zeros(a + 1, dtype=np.float64)
    dist[0] = 1.0
    for mu, c in zip(means, coeffs):
        kmax = a // c
        _logfact(kmax)
        ks = np.arange(kmax + 1, dtype=np.float64)
        pmf = np.exp(-mu + ks * math.log(mu) - np.asarray(_logfact_cache[: kmax + 1]))
        v = np.zeros(c * kmax + 1, dtype=np.float64)
        v[::c] = pmf
        dist = np.convolve(dist, v)[: a + 1]
    return float(dist[a])


def combo_pmf_bound_check(
    means: Sequence[float], coeffs: Sequence[int], a: int, tol: float
) -> BoundCheck:
    """P[sum_i c_i N_i = a] against min{1, 1/sqrt(2 pi floor(max mean))}.

    The probability is computed by exact truncated convolution (the target a
    caps every variable), well inside the requested tolerance.
    """
    if not (0.0 < tol <= 1e-3):
        raise ValueError("tol must lie in (0, 1e-3]")
    if len(means) != len(coeffs) or not means:
        raise ValueError("means and coeffs must be equal-length and nonempty")
    if any(mu <= 0 for mu in means):
        raise ValueError("means must be positive")
    if any(c < 1 or c != int(c) for c in coeffs):
        raise ValueError("coefficients must be positive integers")
    if a < 0:
        raise ValueError("a must be nonnegative")
    exact = _combo_exact_probability(means, coeffs, a)
    floor_mu = math.floor(max(means))
    bound = 1.0 if floor_mu == 0 else min(1.0, 1.0 / math.sqrt(2.0 * math.pi * floor_mu))
    return _check(exact, bound)


def interval_sum_bound_check(
    intervals: Sequence[tuple[float, float]], a: int, tol: float
) -> BoundCheck:
    """P[sum_i (N(k_i) - N(j_i)) = a] against the widest-interval mode bound.

    The intervals are decomposed into elementary pieces with integer
    multiplicities (shared with the coincidence engine), then the exact
    truncated DP of the combination check is run.  The bound uses
    floor((k_m - j_m)/(2n)) for the widest interval m among n intervals.
    """
    if not (0.0 < tol <= 1e-3):
        raise ValueError("tol must lie in (0, 1e-3]")
    if not intervals:
        raise ValueError("need at least one interval")
    for j, k in intervals:
        if not (0 <= j < k):
            raise ValueError("intervals must satisfy 0 <= j < k")
    if a < 0:
        raise ValueError("a must be nonnegative")
    lengths, coeffs = interval_coefficients(
        [k for _, k in intervals], [j for j, _ in intervals]
    )
    if not coeffs:
        exact = 1.0 if a == 0 else 0.0
    else:
        exact = _combo_exact_probability(lengths, coeffs, a)
    n = len(intervals)
    widest = max(k - j for j, k in intervals)
    floor_w = math.floor(widest / (2 * n))
    bound = 1.0 if floor_w == 0 else min(1.0, 1.0 / math.sqrt(2.0 * math.pi * floor_w))
    return _check(exact, bound)


def sqrt_log_transfer_check(x: float, y: float, C: float) -> tuple[bool, bool]:
    """Verify both window-transfer implications on one triple.

    (a) x > e^50 and |x-y| <= C sqrt(x log x)  implies |x-y| <= 2C sqrt(y log y);
    (b) y > e^50 and |x-y| >= 2C sqrt(x log x) implies |x-y| >= C sqrt(y log y).
    Either implication is vacuously true when its hypothesis fails.
    """
    if x < 1 or y < 1:
        raise ValueError("x and y must be at least 1")
    if not (1.0 <= C <= 10.0):
        raise ValueError("C must lie in [1, 10]")
    gap = abs(x - y)
    fx = math.sqrt(x * math.log(x)) if x > 1 else 0.0
    fy = math.sqrt(y * math.log(y)) if y > 1 else 0.0
    ant_a = x > _E50 and gap <= C * fx
    impl_a = (not ant_a) or gap <= 2.0 * C * fy
    ant_b = y > _E50 and gap >= 2.0 * C * fx
    impl_b = (not ant_b) or gap >= C * fy
    return impl_a, impl_b


# ---------------------------------------------------------------------------
# verification grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GridReport:
    name: str
    ok: bool
    checked: int
    detail: str


def _report(name: str, failures: list[str], checked: int) -> GridReport:
    ok = not failures
    detail = "ok" if ok else failures[0]
    return GridReport(name, ok, checked, detail)


def verification_suite(quick: bool = False, seed: SeedSpec | None = None) -> list[GridReport]:
    """Run every stated inequality grid; one report per grid.

    quick=True shrinks the grids by roughly an order of magnitude for smoke
    tests; the full suite is the acceptance configuration.
    """
    seed = seed or SeedSpec(20240)
    reports: list[GridReport] = []

    m_top = 40 if quick else 200
    failures, checked = [], 0
    for m in range(1, m_top + 1):
        lam_steps = int(10 * math.sqrt(m))
        for i in range(1, lam_steps + 1):
            lam = i / 10.0
            if lam > math.sqrt(m):
                break
            chk = poisson_concentration_check(m, lam)
            checked += 1
            if not chk.holds:
                failures.append(f"concentration m={m} lam={lam}")
    reports.append(_report("poisson_concentration", failures, checked))

    a_top = 500 if quick else 10_000
    failures = [f"pmf_sup_over_t a={a}" for a in range(1, a_top + 1) if not pmf_sup_over_t(a).holds]
    reports.append(_report("pmf_sup_over_t", failures, a_top))

    n_top = 500 if quick else 10_000
    failures = []
    for n in range(1, n_top + 1):
        lower, upper = robbins_check(n)
        if not (lower.holds and upper.holds):
            failures.append(f"robbins n={n}")
    reports.append(_report("robbins", failures, n_top))

    t_top = 100 if quick else 1000
    failures, checked = [], 0
    for k in range(1, t_top + 1):
        t = k / 10.0
        argmax, value, bound = pmf_sup_over_a(t)
        checked += 1
        if value > bound + 1e-12:
            failures.append(f"pmf_sup_over_a t={t}")
    reports.append(_report("pmf_sup_over_a", failures, checked))

    gen = seed.generator(0)
    trials = 1000 if quick else 10_000
    failures = []
    for i in range(trials):
        x = math.exp(gen.uniform(50.0, 80.0))
        c = gen.uniform(1.0, 10.0)
        mode = gen.integers(0, 3)
        if mode == 0:
            y = math.exp(gen.uniform(50.0, 80.0))
        else:
            # adversarial: y at a random multiple of the window width
            u = gen.uniform(0.0, 3.0)
            sign = 1.0 if gen.random() < 0.5 else -1.0
            y = max(1.0, x + sign * u * c * math.sqrt(x * math.log(x)))
        ia, ib = sqrt_log_transfer_check(x, y, c)
        if not (ia and ib):
            failures.append(f"sqrt_log_transfer x={x:.6g} y={y:.6g} C={c:.3f}")
    reports.append(_report("sqrt_log_transfer", failures, trials))

    gen = seed.generator(1)
    trials = 30 if quick else 100
    failures = []
    for i in range(trials):
        n = int(gen.integers(1, 4))
        means = [float(gen.uniform(0.1, 5.0)) for _ in range(n)]
        coeffs = [int(gen.integers(1, 4)) for _ in range(n)]
        a = int(gen.integers(0, 11))
        if not combo_pmf_bound_check(means, coeffs, a, 1e-9).holds:
            failures.append(f"combo means={means} coeffs={coeffs} a={a}")
    reports.append(_report("combo_pmf_bound", failures, trials))

    gen = seed.generator(2)
    trials = 30 if quick else 100
    failures = []
    for i in range(trials):
        n = int(gen.integers(1, 4))
        intervals = []
        for _ in range(n):
            j = float(gen.uniform(0.0, 10.0))
            k = j + float(gen.uniform(0.1, 10.0))
            intervals.append((j, k))
        a = int(gen.integers(0, 9))
        if not interval_sum_bound_check(intervals, a, 1e-9).holds:
            failures.append(f"interval_sum intervals={intervals} a={a}")
        if a == 0:
            chk = interval_sum_bound_check(intervals, 0, 1e-9)
            other = coincidence_probability_poisson(
                SignedTimeMultiset(
                    tuple(k for _, k in intervals), tuple(j for j, _ in intervals)
                ),
                1e-9,
            )
            if abs(chk.exact - other) > 1e-8:
                failures.append(f"interval_vs_coincidence intervals={intervals}")
    reports.append(_report("interval_sum_bound", failures, trials))

    return reports
