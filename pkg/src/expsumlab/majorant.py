"""Majorant ratio estimation by phase-only coordinate ascent.

The worst-case ratio compares ``sup_{|a_j| <= 1} || sum a_j e(f_j y) ||_p``
against the unit-coefficient norm.  The objective is convex in the
coefficient vector, so its maximum over the polydisc sits at unimodular
coefficients a_j = e^{i theta_j}; only phases are optimized.

For even p the objective is evaluated exactly (it is an algebraic function of
the merged coefficient profile), and as a function of any single phase it is
a trigonometric polynomial of degree p/2.  Each coordinate update therefore
recovers that polynomial from a handful of exact samples, maximizes it on a
dense grid, and polishes by golden section to a 1e-12 bracket.  Multi-start
from the all-ones vector plus random phase vectors; the reported maximum is
a lower bound on the true supremum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expsum import FrequencySpectrum, even_norm_coeff, lp_norm_quadrature, suggested_nodes
from .moments import ExperimentSpec, TimeMap, _sample_values
from .processes import Pmf, SeedSpec

_SWEEP_LIMIT = 80
_BRACKET_TOL = 1e-12


@dataclass(frozen=True)
class MajorantResult:
    base_moment: float
    best_moment: float
    ratio: float
    best_phases: tuple[float, ...]
    restarts: int


@dataclass(frozen=True)
class GenericityPoint:
    size: int
    probability: float
    std_error: float
    samples: int
    threshold: float


def _golden_max(f, lo: float, hi: float, tol: float = _BRACKET_TOL) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
    return 0.5 * (lo + hi)


def _ascend_even(
    spectrum: FrequencySpectrum, n: int, phases: np.ndarray, base: float
) -> tuple[float, np.ndarray]:
    """Cyclic coordinate ascent on the exact even-p objective."""
    size = len(phases)
    harmonics = 4 * n + 4  # strictly more than the 2n+1 needed samples
    grid = np.linspace(0.0, 2.0 * math.pi, 64 * n + 64, endpoint=False)
    basis = np.exp(1j * np.outer(np.arange(1, n + 1), grid))

    def objective(theta: np.ndarray) -> float:
        return even_norm_coeff(spectrum.with_phases(theta), n)

    best = objective(phases)
    for _ in range(_SWEEP_LIMIT):
        sweep_gain = 0.0
        for j in range(size):
            samples = []
            saved = phases[j]
            for k in range(harmonics):
                phases[j] = 2.0 * math.pi * k / harmonics
                samples.append(objective(phases))
            phases[j] = saved
            coeff = np.fft.fft(np.asarray(samples)) / harmonics
            cm = coeff[1 : n + 1]

            def profile(theta: float) -> float:
                return float(coeff[0].real) + 2.0 * float(
                    np.sum(cm.real * np.cos(np.arange(1, n + 1) * theta)
                           - cm.imag * np.sin(np.arange(1, n + 1) * theta))
                )

            dense = coeff[0].real + 2.0 * (cm.real @ basis.real - cm.imag @ basis.imag)
            i_star = int(np.argmax(dense))
            width = grid[1] - grid[0]
            theta_star = _golden_max(profile, grid[i_star] - width, grid[i_star] + width)
            phases[j] = theta_star % (2.0 * math.pi)
            candidate = objective(phases)
            if candidate > best:
                sweep_gain += candidate - best
                best = candidate
            else:
                phases[j] = saved
        if sweep_gain < 1e-10 * max(1.0, base):
            break
    return best, phases


def majorant_ratio(
    freqs: Sequence[int], p: int, restarts: int = 1, seed: SeedSpec = SeedSpec(0)
) -> MajorantResult:
    """Maximize the L^p norm over unimodular coefficients, exactly for even p.

    Multi-start ascent: the all-ones vector first (so the result never falls
    below the unit-coefficient moment), then ``restarts - 1`` random phase
    vectors.  Ties between restarts resolve toward the earlier one.  The
    returned ratio is (best/base)^{1/p}, a lower bound on the true constant.
    """
    if p < 2 or p != int(p) or int(p) % 2 != 0:
        raise ValueError("exact majorant optimization needs an even integer p >= 2")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if not freqs:
        raise ValueError("frequency list must be nonempty")
    n = int(p) // 2
    spectrum = FrequencySpectrum.unit(freqs)
    base = even_norm_coeff(spectrum, n)
    best_val = -math.inf
    best_phases: np.ndarray | None = None
    for r in range(restarts):
        if r == 0:
            phases = np.zeros(len(freqs))
        else:
            phases = seed.generator(r).uniform(0.0, 2.0 * math.pi, len(freqs))
        val, phases = _ascend_even(spectrum, n, phases, base)
        if val > best_val:
            best_val = val
            best_phases = phases.copy()
    ratio = (best_val / base) ** (1.0 / p)
    return MajorantResult(base, best_val, ratio, tuple(float(t) for t in best_phases), restarts)


def majorant_ratio_quadrature(
    freqs: Sequence[int],
    p: float,
    restarts: int = 1,
    seed: SeedSpec = SeedSpec(0),
    nodes: int | None = None,
) -> MajorantResult:
    """Approximate majorant search for arbitrary p >= 1 (quadrature objective).

    Coordinate updates bracket on a coarse grid and polish by golden section
    directly on the quadrature objective; unlike the even-p path, nothing
    here is exact, and the result is only as good as the node count.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    spectrum = FrequencySpectrum.unit(freqs)
    nd = nodes if nodes is not None else suggested_nodes(spectrum, p)
    base = lp_norm_quadrature(spectrum, p, nd)

    def objective(theta: np.ndarray) -> float:
        return lp_norm_quadrature(spectrum.with_phases(theta), p, nd)

    best_val = -math.inf
    best_phases = None
    coarse = np.linspace(0.0, 2.0 * math.pi, 33, endpoint=False)
    for r in range(restarts):
        phases = (
            np.zeros(len(spectrum.terms))
            if r == 0
            else seed.generator(r).uniform(0.0, 2.0 * math.pi, len(spectrum.terms))
        )
        best = objective(phases)
        for _ in range(_SWEEP_LIMIT):
            gain = 0.0
            for j in range(len(phases)):
                saved = phases[j]

                def slice_obj(theta: float) -> float:
                    phases[j] = theta
                    return objective(phases)

                vals = [slice_obj(t) for t in coarse]
                i_star = int(np.argmax(vals))
                width = coarse[1] - coarse[0]
                theta_star = _golden_max(slice_obj, coarse[i_star] - width, coarse[i_star] + width)
                phases[j] = theta_star % (2.0 * math.pi)
                cand = objective(phases)
                if cand > best:
                    gain += cand - best
                    best = cand
                else:
                    phases[j] = saved
            if gain < 1e-10 * max(1.0, base):
                break
        if best > best_val:
            best_val = best
            best_phases = phases.copy()
    ratio = (best_val / base) ** (1.0 / p)
    return MajorantResult(base, best_val, ratio, tuple(float(t) for t in best_phases), restarts)


def genericity_experiment(
    process: str,
    time_map: TimeMap,
    sizes: Sequence[int],
    p: int,
    epsilon: float,
    samples: int,
    restarts: int,
    seed: SeedSpec,
    pmf: Pmf | None = None,
) -> list[GenericityPoint]:
    """Empirical probability that a realized set violates the majorant bound.

    For each size, `samples` paths are realized on the mapped index set
    {1..size}; each realized spectrum is phase-optimized and the event
    ratio >= size^epsilon recorded.  Binomial standard errors accompany every
    point.  Because the optimizer lower-bounds the supremum, the reported
    probabilities lower-bound the true event probabilities.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if samples < 1:
        raise ValueError("samples must be positive")
    points: list[GenericityPoint] = []
    for size in sizes:
        spec = ExperimentSpec(
            process=process,
            index_set=tuple(range(1, size + 1)),
            time_map=time_map,
            p=float(p),
            samples=samples,
            seed=seed.child((seed.stream_index << 16) ^ size),
            pmf=pmf,
        )
        threshold = size**epsilon
        opt_seed = SeedSpec(seed.master_seed, (seed.stream_index << 16) ^ size ^ (1 << 40))
        hits = 0
        for i in range(samples):
            values = sorted(_sample_values(spec, i))
            result = majorant_ratio(values, p, restarts, opt_seed)
            if result.ratio >= threshold:
                hits += 1
        prob = hits / samples
        se = math.sqrt(prob * (1.0 - prob) / samples)
        points.append(GenericityPoint(size, prob, se, samples, threshold))
    return points
