"""Exact samplers and pmf evaluators for the integer-valued processes.

Three processes drive every experiment in this package:

* i.i.d. draws from an integer-supported pmf (the stationary instance),
* the Poisson counting process of intensity 1,
* the simple random walk with fair +/-1 steps.

All sampling is routed through counter-based Philox streams keyed by
``(master_seed, stream_index, sample_index)``, so Monte Carlo loops can be
chunked across workers in any order and still produce bitwise identical
results.  Poisson increments are drawn exactly in distribution (numpy's
Generator uses the exact multiplication method for small means and an exact
transformed-rejection sampler for large means; no normal approximation is
ever involved).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

_U64 = 1 << 64


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one logical random stream.

    Distinct (master_seed, stream_index) pairs give statistically independent
    streams; within a stream, each sample_index addresses a disjoint
    2^128-long counter block of the same Philox keyed sequence.
    """

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_index"):
            v = getattr(self, name)
            if not isinstance(v, int) or not (0 <= v < _U64):
                raise ValueError(f"{name} must be an integer in [0, 2^64)")

    def generator(self, sample_index: int = 0) -> np.random.Generator:
        if not (0 <= sample_index < _U64):
            raise ValueError("sample_index must be in [0, 2^64)")
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        counter = np.array([0, 0, sample_index, 0], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(counter=counter, key=key))

    def child(self, stream_index: int) -> "SeedSpec":
        return SeedSpec(self.master_seed, stream_index)


@dataclass(frozen=True)
class Pmf:
    """Integer-supported probability mass function in canonical form.

    Values strictly increasing, probabilities nonnegative and summing to 1
    within 1e-12.
    """

    entries: tuple[tuple[int, float], ...]

    def __post_init__(self):
        if not self.entries:
            raise ValueError("pmf needs at least one support point")
        values = [v for v, _ in self.entries]
        probs = [p for _, p in self.entries]
        if any(values[i] >= values[i + 1] for i in range(len(values) - 1)):
            raise ValueError("pmf values must be strictly increasing")
        if any(p < 0 for p in probs):
            raise ValueError("pmf probabilities must be nonnegative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ValueError("pmf probabilities must sum to 1 within 1e-12")

    @classmethod
    def point(cls, value: int) -> "Pmf":
        return cls(((int(value), 1.0),))

    @classmethod
    def uniform(cls, values: Iterable[int]) -> "Pmf":
        vals = sorted(set(int(v) for v in values))
        if not vals:
            raise ValueError("uniform pmf needs a nonempty support")
        p = 1.0 / len(vals)
        return cls(tuple((v, p) for v in vals))

    @property
    def values(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.entries)

    @property
    def probs(self) -> tuple[float, ...]:
        return tuple(p for _, p in self.entries)

    def collision_mass(self) -> float:
        """Sum of squared probabilities (the two-draw coincidence mass)."""
        return math.fsum(p * p for p in self.probs)


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing nonnegative evaluation times; may be empty."""

    times: tuple[float, ...]

    def __post_init__(self):
        ts = self.times
        if ts and ts[0] < 0:
            raise ValueError("grid times must be nonnegative")
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            raise ValueError("grid times must be strictly increasing")

    @classmethod
    def from_times(cls, times: Iterable[float]) -> "TimeGrid":
        return cls(tuple(float(t) for t in times))

    @classmethod
    def indices(cls, count: int) -> "TimeGrid":
        return cls(tuple(float(i) for i in range(count)))

    def __len__(self) -> int:
        return len(self.times)


@dataclass(frozen=True)
class ProcessPath:
    """One realization of a process restricted to a finite grid."""

    grid: TimeGrid
    values: tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != len(self.grid):
            raise ValueError("one value per grid point required")


def poisson_pmf(mean: float, a: int) -> float:
    """P[N = a] for a Poisson variable of the given mean.

    Evaluated in log space so huge means neither overflow nor lose the tiny
    tail values; underflow saturates to 0.  mean = 0 is the point mass at 0.
    """
    if mean < 0:
        raise ValueError("mean must be nonnegative")
    if a < 0:
        return 0.0
    if mean == 0.0:
        return 1.0 if a == 0 else 0.0
    log_p = -mean + a * math.log(mean) - math.lgamma(a + 1)
    if log_p < -745.0:  # exp underflows to 0 below this
        return 0.0
    return math.exp(log_p)


def sample_iid(pmf: Pmf, count: int, seed: SeedSpec, sample_index: int = 0) -> ProcessPath:
    """Draw ``count`` independent values from ``pmf`` by inverse CDF.

    The inverse CDF walks the canonical (sorted) support, so the map from
    uniforms to values is unambiguous and reproducible.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    grid = TimeGrid.indices(count)
    if count == 0:
        return ProcessPath(grid, ())
    gen = seed.generator(sample_index)
    cum = np.cumsum(np.asarray(pmf.probs))
    u = gen.random(count)
    idx = np.searchsorted(cum, u, side="right")
    idx = np.minimum(idx, len(cum) - 1)
    support = np.asarray(pmf.values)
    return ProcessPath(grid, tuple(int(v) for v in support[idx]))


def sample_poisson_path(grid: TimeGrid, seed: SeedSpec, sample_index: int = 0) -> ProcessPath:
    """Sample N(t) at the grid times, exactly in distribution.

    The path is assembled from independent Poisson(dt) increments over the
    consecutive gaps, starting from N(0) = 0; values are therefore
    nondecreasing along the grid, and a grid starting at 0 starts at value 0.
    """
    if len(grid) == 0:
        return ProcessPath(grid, ())
    gen = seed.generator(sample_index)
    times = np.asarray(grid.times, dtype=np.float64)
    gaps = np.diff(np.concatenate(([0.0], times)))
    increments = gen.poisson(gaps)
    values = np.cumsum(increments)
    return ProcessPath(grid, tuple(int(v) for v in values))


def sample_random_walk(n_max: int, seed: SeedSpec, sample_index: int = 0) -> ProcessPath:
    """Simple random walk R(0..n_max), R(0) = 0, i.i.d. fair +/-1 steps."""
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    gen = seed.generator(sample_index)
    steps = gen.integers(0, 2, size=n_max, dtype=np.int64) * 2 - 1
    values = np.concatenate(([0], np.cumsum(steps)))
    grid = TimeGrid(tuple(float(i) for i in range(n_max + 1)))
    return ProcessPath(grid, tuple(int(v) for v in values))
