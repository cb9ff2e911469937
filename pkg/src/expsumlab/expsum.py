"""Exact and numerical L^p(T) norms of exponential sums with integer frequencies.

For even exponents p = 2n the norm ``|| sum_j a_j e(f_j y) ||_p^p`` is a
finite algebraic quantity: merge coefficients by frequency, convolve the
profile n times with itself, and sum the squared magnitudes.  With unit
coefficients everything is integer counting and is carried out in exact
arithmetic (overflow-checked at 128 bits, never wrapped).  For arbitrary
p >= 1 a rectangle-rule quadrature is provided; on even integer p it is exact
once the node count exceeds the polynomial bandwidth.

Convolutions are dense over the frequency span when the span is small
(packed big-integer multiplication keeps them exact) and sparse map-based
otherwise, since realized frequency sets like {N(j^d)} have huge span but few
entries.  Negative frequencies are allowed everywhere.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import COUNT_LIMIT, check_count

DENSE_SPAN_LIMIT = 1 << 20
_INT64_SAFE = 1 << 62


@dataclass(frozen=True)
class FrequencySpectrum:
    """A finite list of (frequency, coefficient) terms.

    The raw term list keeps multiplicity: repeated frequencies matter for
    moment counting, where each term is a separate summand.  ``merged()``
    collapses equal frequencies by summing coefficients.
    """

    terms: tuple[tuple[int, complex], ...]

    @classmethod
    def unit(cls, freqs: Iterable[int]) -> "FrequencySpectrum":
        return cls(tuple((int(f), 1 + 0j) for f in freqs))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, complex]]) -> "FrequencySpectrum":
        return cls(tuple((int(f), complex(c)) for f, c in pairs))

    @property
    def size(self) -> int:
        return len(self.terms)

    @property
    def freqs(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.terms)

    @property
    def is_unit(self) -> bool:
        return all(c == 1 + 0j for _, c in self.terms)

    def multiplicities(self) -> dict[int, int]:
        """Frequency -> multiplicity map (requires integer-like unit terms)."""
        return dict(sorted(Counter(f for f, _ in self.terms).items()))

    def merged(self) -> dict[int, complex]:
        """Frequency -> summed coefficient, in increasing frequency order."""
        acc: dict[int, complex] = {}
        for f, c in sorted(self.terms, key=lambda t: t[0]):
            acc[f] = acc.get(f, 0j) + c
        return acc

    def with_phases(self, phases: Sequence[float]) -> "FrequencySpectrum":
        """Replace each coefficient with the unimodular e^{i*phase}."""
        if len(phases) != len(self.terms):
            raise ValueError("one phase per term required")
        return FrequencySpectrum(
            tuple((f, complex(math.cos(t), math.sin(t))) for (f, _), t in zip(self.terms, phases))
        )


@dataclass(frozen=True)
class RepresentationTable:
    """Exact counts R(m) of ordered n-tuples of terms summing to m."""

    counts: dict[int, int]
    order: int

    def __getitem__(self, m: int) -> int:
        return self.counts.get(m, 0)

    def total(self) -> int:
        return sum(self.counts.values())


# ---------------------------------------------------------------------------
# exact integer convolution
# ---------------------------------------------------------------------------

def _kronecker_multiply(va: list[int], vb: list[int]) -> list[int]:
    # Exact polynomial product by packing coefficients into one big integer.
    amax, bmax = max(va), max(vb)
    out_len = len(va) + len(vb) - 1
    if amax == 0 or bmax == 0:
        return [0] * out_len
    slot_bits = (amax * bmax * min(len(va), len(vb))).bit_length() + 1
    width = (slot_bits + 7) // 8
    pa = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in va), "little")
    pb = int.from_bytes(b"".join(x.to_bytes(width, "little") for x in vb), "little")
    raw = (pa * pb).to_bytes(out_len * width + width, "little")
    return [int.from_bytes(raw[i * width:(i + 1) * width], "little") for i in range(out_len)]


def _conv_counts_dense(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    amin, bmin = min(a), min(b)
    va = [0] * (max(a) - amin + 1)
    for f, c in a.items():
        va[f - amin] = c
    vb = [0] * (max(b) - bmin + 1)
    for f, c in b.items():
        vb[f - bmin] = c
    prod = _kronecker_multiply(va, vb)
    base = amin + bmin
    return {base + i: c for i, c in enumerate(prod) if c}


def _conv_counts_sparse(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    mass_a = sum(a.values())
    mass_b = sum(b.values())
    fmax = max(abs(max(a)) + abs(max(b)), abs(min(a)) + abs(min(b)))
    if mass_a * mass_b < _INT64_SAFE and fmax < _INT64_SAFE:
        fa = np.fromiter(sorted(a), dtype=np.int64)
        fb = np.fromiter(sorted(b), dtype=np.int64)
        ca = np.fromiter((a[int(f)] for f in fa), dtype=np.int64)
        cb = np.fromiter((b[int(f)] for f in fb), dtype=np.int64)
        sums = np.add.outer(fa, fb).ravel()
        weights = np.multiply.outer(ca, cb).ravel()
        uniq, inv = np.unique(sums, return_inverse=True)
        acc = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(acc, inv, weights)
        return {int(f): int(c) for f, c in zip(uniq, acc)}
    out: dict[int, int] = {}
    for fa_, ca_ in sorted(a.items()):
        for fb_, cb_ in sorted(b.items()):
            k = fa_ + fb_
            out[k] = out.get(k, 0) + ca_ * cb_
    return dict(sorted(out.items()))


def _use_dense(a: dict, b: dict) -> bool:
    # Dense is only worthwhile when the profiles actually fill their span;
    # sparse wins whenever pairwise work is smaller than the output length.
    span = (max(a) + max(b)) - (min(a) + min(b))
    return span <= DENSE_SPAN_LIMIT and span <= 4 * len(a) * len(b)


def _conv_counts(a: dict[int, int], b: dict[int, int]) -> dict[int, int]:
    if _use_dense(a, b):
        out = _conv_counts_dense(a, b)
    else:
        out = _conv_counts_sparse(a, b)
    for c in out.values():
        check_count(c, "integer convolution")
    return out


def representation_table(spectrum: FrequencySpectrum, n: int) -> RepresentationTable:
    """R(m) = number of ordered n-tuples of term indices with frequency sum m.

    Needs a unit spectrum; computed by n-1 exact integer convolutions of the
    multiplicity profile.  Total mass is exactly (number of terms)^n.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not spectrum.terms:
        raise ValueError("empty spectrum")
    if not spectrum.is_unit:
        raise ValueError("representation_table requires unit coefficients")
    profile = spectrum.multiplicities()
    table = dict(profile)
    for _ in range(n - 1):
        table = _conv_counts(table, profile)
    return RepresentationTable(table, n)


def even_moment(spectrum: FrequencySpectrum, n: int) -> int:
    """Exact ``|| sum_j e(f_j y) ||_{2n}^{2n}`` for a unit spectrum.

    Equals the number of ordered 2n-tuples (n-tuple vs n-tuple) whose
    frequency sums agree, i.e. sum_m R(m)^2.
    """
    table = representation_table(spectrum, n)
    total = sum(c * c for c in table.counts.values())
    return check_count(total, "even moment")


# ---------------------------------------------------------------------------
# complex coefficient path
# ---------------------------------------------------------------------------

def _conv_complex(a: dict[int, complex], b: dict[int, complex]) -> dict[int, complex]:
    if _use_dense(a, b):
        amin, bmin = min(a), min(b)
        va = np.zeros(max(a) - amin + 1, dtype=np.complex128)
        for f, c in a.items():
            va[f - amin] = c
        vb = np.zeros(max(b) - bmin + 1, dtype=np.complex128)
        for f, c in b.items():
            vb[f - bmin] = c
        prod = np.convolve(va, vb)
        base = amin + bmin
        return {base + i: complex(c) for i, c in enumerate(prod)}
    out: dict[int, complex] = {}
    for fa, ca in sorted(a.items()):
        for fb, cb in sorted(b.items()):
            k = fa + fb
            out[k] = out.get(k, 0j) + ca * cb
    return dict(sorted(out.items()))


def even_norm_coeff(spectrum: FrequencySpectrum, n: int) -> float:
    """``|| sum_j a_j e(f_j y) ||_{2n}^{2n}`` for arbitrary coefficients.

    Merges coefficients by frequency into c(m), forms the n-fold convolution
    c^{*n}, and returns sum_m |c^{*n}(m)|^2 (Parseval at n = 1).
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not spectrum.terms:
        raise ValueError("empty spectrum")
    profile = spectrum.merged()
    conv = dict(profile)
    for _ in range(n - 1):
        conv = _conv_complex(conv, profile)
    return math.fsum(abs(c) ** 2 for _, c in sorted(conv.items()))


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def suggested_nodes(spectrum: FrequencySpectrum, p: float) -> int:
    """Default node count: 4*n*span + 7, past the even-p exactness threshold."""
    freqs = spectrum.freqs
    span = max(freqs) - min(freqs) if freqs else 0
    n = max(1, math.ceil(p / 2))
    return 4 * n * span + 7


def lp_norm_quadrature(spectrum: FrequencySpectrum, p: float, nodes: int) -> float:
    """Rectangle-rule approximation of ``int_T |S(y)|^p dy``.

    The nodes are y = i/nodes.  Because the frequencies are integers, the
    phase f*i/nodes is reduced mod 1 in exact integer arithmetic before being
    passed to exp, so huge frequencies lose nothing.  For even integer
    p = 2n and nodes > 2n*(max f - min f) the rule integrates the underlying
    trigonometric polynomial exactly.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if nodes < 1:
        raise ValueError("nodes must be a positive integer")
    if not spectrum.terms:
        raise ValueError("empty spectrum")
    profile = spectrum.merged()
    residues = np.array([f % nodes for f in profile], dtype=np.int64)
    coeffs = np.array([profile[f] for f in profile], dtype=np.complex128)
    total = 0.0
    block = max(1, min(nodes, (1 << 22) // max(1, len(residues))))
    for start in range(0, nodes, block):
        i = np.arange(start, min(start + block, nodes), dtype=np.int64)
        phase_idx = (i[:, None] * residues[None, :]) % nodes
        z = np.exp((2j * np.pi / nodes) * phase_idx)
        s = np.sum(z * coeffs[None, :], axis=1)
        total += float(np.sum(np.abs(s) ** p))
    return total / nodes


def sup_norm_upper(spectrum: FrequencySpectrum) -> float:
    """sum_j |a_j|, an upper bound for the sup norm.

    For unit coefficients this is the exact sup norm (attained at y = 0).
    """
    return math.fsum(abs(c) for _, c in spectrum.terms)
