"""Ground truth for small instances and from-scratch evaluation.

Nothing here reuses the incremental sidelobe machinery of
:mod:`pslsearch.sequence` except the Gray-code enumeration, which is itself
cross-checked against :func:`exhaustive_psl_unpruned`.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

import numba as nb
import numpy as np

from pslsearch.errors import CapabilityError, FitnessOverflowError
from pslsearch.sequence import _apply_flip, _build_table, as_sequence

MAX_EXHAUSTIVE_LENGTH = 28
MAX_UNPRUNED_LENGTH = 20


def brute_sidelobes(s) -> list[int]:
    """``[C_1, ..., C_{L-1}]`` by direct correlation, as Python ints."""
    s = as_sequence(s).astype(np.int64)
    n = s.shape[0]
    return np.correlate(s, s, mode="full")[n:].tolist()


def brute_fitness(s, alpha: int) -> float:
    """Fitness recomputed from scratch, terms added in ascending shift order."""
    sidelobes = brute_sidelobes(s)
    total = 0.0
    for ck in sidelobes:
        try:
            total += float(abs(ck) ** alpha)
        except OverflowError:
            raise FitnessOverflowError(len(sidelobes) + 1, alpha) from None
    if not math.isfinite(total):
        raise FitnessOverflowError(len(sidelobes) + 1, alpha)
    return total


def brute_psl(s) -> int:
    return max(abs(c) for c in brute_sidelobes(s))


@nb.njit(cache=True)
def _gray_search(n):
    s = np.ones(n, dtype=np.int8)
    c = _build_table(s)
    best = n - 1
    best_code = 0
    code = 0
    for g in range(1, 1 << (n - 1)):
        bit = 0
        while not (g >> bit) & 1:
            bit += 1
        # bit b of the code is position n-1-b, so position 0 stays +1
        _apply_flip(s, c, n - 1 - bit)
        code ^= 1 << bit
        peak = 0
        for k in range(1, n):
            v = abs(c[k])
            if v > peak:
                peak = v
                if peak > best:
                    break
        if peak < best or (peak == best and code < best_code):
            best = peak
            best_code = code
    return best, best_code


def _decode(code: int, n: int) -> np.ndarray:
    bits = [(code >> (n - 1 - i)) & 1 for i in range(n)]
    return np.array([1 - 2 * b for b in bits], dtype=np.int8)


def exhaustive_psl(length: int) -> tuple[int, np.ndarray]:
    """Optimal PSL over all sequences of ``length`` and a witness.

    Enumerates the ``2^(L-1)`` sequences with ``s_1 = +1`` in Gray-code order.
    Among optimal sequences the witness is the lexicographically smallest,
    ordering ``+1`` before ``-1``.
    """
    if not 2 <= length <= MAX_EXHAUSTIVE_LENGTH:
        raise CapabilityError(
            f"exhaustive search supports 2 <= L <= {MAX_EXHAUSTIVE_LENGTH}, got L={length}"
        )
    best, code = _gray_search(length)
    return int(best), _decode(int(code), length)


def exhaustive_psl_unpruned(length: int) -> tuple[int, np.ndarray]:
    """Reference enumeration of all ``2^L`` sequences with full recomputation."""
    if not 2 <= length <= MAX_UNPRUNED_LENGTH:
        raise CapabilityError(
            f"unpruned enumeration supports 2 <= L <= {MAX_UNPRUNED_LENGTH}, got L={length}"
        )
    # rows in lexicographic order with +1 first, so argmin picks the smallest witness
    seqs = np.array(list(itertools.product((1, -1), repeat=length)), dtype=np.int32)
    peaks = np.zeros(len(seqs), dtype=np.int32)
    for k in range(1, length):
        ck = np.abs(np.sum(seqs[:, : length - k] * seqs[:, k:], axis=1))
        np.maximum(peaks, ck, out=peaks)
    i = int(np.argmin(peaks))
    return int(peaks[i]), seqs[i].astype(np.int8)


@dataclass(frozen=True)
class VerificationReport:
    length: int
    psl: int
    merit_factor: float
    histogram: dict[int, int]

    @property
    def below_sqrt_length(self) -> bool:
        return self.psl * self.psl < self.length


def verify_sequence(s) -> VerificationReport:
    """Recompute PSL, merit factor and the ``|C_k|`` histogram from scratch."""
    s = as_sequence(s)
    sidelobes = brute_sidelobes(s)
    n = s.shape[0]
    mags = Counter(abs(c) for c in sidelobes)
    energy = sum(c * c for c in sidelobes)
    return VerificationReport(
        length=n,
        psl=max(mags),
        merit_factor=n * n / (2 * energy),
        histogram=dict(sorted(mags.items())),
    )
