"""Binary sequences, aperiodic autocorrelation and incremental one-flip updates.

A sequence is a 1-D ``int8`` array with entries in {+1, -1} and length
``L >= 2``. Positions are 0-based: position ``j`` holds element ``s_{j+1}``
of the usual 1-based notation.

A sidelobe table is an ``int32`` array ``c`` of length ``L`` with
``c[k] = C_k = sum_i s_i * s_{i+k}`` for ``k = 1..L-1``. Slot ``c[0]`` holds
the mainlobe ``C_0 = L`` so that shift ``k`` is stored at index ``k``.

Flipping ``s_j`` changes every sidelobe by

    delta_k = -2 * s_j * (s_{j-k} + s_{j+k})

where out-of-range terms are zero. That lets a single neighbor be scored in
O(L) from the pivot's table instead of O(L^2) from scratch.

Fitness is ``sum_{k=1}^{L-1} |C_k|^alpha`` accumulated in float64 in
ascending ``k``. Each term is the correctly rounded float64 value of the exact
integer power, looked up from :func:`power_table`.
"""

from __future__ import annotations

import functools
import math

import numba as nb
import numpy as np

from pslsearch.errors import ConfigurationError, FitnessOverflowError


def as_sequence(values) -> np.ndarray:
    """Validate ``values`` as a +1/-1 sequence and return it as contiguous int8."""
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise ConfigurationError(f"sequence must be 1-D, got shape {arr.shape}")
    if arr.shape[0] < 2:
        raise ConfigurationError(f"sequence length must be at least 2, got {arr.shape[0]}")
    if not np.all((arr == 1) | (arr == -1)):
        raise ConfigurationError("sequence elements must be +1 or -1")
    return np.ascontiguousarray(arr, dtype=np.int8)


def _check_alpha(alpha) -> int:
    if isinstance(alpha, bool) or int(alpha) != alpha or alpha < 1:
        raise ConfigurationError(f"alpha must be a positive integer, got {alpha!r}")
    return int(alpha)


def _check_position(j, length: int) -> int:
    if not 0 <= j < length:
        raise ValueError(f"position {j} out of range for L={length} (valid: 0..{length - 1})")
    return int(j)


@functools.lru_cache(maxsize=16)
def power_table(length: int, alpha: int) -> np.ndarray:
    """Read-only float64 table ``w[v] = v**alpha`` for ``v = 0..length``.

    Entries are ``float(v**alpha)`` computed from exact integers, so every term
    is correctly rounded regardless of the platform's ``pow``. Entries that do
    not fit in float64 are ``inf``.
    """
    alpha = _check_alpha(alpha)
    w = np.empty(length + 1, dtype=np.float64)
    for v in range(length + 1):
        try:
            w[v] = float(v**alpha)
        except OverflowError:
            w[v:] = np.inf
            break
    w.flags.writeable = False
    return w


# --- kernels -----------------------------------------------------------------


@nb.njit(cache=True, nogil=True)
def _build_table(s):
    n = s.shape[0]
    c = np.empty(n, dtype=np.int32)
    c[0] = n
    for k in range(1, n):
        acc = 0
        for i in range(n - k):
            acc += s[i] * s[i + k]
        c[k] = acc
    return c


@nb.njit(cache=True, nogil=True)
def _table_fitness(c, w):
    acc = 0.0
    for k in range(1, c.shape[0]):
        acc += w[abs(c[k])]
    return acc


@nb.njit(cache=True, nogil=True)
def _flip_deltas(s, j):
    n = s.shape[0]
    d = np.zeros(n, dtype=np.int32)
    m = -2 * s[j]
    for k in range(1, n):
        t = 0
        if j - k >= 0:
            t += s[j - k]
        if j + k < n:
            t += s[j + k]
        d[k] = m * t
    return d


@nb.njit(cache=True, nogil=True)
def _apply_flip(s, c, j):
    n = s.shape[0]
    m = 2 * s[j]
    for k in range(1, n):
        t = 0
        if j - k >= 0:
            t += s[j - k]
        if j + k < n:
            t += s[j + k]
        c[k] -= m * t
    s[j] = -s[j]


@nb.njit(cache=True, nogil=True)
def _neighbor(s, c, j, w):
    # Three k-ranges: both partners in range, one partner, none.
    # The split keeps the inner loops branch-free; k still ascends.
    n = s.shape[0]
    m = 2 * s[j]
    acc = 0.0
    peak = 0
    both = min(j, n - 1 - j)
    for k in range(1, both + 1):
        v = abs(c[k] - m * (s[j - k] + s[j + k]))
        acc += w[v]
        if v > peak:
            peak = v
    if j < n - 1 - j:
        for k in range(both + 1, n - j):
            v = abs(c[k] - m * s[j + k])
            acc += w[v]
            if v > peak:
                peak = v
        rest = n - j
    else:
        for k in range(both + 1, j + 1):
            v = abs(c[k] - m * s[j - k])
            acc += w[v]
            if v > peak:
                peak = v
        rest = j + 1
    for k in range(rest, n):
        v = abs(c[k])
        acc += w[v]
        if v > peak:
            peak = v
    return acc, peak


@nb.njit(cache=True, nogil=True)
def _scan_block(s, c, w, start, lo, hi):
    n = s.shape[0]
    best_val = np.inf
    best_pos = -1
    psl_min = n
    psl_pos = -1
    overflow = False
    for i in range(lo, hi):
        j = (start + i + 1) % n
        val, peak = _neighbor(s, c, j, w)
        if not val < np.inf:
            overflow = True
        if val < best_val:
            best_val = val
            best_pos = j
        if peak < psl_min:
            psl_min = peak
            psl_pos = j
    return best_pos, best_val, psl_pos, psl_min, overflow


# --- public API --------------------------------------------------------------


def autocorrelation(s, k: int) -> int:
    """Aperiodic autocorrelation ``C_k`` of ``s`` for ``0 <= k <= L-1``."""
    s = as_sequence(s)
    n = s.shape[0]
    if not 0 <= k < n:
        raise ValueError(f"shift {k} out of range for L={n} (valid: 0..{n - 1})")
    return int(np.dot(s[: n - k].astype(np.int64), s[k:]))


def build_table(s) -> np.ndarray:
    """Sidelobe table of ``s``: ``c[k] = C_k`` for ``k = 1..L-1``, ``c[0] = L``."""
    return _build_table(as_sequence(s))


def psl(table: np.ndarray) -> int:
    """Peak sidelobe level: ``max |C_k|`` over ``k = 1..L-1``."""
    return int(np.abs(table[1:]).max())


def fitness(table: np.ndarray, alpha: int) -> float:
    """``sum_{k=1}^{L-1} |C_k|^alpha`` in ascending ``k``.

    Raises:
        FitnessOverflowError: if the sum is not a finite float64.
    """
    alpha = _check_alpha(alpha)
    n = table.shape[0]
    value = _table_fitness(table, power_table(n, alpha))
    if not math.isfinite(value):
        raise FitnessOverflowError(n, alpha)
    return value


def merit_factor(table: np.ndarray) -> float:
    """``L^2 / (2 * sum C_k^2)``."""
    n = table.shape[0]
    energy = int(np.sum(table[1:].astype(np.int64) ** 2))
    return n * n / (2 * energy)


def flip_deltas(s, j: int) -> np.ndarray:
    """Change of each ``C_k`` caused by flipping position ``j`` (0-based).

    Returns an int32 array ``d`` with ``d[k]`` the change of ``C_k``;
    ``d[0]`` is 0. Evaluated on the sequence before the flip.
    """
    s = as_sequence(s)
    return _flip_deltas(s, _check_position(j, s.shape[0]))


def evaluate_neighbor(s, table: np.ndarray, j: int, alpha: int) -> tuple[float, int]:
    """Fitness and PSL of ``s`` with position ``j`` flipped, in O(L).

    Neither ``s`` nor ``table`` is modified.
    """
    s = as_sequence(s)
    n = s.shape[0]
    j = _check_position(j, n)
    alpha = _check_alpha(alpha)
    value, peak = _neighbor(s, table, j, power_table(n, alpha))
    if not math.isfinite(value):
        raise FitnessOverflowError(n, alpha)
    return value, int(peak)


def apply_flip(s: np.ndarray, table: np.ndarray, j: int) -> None:
    """Negate ``s[j]`` and update ``table`` to match, both in place.

    ``s`` must already be a contiguous int8 array (see :func:`as_sequence`).
    """
    if s.dtype != np.int8 or table.dtype != np.int32:
        raise TypeError("apply_flip needs an int8 sequence and an int32 table")
    _apply_flip(s, table, _check_position(j, s.shape[0]))


def scan_block(s, table, weights, start: int, lo: int, hi: int):
    """Score neighbors ``j = (start + i + 1) % L`` for offsets ``lo <= i < hi``.

    Returns ``(best_pos, best_value, psl_pos, psl_value, overflow)``. Ties go
    to the smallest offset on both criteria. ``weights`` is a
    :func:`power_table`. Safe to call concurrently on shared read-only inputs.
    """
    return _scan_block(s, table, weights, start, lo, hi)
