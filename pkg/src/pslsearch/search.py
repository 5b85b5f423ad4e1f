"""Two-phase limited-neighborhood search for low-PSL binary sequences.

The pivot walks through single-flip neighborhoods guided by the fitness
``sum |C_k|^alpha``. Each iteration scores ``n_lmt`` consecutive neighbors
starting at a random position and always moves to the best of them, even
when it is worse than the pivot. When the local best has not improved for
more than ``ls_lmt`` iterations the exponent is swapped between ``alpha1``
and ``alpha2`` and the pivot restarts from the local best with ``flip_lmt``
random elements flipped. Every scored neighbor competes for the best PSL,
independently of the fitness guidance.

Random numbers come from numpy's PCG64 bit generator seeded with
``params.seed``, drawn in this order: the L bits of the initial pivot (unless
a warm start is given), then one ``start`` per iteration, plus ``flip_lmt``
distinct positions at each phase switch.
"""

from __future__ import annotations

import math
import time
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from pslsearch import __version__
from pslsearch.errors import FitnessOverflowError
from pslsearch.records import ConvergenceEvent, RunRecord, SearchParams
from pslsearch.sequence import (
    _apply_flip,
    _build_table,
    _table_fitness,
    merit_factor,
    power_table,
    psl,
    scan_block,
)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_sequence(length: int, rng: np.random.Generator) -> np.ndarray:
    """Independent fair +1/-1 draws as an int8 array."""
    if length < 2:
        raise ValueError(f"length must be at least 2, got {length}")
    bits = rng.integers(0, 2, size=length, dtype=np.int8)
    return (2 * bits - 1).astype(np.int8)


@dataclass
class SearchState:
    pivot: np.ndarray
    table: np.ndarray
    alpha: int
    weights: np.ndarray
    value_local: float
    local_best: np.ndarray
    local_table: np.ndarray
    unimproved: int
    psl_best: int
    solution_best: np.ndarray
    nse: int
    phase_index: int


@dataclass(frozen=True)
class ScanResult:
    best_index: int
    value_step: float
    best_neighbor_psl: int
    best_psl_index: int


class ScanPool:
    """Splits each neighborhood scan into contiguous chunks, one per worker.

    Chunk results are combined in chunk order with strict comparisons, which
    reproduces the sequential scan exactly for any worker count.
    """

    def __init__(self, workers: int = 1):
        self.workers = workers
        self._executor = ThreadPoolExecutor(max_workers=workers) if workers > 1 else None

    def close(self):
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def map_chunks(self, fn, n: int):
        if self._executor is None or n < 2:
            return [fn(0, n)]
        parts = min(self.workers, n)
        bounds = [n * p // parts for p in range(parts + 1)]
        futures = [self._executor.submit(fn, lo, hi) for lo, hi in zip(bounds, bounds[1:])]
        return [f.result() for f in futures]


def neighborhood_scan(state: SearchState, start: int, n: int, pool: ScanPool | None = None) -> ScanResult:
    """Score neighbors ``(start + i) % L`` for ``i = 1..n`` and reduce them.

    The fitness argmin and the PSL argmin each keep the first neighbor in scan
    order among ties. Adds ``n`` to ``state.nse``.
    """
    s, c, w = state.pivot, state.table, state.weights

    def chunk(lo, hi):
        return scan_block(s, c, w, start, lo, hi)

    parts = pool.map_chunks(chunk, n) if pool is not None else [chunk(0, n)]
    state.nse += n
    best_pos, best_val, psl_pos, psl_min = -1, math.inf, -1, s.shape[0]
    for pos, val, ppos, pmin, overflow in parts:
        if overflow:
            raise FitnessOverflowError(s.shape[0], state.alpha)
        if val < best_val:
            best_pos, best_val = pos, val
        if pmin < psl_min:
            psl_pos, psl_min = ppos, pmin
    return ScanResult(best_pos, best_val, psl_min, psl_pos)


def _fitness_or_raise(table: np.ndarray, weights: np.ndarray, alpha: int) -> float:
    value = _table_fitness(table, weights)
    if not math.isfinite(value):
        raise FitnessOverflowError(table.shape[0], alpha)
    return value


def switch_phase(state: SearchState, params: SearchParams, rng: np.random.Generator) -> None:
    """Swap the exponent and restart the pivot from a perturbed local best.

    The local best itself is kept; only the pivot moves. Costs one evaluation.
    """
    state.alpha = params.alpha2 if state.phase_index == 1 else params.alpha1
    state.phase_index = 3 - state.phase_index
    state.weights = power_table(params.length, state.alpha)
    pivot = state.local_best.copy()
    table = state.local_table.copy()
    for j in rng.choice(params.length, size=params.flip_lmt, replace=False):
        _apply_flip(pivot, table, int(j))
    state.pivot, state.table = pivot, table
    state.value_local = _fitness_or_raise(table, state.weights, state.alpha)
    state.nse += 1
    state.unimproved = 0


def initial_state(params: SearchParams, rng: np.random.Generator) -> SearchState:
    """Pivot, table and bookkeeping before the first iteration (one evaluation)."""
    if params.init is not None:
        pivot = params.init.copy()
    else:
        pivot = random_sequence(params.length, rng)
    table = _build_table(pivot)
    weights = power_table(params.length, params.alpha1)
    value = _fitness_or_raise(table, weights, params.alpha1)
    return SearchState(
        pivot=pivot,
        table=table,
        alpha=params.alpha1,
        weights=weights,
        value_local=value,
        local_best=pivot.copy(),
        local_table=table.copy(),
        unimproved=0,
        psl_best=psl(table),
        solution_best=pivot.copy(),
        nse=1,
        phase_index=1,
    )


def run_search(
    params: SearchParams,
    on_event: Callable[[ConvergenceEvent], None] | None = None,
    state_hook: Callable[[SearchState], None] | None = None,
) -> RunRecord:
    """Run the two-phase search until the NSE budget or time limit is reached.

    ``on_event`` receives each convergence event as it happens. ``state_hook``
    is called with the live state after every iteration; it is meant for
    monitoring and tests and must not mutate the state.
    """
    params = params.resolved()
    rng = make_rng(params.seed)
    t0 = time.perf_counter()
    events: list[ConvergenceEvent] = []

    def emit(kind):
        ev = ConvergenceEvent(state.nse, time.perf_counter() - t0, state.psl_best, state.phase_index, kind)
        events.append(ev)
        if on_event is not None:
            on_event(ev)

    state = initial_state(params, rng)
    emit("improved-psl")
    length, n = params.length, params.n_lmt
    max_nse = params.max_nse
    deadline = None if params.max_seconds is None else t0 + params.max_seconds

    with ScanPool(params.workers) as pool:
        while True:
            if max_nse is not None and state.nse >= max_nse:
                break
            if deadline is not None and time.perf_counter() >= deadline:
                break
            start = int(rng.integers(length))
            step = neighborhood_scan(state, start, n, pool)
            if step.best_neighbor_psl < state.psl_best:
                state.psl_best = step.best_neighbor_psl
                best = state.pivot.copy()
                best[step.best_psl_index] = -best[step.best_psl_index]
                state.solution_best = best
                emit("improved-psl")
            _apply_flip(state.pivot, state.table, step.best_index)
            if step.value_step < state.value_local:
                state.unimproved = 0
                state.local_best = state.pivot.copy()
                state.local_table = state.table.copy()
                state.value_local = step.value_step
                emit("local-best-improved")
            elif step.value_step > state.value_local:
                state.unimproved += 1
                if state.unimproved > params.ls_lmt:
                    switch_phase(state, params, rng)
                    emit("phase-switch")
            if state_hook is not None:
                state_hook(state)

    elapsed = time.perf_counter() - t0
    best_table = _build_table(state.solution_best)
    assert psl(best_table) == state.psl_best
    return RunRecord(
        params=params,
        seed=params.seed,
        solution_best=state.solution_best,
        psl_best=state.psl_best,
        merit_factor=merit_factor(best_table),
        nse=state.nse,
        elapsed_seconds=elapsed,
        events=events,
        solver_version=__version__,
    )
