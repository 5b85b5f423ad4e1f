"""Parameter, event and run-record types."""

from __future__ import annotations

import dataclasses
import warnings
from dataclasses import dataclass, field

import numpy as np

from pslsearch.errors import ConfigurationError
from pslsearch.sequence import as_sequence

EVENT_KINDS = ("improved-psl", "phase-switch", "local-best-improved")

DEFAULT_ALPHA1 = 4
DEFAULT_LS_LMT = 2000
DEFAULT_FLIP_LMT = 10
DEFAULT_N_BLOCK = 1024


def default_alpha2(length: int) -> int:
    """Second-phase exponent used at each problem size.

    13 up to L = 2^17 - 1, 11 for L = 2^18 - 1, 10 beyond. Larger exponents
    risk overflowing the fitness sum on long sequences.
    """
    if length < 2**17:
        return 13
    if length < 2**18:
        return 11
    return 10


def default_n_lmt(length: int) -> int:
    return min(length, DEFAULT_N_BLOCK)


def _positive_int(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise ConfigurationError(f"{name} must be a positive integer, got {value!r}")
    return int(value)


@dataclass(frozen=True)
class SearchParams:
    """Control parameters of one search run.

    ``n_lmt``, ``alpha2`` and ``flip_lmt`` left as ``None`` resolve to
    :func:`default_n_lmt`, :func:`default_alpha2` and ``min(10, L)``. At least one of
    ``max_nse`` and ``max_seconds`` must be set; the run stops at whichever
    is reached first.
    """

    length: int
    seed: int = 0
    flip_lmt: int | None = None
    ls_lmt: int = DEFAULT_LS_LMT
    n_lmt: int | None = None
    alpha1: int = DEFAULT_ALPHA1
    alpha2: int | None = None
    max_nse: int | None = None
    max_seconds: float | None = None
    workers: int = 1
    init: np.ndarray | None = field(default=None, compare=False, repr=False)

    def resolved(self) -> SearchParams:
        """Validated copy with defaults filled in and ``n_lmt`` clamped to L."""
        length = self.length
        if isinstance(length, bool) or not isinstance(length, (int, np.integer)) or length < 2:
            raise ConfigurationError(f"length must be an integer >= 2, got {length!r}")
        length = int(length)
        if isinstance(self.seed, bool) or not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise ConfigurationError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.flip_lmt is None:
            flip_lmt = min(DEFAULT_FLIP_LMT, length)
        else:
            flip_lmt = _positive_int("flip_lmt", self.flip_lmt)
        if flip_lmt > length:
            raise ConfigurationError(f"flip_lmt={flip_lmt} exceeds L={length}")
        ls_lmt = _positive_int("ls_lmt", self.ls_lmt)
        n_lmt = default_n_lmt(length) if self.n_lmt is None else _positive_int("n_lmt", self.n_lmt)
        if n_lmt > length:
            warnings.warn(f"n_lmt={n_lmt} exceeds L={length}; clamped to {length}", stacklevel=2)
            n_lmt = length
        alpha1 = _positive_int("alpha1", self.alpha1)
        alpha2 = default_alpha2(length) if self.alpha2 is None else _positive_int("alpha2", self.alpha2)
        workers = _positive_int("workers", self.workers)
        if self.max_nse is None and self.max_seconds is None:
            raise ConfigurationError("a stopping condition is required: max_nse and/or max_seconds")
        max_nse = None if self.max_nse is None else _positive_int("max_nse", self.max_nse)
        max_seconds = self.max_seconds
        if max_seconds is not None:
            max_seconds = float(max_seconds)
            if not max_seconds > 0:
                raise ConfigurationError(f"max_seconds must be positive, got {self.max_seconds!r}")
        init = self.init
        if init is not None:
            init = as_sequence(init).copy()
            if init.shape[0] != length:
                raise ConfigurationError(
                    f"initial sequence has length {init.shape[0]}, expected L={length}"
                )
        return dataclasses.replace(
            self,
            length=length,
            seed=int(self.seed),
            flip_lmt=flip_lmt,
            ls_lmt=ls_lmt,
            n_lmt=n_lmt,
            alpha1=alpha1,
            alpha2=alpha2,
            max_nse=max_nse,
            max_seconds=max_seconds,
            workers=workers,
            init=init,
        )


@dataclass(frozen=True)
class ConvergenceEvent:
    nse: int
    elapsed: float
    psl_best: int
    phase_index: int
    kind: str

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")


@dataclass
class RunRecord:
    """Outcome of one search run, as written to disk."""

    params: SearchParams
    seed: int
    solution_best: np.ndarray
    psl_best: int
    merit_factor: float
    nse: int
    elapsed_seconds: float
    events: list[ConvergenceEvent]
    solver_version: str

    def comparable(self) -> dict:
        """Fields that must match between reruns, minus wall-clock and worker count."""
        params = dataclasses.asdict(dataclasses.replace(self.params, init=None, workers=0))
        init = self.params.init
        return {
            "params": params,
            "init": None if init is None else init.tobytes(),
            "seed": self.seed,
            "solution_best": self.solution_best.tobytes(),
            "psl_best": self.psl_best,
            "merit_factor": self.merit_factor,
            "nse": self.nse,
            "events": [(e.nse, e.psl_best, e.phase_index, e.kind) for e in self.events],
            "solver_version": self.solver_version,
        }
