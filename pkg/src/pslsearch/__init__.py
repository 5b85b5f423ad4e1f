"""Search for binary sequences with low peak sidelobe level."""

__version__ = "0.1.0"

from pslsearch.errors import CapabilityError, ConfigurationError, FitnessOverflowError, FormatError
from pslsearch.records import ConvergenceEvent, RunRecord, SearchParams
from pslsearch.search import run_search
from pslsearch.sequence import (
    apply_flip,
    as_sequence,
    autocorrelation,
    build_table,
    evaluate_neighbor,
    fitness,
    flip_deltas,
    merit_factor,
    psl,
)

__all__ = [
    "CapabilityError",
    "ConfigurationError",
    "ConvergenceEvent",
    "FitnessOverflowError",
    "FormatError",
    "RunRecord",
    "SearchParams",
    "apply_flip",
    "as_sequence",
    "autocorrelation",
    "build_table",
    "evaluate_neighbor",
    "fitness",
    "flip_deltas",
    "merit_factor",
    "psl",
    "run_search",
]
