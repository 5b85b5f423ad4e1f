"""On-disk formats: sequence files, run records and convergence logs.

Sequence file
    One line over ``{+,-}`` or over ``{0,1}`` (``1`` is +1, ``0`` is -1),
    optionally ending in a single ``\\n``. The writer uses ``+``/``-``.

Run record
    A JSON object with keys in this order::

        format           "pslsearch-run-record/1"
        solver_version   string
        params           object: length, seed, flip_lmt, ls_lmt, n_lmt, alpha1,
                         alpha2, max_nse (int|null), max_seconds (float|null),
                         workers, init (sequence string|null)
        seed             int
        psl_best         int
        merit_factor     float
        nse              int
        elapsed_seconds  float
        solution_best    sequence string
        events           list of [nse, elapsed, psl_best, phase_index, kind]

    The writer puts one event per line. Floats are written with ``repr`` so
    they read back bit-exact.

Convergence CSV
    Header ``nse,elapsed_seconds,psl_best,phase_index,kind`` followed by one
    row per event.

All readers raise :class:`~pslsearch.errors.FormatError` on malformed input
instead of repairing it.
"""

from __future__ import annotations

import csv
import json
import os
from pathlib import Path

import numpy as np

from pslsearch.errors import ConfigurationError, FormatError
from pslsearch.records import EVENT_KINDS, ConvergenceEvent, RunRecord, SearchParams
from pslsearch.sequence import as_sequence

RECORD_FORMAT = "pslsearch-run-record/1"
CSV_HEADER = ("nse", "elapsed_seconds", "psl_best", "phase_index", "kind")

_RECORD_KEYS = (
    "format",
    "solver_version",
    "params",
    "seed",
    "psl_best",
    "merit_factor",
    "nse",
    "elapsed_seconds",
    "solution_best",
    "events",
)
_PARAM_KEYS = (
    "length",
    "seed",
    "flip_lmt",
    "ls_lmt",
    "n_lmt",
    "alpha1",
    "alpha2",
    "max_nse",
    "max_seconds",
    "workers",
    "init",
)


# --- sequences ---------------------------------------------------------------


def format_sequence(s) -> str:
    s = as_sequence(s)
    return "".join("+" if x > 0 else "-" for x in s.tolist())


def parse_sequence(text: str) -> np.ndarray:
    """Parse a sequence line; offsets in errors are 0-based character offsets."""
    body = text[:-1] if text.endswith("\n") else text
    if not body:
        raise FormatError("empty sequence", offset=0)
    first = body[0]
    if first in "+-":
        alphabet, plus = "+-", "+"
    elif first in "01":
        alphabet, plus = "01", "1"
    else:
        raise FormatError(f"unexpected character {first!r} at offset 0", offset=0)
    for i, ch in enumerate(body):
        if ch not in alphabet:
            raise FormatError(f"unexpected character {ch!r} at offset {i}", offset=i)
    if len(body) < 2:
        raise FormatError("sequence must have at least 2 elements", offset=len(body))
    return np.array([1 if ch == plus else -1 for ch in body], dtype=np.int8)


def write_sequence(path, s) -> None:
    Path(path).write_text(format_sequence(s) + "\n", encoding="ascii")


def read_sequence(path) -> np.ndarray:
    data = Path(path).read_bytes()
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise FormatError(f"non-ASCII byte at offset {exc.start}", offset=exc.start) from None
    return parse_sequence(text)


# --- run records -------------------------------------------------------------


def _params_to_json(p: SearchParams) -> dict:
    return {
        "length": p.length,
        "seed": p.seed,
        "flip_lmt": p.flip_lmt,
        "ls_lmt": p.ls_lmt,
        "n_lmt": p.n_lmt,
        "alpha1": p.alpha1,
        "alpha2": p.alpha2,
        "max_nse": p.max_nse,
        "max_seconds": p.max_seconds,
        "workers": p.workers,
        "init": None if p.init is None else format_sequence(p.init),
    }


def dumps_run_record(rec: RunRecord) -> str:
    head = {
        "format": RECORD_FORMAT,
        "solver_version": rec.solver_version,
        "params": _params_to_json(rec.params),
        "seed": rec.seed,
        "psl_best": rec.psl_best,
        "merit_factor": float(rec.merit_factor),
        "nse": rec.nse,
        "elapsed_seconds": float(rec.elapsed_seconds),
        "solution_best": format_sequence(rec.solution_best),
    }
    lines = ["{"]
    for key, value in head.items():
        lines.append(f"  {json.dumps(key)}: {json.dumps(value, allow_nan=False)},")
    rows = [
        json.dumps([e.nse, float(e.elapsed), e.psl_best, e.phase_index, e.kind], allow_nan=False)
        for e in rec.events
    ]
    if rows:
        lines.append('  "events": [')
        lines.append(",\n".join("    " + r for r in rows))
        lines.append("  ]")
    else:
        lines.append('  "events": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_run_record(path, rec: RunRecord) -> None:
    Path(path).write_text(dumps_run_record(rec), encoding="utf-8")


def _int(obj, key, where, nullable=False):
    value = obj[key]
    if value is None and nullable:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{where}{key}: expected integer, got {value!r}", field=where + key)
    return value


def _float(obj, key, where, nullable=False):
    value = obj[key]
    if value is None and nullable:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise FormatError(f"{where}{key}: expected number, got {value!r}", field=where + key)
    return float(value)


def _exact_keys(obj, keys, where):
    if not isinstance(obj, dict):
        raise FormatError(f"{where or 'record'}: expected JSON object", field=where.rstrip(".") or None)
    for key in keys:
        if key not in obj:
            raise FormatError(f"missing field {where}{key}", field=where + key)
    for key in obj:
        if key not in keys:
            raise FormatError(f"unknown field {where}{key}", field=where + key)


def _sequence_field(value, name):
    if not isinstance(value, str):
        raise FormatError(f"{name}: expected sequence string", field=name)
    try:
        return parse_sequence(value)
    except FormatError as exc:
        raise FormatError(f"{name}: {exc}", field=name, offset=exc.offset) from None


def _params_from_json(obj) -> SearchParams:
    _exact_keys(obj, _PARAM_KEYS, "params.")
    w = "params."
    init = obj["init"]
    params = SearchParams(
        length=_int(obj, "length", w),
        seed=_int(obj, "seed", w),
        flip_lmt=_int(obj, "flip_lmt", w),
        ls_lmt=_int(obj, "ls_lmt", w),
        n_lmt=_int(obj, "n_lmt", w),
        alpha1=_int(obj, "alpha1", w),
        alpha2=_int(obj, "alpha2", w),
        max_nse=_int(obj, "max_nse", w, nullable=True),
        max_seconds=_float(obj, "max_seconds", w, nullable=True),
        workers=_int(obj, "workers", w),
        init=None if init is None else _sequence_field(init, "params.init"),
    )
    try:
        params.resolved()
    except ConfigurationError as exc:
        raise FormatError(f"params: {exc}", field="params") from None
    return params


def loads_run_record(text: str) -> RunRecord:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}", offset=exc.pos) from None
    _exact_keys(obj, _RECORD_KEYS, "")
    if obj["format"] != RECORD_FORMAT:
        raise FormatError(f"format: expected {RECORD_FORMAT!r}, got {obj['format']!r}", field="format")
    if not isinstance(obj["solver_version"], str):
        raise FormatError("solver_version: expected string", field="solver_version")
    params = _params_from_json(obj["params"])
    solution = _sequence_field(obj["solution_best"], "solution_best")
    if solution.shape[0] != params.length:
        raise FormatError("solution_best: length does not match params.length", field="solution_best")

    raw_events = obj["events"]
    if not isinstance(raw_events, list):
        raise FormatError("events: expected list", field="events")
    events = []
    last_nse = -1
    for i, row in enumerate(raw_events):
        name = f"events[{i}]"
        if not isinstance(row, list) or len(row) != 5:
            raise FormatError(f"{name}: expected [nse, elapsed, psl_best, phase_index, kind]", field=name)
        fields = dict(zip(CSV_HEADER, row))
        nse = _int(fields, "nse", name + ".")
        elapsed = _float(fields, "elapsed_seconds", name + ".")
        psl_best = _int(fields, "psl_best", name + ".")
        phase = _int(fields, "phase_index", name + ".")
        kind = fields["kind"]
        if kind not in EVENT_KINDS:
            raise FormatError(f"{name}.kind: unknown kind {kind!r}", field=name + ".kind")
        if phase not in (1, 2):
            raise FormatError(f"{name}.phase_index: must be 1 or 2", field=name + ".phase_index")
        if nse < last_nse:
            raise FormatError(f"{name}.nse: events not sorted by nse", field=name + ".nse")
        last_nse = nse
        events.append(ConvergenceEvent(nse, elapsed, psl_best, phase, kind))

    return RunRecord(
        params=params,
        seed=_int(obj, "seed", ""),
        solution_best=solution,
        psl_best=_int(obj, "psl_best", ""),
        merit_factor=_float(obj, "merit_factor", ""),
        nse=_int(obj, "nse", ""),
        elapsed_seconds=_float(obj, "elapsed_seconds", ""),
        events=events,
        solver_version=obj["solver_version"],
    )


def read_run_record(path) -> RunRecord:
    return loads_run_record(Path(path).read_text(encoding="utf-8"))


# --- convergence CSV ---------------------------------------------------------


def append_convergence_csv(path, event: ConvergenceEvent) -> None:
    """Append one event row, writing the header first if the file is new or empty."""
    path = Path(path)
    new = not path.exists() or os.path.getsize(path) == 0
    with path.open("a", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if new:
            writer.writerow(CSV_HEADER)
        writer.writerow([event.nse, repr(float(event.elapsed)), event.psl_best, event.phase_index, event.kind])


def read_convergence_csv(path) -> list[ConvergenceEvent]:
    with Path(path).open(newline="", encoding="ascii") as fh:
        rows = list(csv.reader(fh))
    if not rows or tuple(rows[0]) != CSV_HEADER:
        raise FormatError("convergence log: missing or wrong header", field="header")
    events = []
    for line, row in enumerate(rows[1:], start=2):
        if len(row) != len(CSV_HEADER):
            raise FormatError(f"line {line}: expected {len(CSV_HEADER)} columns", field=f"line {line}")
        try:
            nse, psl_best, phase = int(row[0]), int(row[2]), int(row[3])
            elapsed = float(row[1])
            events.append(ConvergenceEvent(nse, elapsed, psl_best, phase, row[4]))
        except ValueError as exc:
            raise FormatError(f"line {line}: {exc}", field=f"line {line}") from None
    return events
