import json

import numpy as np
import pytest

from pslsearch import FormatError, SearchParams, run_search
from pslsearch.formats import (
    append_convergence_csv,
    dumps_run_record,
    loads_run_record,
    parse_sequence,
    read_convergence_csv,
    read_run_record,
    read_sequence,
    write_run_record,
    write_sequence,
)
from pslsearch.oracle import verify_sequence
from pslsearch.records import EVENT_KINDS, ConvergenceEvent, RunRecord

from conftest import random_pm1


def random_record(rng, n_events, with_init=False):
    length = int(rng.integers(2, 300))
    init = random_pm1(rng, length) if with_init else None
    params = SearchParams(
        length=length,
        seed=int(rng.integers(0, 2**63)),
        flip_lmt=int(rng.integers(1, length + 1)),
        ls_lmt=int(rng.integers(1, 5000)),
        n_lmt=int(rng.integers(1, length + 1)),
        alpha1=int(rng.integers(1, 20)),
        alpha2=int(rng.integers(1, 20)),
        max_nse=int(rng.integers(1, 10**12)),
        max_seconds=float(rng.random() * 1e5) if rng.random() < 0.5 else None,
        workers=int(rng.integers(1, 64)),
        init=init,
    )
    nses = np.sort(rng.integers(1, 10**10, size=n_events))
    events = [
        ConvergenceEvent(int(n), float(rng.random() * 1e4), int(rng.integers(1, length)), int(rng.integers(1, 3)),
                         EVENT_KINDS[int(rng.integers(3))])
        for n in nses
    ]
    return RunRecord(
        params=params,
        seed=params.seed,
        solution_best=random_pm1(rng, length),
        psl_best=int(rng.integers(1, length)),
        merit_factor=float(rng.random() * 10),
        nse=int(rng.integers(1, 10**12)),
        elapsed_seconds=float(rng.random() * 1e6),
        events=events,
        solver_version="0.1.0",
    )


def assert_same_record(a, b):
    assert a.params == b.params
    if a.params.init is None:
        assert b.params.init is None
    else:
        assert np.array_equal(a.params.init, b.params.init)
    assert np.array_equal(a.solution_best, b.solution_best)
    for f in ("seed", "psl_best", "merit_factor", "nse", "elapsed_seconds", "events", "solver_version"):
        assert getattr(a, f) == getattr(b, f), f


class TestSequenceFile:
    def test_plus_minus(self):
        assert parse_sequence("+-+").tolist() == [1, -1, 1]

    def test_binary(self):
        assert parse_sequence("101\n").tolist() == [1, -1, 1]

    def test_writer_alphabet(self, tmp_path):
        p = tmp_path / "s.seq"
        write_sequence(p, np.array([1, -1, 1], dtype=np.int8))
        assert p.read_bytes() == b"+-+\n"

    @pytest.mark.parametrize(
        "text, offset",
        [("", 0), ("\n", 0), ("+-0", 2), ("10+", 2), ("+ -", 1), ("+-\n\n", 2), ("x", 0), ("+", 1), ("+-\r\n", 2)],
    )
    def test_rejects(self, text, offset):
        with pytest.raises(FormatError) as info:
            parse_sequence(text)
        assert info.value.offset == offset

    def test_non_ascii(self, tmp_path):
        p = tmp_path / "s.seq"
        p.write_bytes("+-é".encode())
        with pytest.raises(FormatError) as info:
            read_sequence(p)
        assert info.value.offset == 2

    def test_round_trip(self, tmp_path, rng):
        p = tmp_path / "s.seq"
        for length in [2, 3, 1023] + [int(x) for x in rng.integers(2, 5000, size=20)]:
            s = random_pm1(rng, length)
            write_sequence(p, s)
            assert np.array_equal(read_sequence(p), s)


class TestRunRecord:
    def test_minimal_empty_events(self, tmp_path, rng):
        rec = random_record(rng, 0)
        p = tmp_path / "r.json"
        write_run_record(p, rec)
        assert_same_record(read_run_record(p), rec)

    def test_many_events(self, tmp_path, rng):
        rec = random_record(rng, 10**4, with_init=True)
        p = tmp_path / "r.json"
        write_run_record(p, rec)
        assert_same_record(read_run_record(p), rec)
        assert p.read_text().count("\n") > 10**4

    def test_randomized(self, rng):
        for i in range(50):
            rec = random_record(rng, int(rng.integers(0, 50)), with_init=bool(i % 2))
            text = dumps_run_record(rec)
            back = loads_run_record(text)
            assert_same_record(back, rec)
            assert dumps_run_record(back) == text

    def test_canonical_field_order(self, rng):
        obj = json.loads(dumps_run_record(random_record(rng, 2)))
        assert list(obj) == [
            "format", "solver_version", "params", "seed", "psl_best", "merit_factor",
            "nse", "elapsed_seconds", "solution_best", "events",
        ]

    def test_real_run(self, tmp_path):
        rec = run_search(SearchParams(length=50, seed=3, max_nse=5000))
        p = tmp_path / "r.json"
        write_run_record(p, rec)
        assert_same_record(read_run_record(p), rec)

    @pytest.mark.parametrize(
        "mutate, field",
        [
            (lambda o: o.pop("nse"), "nse"),
            (lambda o: o.__setitem__("extra", 1), "extra"),
            (lambda o: o.__setitem__("psl_best", "3"), "psl_best"),
            (lambda o: o.__setitem__("psl_best", True), "psl_best"),
            (lambda o: o.__setitem__("format", "other/9"), "format"),
            (lambda o: o.__setitem__("solution_best", "+-x"), "solution_best"),
            (lambda o: o["params"].pop("alpha2"), "params.alpha2"),
            (lambda o: o["params"].__setitem__("seed", 1.5), "params.seed"),
            (lambda o: o["params"].__setitem__("flip_lmt", 10**6), "params"),
            (lambda o: o.__setitem__("events", [[1, 0.1, 2, 1]]), "events[0]"),
            (lambda o: o.__setitem__("events", [[1, 0.1, 2, 1, "bogus"]]), "events[0].kind"),
            (lambda o: o.__setitem__("events", [[5, 0.1, 2, 1, "phase-switch"], [4, 0.2, 2, 1, "phase-switch"]]),
             "events[1].nse"),
        ],
    )
    def test_schema_violations_name_field(self, rng, mutate, field):
        rec = random_record(rng, 3)
        rec.params = SearchParams(**{**rec.params.__dict__, "flip_lmt": 1, "n_lmt": 1})
        obj = json.loads(dumps_run_record(rec))
        mutate(obj)
        with pytest.raises(FormatError) as info:
            loads_run_record(json.dumps(obj))
        assert info.value.field == field

    def test_invalid_json(self):
        with pytest.raises(FormatError):
            loads_run_record("{not json")

    def test_tampered_psl_detected(self, tmp_path):
        rec = run_search(SearchParams(length=64, seed=1, max_nse=20_000))
        obj = json.loads(dumps_run_record(rec))
        obj["psl_best"] -= 1
        back = loads_run_record(json.dumps(obj))
        assert verify_sequence(back.solution_best).psl != back.psl_best
        assert verify_sequence(rec.solution_best).psl == rec.psl_best


class TestConvergenceCsv:
    def test_header_on_creation(self, tmp_path):
        p = tmp_path / "c.csv"
        append_convergence_csv(p, ConvergenceEvent(1, 0.5, 9, 1, "improved-psl"))
        assert p.read_text() == "nse,elapsed_seconds,psl_best,phase_index,kind\n1,0.5,9,1,improved-psl\n"

    def test_three_events_four_lines(self, tmp_path):
        p = tmp_path / "c.csv"
        evs = [
            ConvergenceEvent(1, 0.1, 9, 1, "improved-psl"),
            ConvergenceEvent(65, 0.2, 8, 1, "local-best-improved"),
            ConvergenceEvent(130, 0.3, 8, 2, "phase-switch"),
        ]
        for e in evs:
            append_convergence_csv(p, e)
        assert len(p.read_text().splitlines()) == 4
        back = read_convergence_csv(p)
        assert back == evs
        assert [e.nse for e in back] == sorted(e.nse for e in back)

    def test_randomized_round_trip(self, tmp_path, rng):
        for trial in range(20):
            p = tmp_path / f"c{trial}.csv"
            evs = random_record(rng, int(rng.integers(1, 200))).events
            for e in evs:
                append_convergence_csv(p, e)
            assert read_convergence_csv(p) == evs

    def test_rejects_bad_header(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("a,b\n1,2\n")
        with pytest.raises(FormatError):
            read_convergence_csv(p)

    def test_rejects_bad_row(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("nse,elapsed_seconds,psl_best,phase_index,kind\n1,x,3,1,phase-switch\n")
        with pytest.raises(FormatError):
            read_convergence_csv(p)
