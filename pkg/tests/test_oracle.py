import numpy as np
import pytest

from pslsearch import CapabilityError, build_table, fitness, psl
from pslsearch.oracle import (
    brute_fitness,
    brute_psl,
    exhaustive_psl,
    exhaustive_psl_unpruned,
    verify_sequence,
)

from conftest import random_pm1


@pytest.mark.parametrize("length", [2, 3, 13])
def test_exhaustive_small(length):
    best, witness = exhaustive_psl(length)
    assert best == 1
    assert witness[0] == 1
    assert brute_psl(witness) == 1


def test_exhaustive_l3_witness():
    assert exhaustive_psl(3)[1].tolist() == [1, 1, -1]


def test_exhaustive_l13_witness_is_barker(barker13):
    assert np.array_equal(exhaustive_psl(13)[1], barker13)


@pytest.mark.parametrize("length", range(2, 17))
def test_pruned_matches_unpruned(length):
    best, witness = exhaustive_psl(length)
    ref_best, ref_witness = exhaustive_psl_unpruned(length)
    assert best == ref_best
    assert np.array_equal(witness, ref_witness)


@pytest.mark.parametrize("length", [1, 29, 64])
def test_exhaustive_capability(length):
    with pytest.raises(CapabilityError):
        exhaustive_psl(length)


def test_symmetries(rng):
    for _ in range(200):
        s = random_pm1(rng, int(rng.integers(2, 40)))
        p = brute_psl(s)
        assert p == brute_psl(-s) == brute_psl(s[::-1].copy())


def test_exhaustive_lower_bounds_random(rng):
    best, _ = exhaustive_psl(12)
    assert all(brute_psl(random_pm1(rng, 12)) >= best for _ in range(500))


def test_brute_fitness_examples(barker13):
    assert brute_fitness(np.ones(4, dtype=np.int8), 2) == 14.0
    assert brute_fitness(barker13, 2) == 6.0


def test_brute_fitness_matches_table(rng):
    for _ in range(1000):
        s = random_pm1(rng, int(rng.integers(2, 258)))
        alpha = int(rng.integers(1, 14))
        assert brute_fitness(s, alpha) == fitness(build_table(s), alpha)


def test_verify_barker(barker13):
    rep = verify_sequence(barker13)
    assert rep.length == 13 and rep.psl == 1
    assert round(rep.merit_factor, 3) == 14.083
    assert rep.histogram == {0: 6, 1: 6}
    assert rep.below_sqrt_length


def test_verify_all_ones():
    rep = verify_sequence(np.ones(5, dtype=np.int8))
    assert rep.psl == 4
    assert rep.histogram == {1: 1, 2: 1, 3: 1, 4: 1}
    assert not rep.below_sqrt_length


def test_verify_matches_table(rng):
    s = random_pm1(rng, 500)
    rep = verify_sequence(s)
    assert rep.psl == psl(build_table(s))
    assert sum(rep.histogram.values()) == 499
