import itertools
import random
from fractions import Fraction as F

import pytest

from guesswork.asym import (
    AsymCoefficients, asym_brute_force, asym_guesswork, asym_optimal_partition, check_small_noise,
)
from guesswork.binary import brute_force_optimal
from guesswork.core import BinarySymmetric, Distribution, Partition, guesswork_moment
from guesswork.errors import CapExceededError, ConditionError

from instances import random_distribution

PAIR = Distribution.from_probs(["0.8", "0.2"])
EPS, DELTA = F(1, 10), F(1, 20)


def small_noise_instance(rng, n):
    while True:
        dist = random_distribution(rng, n)
        lo, hi = dist.probs[-1], dist.probs[0]
        # crossovers well inside the admissible region, including zero
        eps = F(rng.randint(0, 20), 20) * lo / (hi + lo)
        delta = F(rng.randint(0, 20), 20) * lo / (hi + lo)
        if check_small_noise(dist, eps, delta):
            return dist, eps, delta


def test_small_noise_examples():
    assert check_small_noise(PAIR, EPS, DELTA)
    assert check_small_noise(Distribution.from_probs(["0.5", "0.3", "0.2"]), 0, 0)
    assert not check_small_noise(Distribution.from_probs(["0.9", "0.1"]), F(1, 5), 0)


def test_guesswork_examples():
    assert asym_guesswork(PAIR, EPS, DELTA, Partition.from_set(2, {0})) == F(106, 100)
    assert asym_guesswork(PAIR, EPS, DELTA, Partition.from_set(2, set())) == F(12, 10)
    with pytest.raises(ConditionError):
        asym_guesswork(Distribution.from_probs(["0.9", "0.1"]), F(1, 5), 0,
                       Partition.from_set(2, {0}))
    with pytest.raises(ConditionError):
        asym_guesswork(PAIR, EPS, DELTA, Partition.from_set(3, {0}))


def test_guesswork_reads_string_crossovers():
    assert asym_guesswork(PAIR, "0.1", "0.05", Partition.from_set(2, {0})) == F(106, 100)


def test_optimal_examples():
    part, value = asym_optimal_partition(PAIR, EPS, DELTA)
    assert part.subset == {0} and value == F(106, 100)
    best, arg = asym_brute_force(PAIR, EPS, DELTA)
    assert best == value and [p.subset for p in arg] == [{0}]
    part, value = asym_optimal_partition(Distribution.from_probs(["1"]), F(1, 3), F(1, 4))
    assert value == 1


def test_brute_force_cap():
    dist = random_distribution(random.Random(0), 6)
    with pytest.raises(CapExceededError):
        asym_brute_force(dist, 0, 0, cap=5)


def test_merged_weights_prefer_the_pointed_set_on_ties():
    c = AsymCoefficients.build(3, 1, F(1), F(0))
    assert c.c == (1,) and c.c_bar == (2, 3)
    assert c.merged() == [(1, True), (2, False), (3, False)]
    tie = AsymCoefficients.build(2, 1, F(0), F(0))
    assert tie.merged() == [(1, True), (1, False)]


def test_symmetric_special_case_matches_binary_module():
    rng = random.Random(1)
    for _ in range(60):
        n = rng.randint(1, 8)
        dist, eps, _ = small_noise_instance(rng, n)
        if not check_small_noise(dist, eps, eps):
            continue
        noise = BinarySymmetric(eps)
        for bits in itertools.islice(itertools.product((False, True), repeat=n), 16):
            part = Partition(bits)
            assert asym_guesswork(dist, eps, eps, part) == guesswork_moment(dist, noise, part)
        assert asym_optimal_partition(dist, eps, eps)[1] == brute_force_optimal(dist, noise)[0]


def test_pairing_beats_every_assignment_of_each_size():
    rng = random.Random(2)
    for _ in range(60):
        n = rng.randint(1, 7)
        dist, eps, delta = small_noise_instance(rng, n)
        for a in range(n + 1):
            merged = AsymCoefficients.build(n, a, eps, delta).merged()
            paired = sum((w * p for (w, _), p in zip(merged, dist.probs)), F(0))
            for inside in itertools.combinations(range(n), a):
                part = Partition.from_set(n, inside)
                assert asym_guesswork(dist, eps, delta, part) >= paired


def test_algorithm_matches_brute_force():
    rng = random.Random(3)
    for _ in range(80):
        dist, eps, delta = small_noise_instance(rng, rng.randint(1, 9))
        part, value = asym_optimal_partition(dist, eps, delta)
        best, arg = asym_brute_force(dist, eps, delta)
        assert value == best
        assert asym_guesswork(dist, eps, delta, part) == value
        assert part in arg
