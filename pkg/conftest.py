"""
Shared fixtures: worked examples and seeded random corpora
"""
from typing import List, Tuple

import numpy as np
import pytest

from core import Instance, Matching
from generators import gen_example, gen_random

collect_ignore = ["examples"]


def _corpus(count: int, max_n: int, max_m: int, max_len: int, seed: int) -> List[Instance]:
    rng = np.random.default_rng(seed)
    corpus = []
    for k in range(count):
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(1, max_m + 1))
        corpus.append(gen_random(n, m, cap_range=(1, 2), pref_len_range=(1, max_len), seed=seed * 10_000 + k))
    return corpus


def random_matching(instance: Instance, rng: np.random.Generator) -> Matching:
    """Feasible matching under base capacities, leaving students unmatched at random"""
    load = [0] * instance.m
    assignment = {}
    for u in range(instance.n):
        options = [w for w in instance.preferences[u] if load[w] < instance.capacities[w]]
        pick = int(rng.integers(0, len(options) + 1))
        if pick < len(options):
            w = options[pick]
            assignment[u] = w
            load[w] += 1
    return Matching(assignment)


@pytest.fixture(scope="module")
def intro() -> Instance:
    return gen_example("intro")


@pytest.fixture(scope="module")
def problems() -> Instance:
    return gen_example("problems")


@pytest.fixture(scope="module")
def stable_eff() -> Instance:
    return gen_example("stable-eff")


@pytest.fixture(scope="module")
def minmaxse_gap() -> Instance:
    return gen_example("minmaxse-gap")


@pytest.fixture(scope="module")
def solver_corpus() -> List[Instance]:
    """1000 instances with n, m <= 6 and capacities <= 2"""
    return _corpus(1000, 6, 6, 4, seed=1)


@pytest.fixture(scope="module")
def small_corpus() -> List[Instance]:
    """1000 instances with n, m <= 5"""
    return _corpus(1000, 5, 5, 5, seed=2)


@pytest.fixture(scope="module")
def tiny_corpus() -> List[Instance]:
    """Instances small enough for stable-matching enumeration"""
    return _corpus(200, 4, 4, 4, seed=3)


@pytest.fixture(scope="module")
def matching_corpus(small_corpus) -> List[Tuple[Instance, Matching]]:
    """Random feasible matchings, with unmatched students and under-filled schools"""
    rng = np.random.default_rng(4)
    return [(instance, random_matching(instance, rng)) for instance in small_corpus]
