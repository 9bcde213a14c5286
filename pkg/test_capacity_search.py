"""
Tests for capacity-vector enumeration and the first-success search
"""
import pytest

from capacity_search import first_success, iter_vectors_with_l1, iter_vectors_with_linf, useful_bounds
from deferred_acceptance import student_optimal_stable
from exceptions import GuardExceededError


def _tenfold_at_four(x):
    return x * 10 if x == 4 else None


def test_useful_bounds(intro, problems):
    assert useful_bounds(intro) == [3, 4, 2]
    assert useful_bounds(problems, student_optimal_stable(problems).matching) == [4, 4, 0]


def test_useful_bounds_skip_under_filled(minmaxse_gap):
    base = student_optimal_stable(minmaxse_gap).matching
    bounds = useful_bounds(minmaxse_gap, base)
    load = base.occupancy(minmaxse_gap.m)
    for w, bound in enumerate(bounds):
        if load[w] < minmaxse_gap.capacities[w]:
            assert bound == 0


def test_vectors_with_l1_order():
    assert list(iter_vectors_with_l1([2, 1, 0], 2)) == [(2, 0, 0), (1, 1, 0)]
    assert list(iter_vectors_with_l1([1, 1], 0)) == [(0, 0)]
    assert list(iter_vectors_with_l1([1, 1], 3)) == []


def test_vectors_with_l1_counts():
    vectors = list(iter_vectors_with_l1([2, 2, 2], 3))
    assert len(vectors) == len(set(vectors)) == 7
    assert all(sum(v) == 3 and max(v) <= 2 for v in vectors)
    assert vectors == sorted(vectors, reverse=True)


def test_vectors_with_linf_uniform_first():
    assert list(iter_vectors_with_linf([2, 1, 0], 1)) == [(1, 1, 0), (1, 0, 0), (0, 1, 0)]
    assert list(iter_vectors_with_linf([2, 1], 0)) == [(0, 0)]
    assert list(iter_vectors_with_linf([2, 1], 3)) == []


def test_first_success():
    outcome = first_success(range(10), _tenfold_at_four)
    assert outcome.found
    assert (outcome.candidate, outcome.result, outcome.tried) == (4, 40, 5)
    missing = first_success(range(3), _tenfold_at_four)
    assert not missing.found
    assert missing.tried == 3


def test_first_success_guard():
    assert first_success(range(10), _tenfold_at_four, guard=5).candidate == 4
    with pytest.raises(GuardExceededError):
        first_success(range(10), _tenfold_at_four, guard=3)
