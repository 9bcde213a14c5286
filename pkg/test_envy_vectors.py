"""
Tests for assignment vectors, justified-envy counts and realization
"""
from itertools import islice

import pytest

from core import CapacityVector, matching_to_dict
from deferred_acceptance import blocking_pairs, student_optimal_stable
from envy_vectors import (
    AssignmentVector, count_assignment_vectors, envious_assigned, envy_report, iter_assignment_vectors,
    min_envy_bruteforce, normalize, realize,
)
from exceptions import AssignmentVectorError


def _names(instance, students):
    return {instance.students[u] for u in students}


def test_problems_envy_reports(problems):
    ctx = student_optimal_stable(problems)
    both_w2 = envy_report(ctx, problems, AssignmentVector.from_ids(problems, {"u4": "w2", "u5": "w2"}))
    assert _names(problems, both_w2.enviers) == {"u3"}
    assert both_w2.count == 1
    split = envy_report(ctx, problems, AssignmentVector.from_ids(problems, {"u4": "w1", "u5": "w2"}))
    assert _names(problems, split.enviers) == {"u2", "u3"}
    assert split.count == 2


def test_vector_validation(problems):
    ctx = student_optimal_stable(problems)
    with pytest.raises(AssignmentVectorError):
        envy_report(ctx, problems, AssignmentVector.from_ids(problems, {"u4": "w2"}))
    with pytest.raises(AssignmentVectorError):
        envy_report(ctx, problems, AssignmentVector.from_ids(problems, {"u4": "w3", "u5": "w2"}))
    with pytest.raises(AssignmentVectorError):
        AssignmentVector.from_ids(problems, {"u4": "nowhere"})
    with pytest.raises(AssignmentVectorError):
        AssignmentVector.from_schools(ctx, [1])


@pytest.mark.parametrize("name, minimizer", [
    ("problems", {"u4": "w2", "u5": "w2"}),
    ("intro", {"u4": "w1", "u5": "w1"}),
])
def test_min_envy_bruteforce(name, minimizer, request):
    instance = request.getfixturevalue(name)
    ctx = student_optimal_stable(instance)
    assert count_assignment_vectors(ctx, instance) == 4
    report = min_envy_bruteforce(ctx, instance)
    assert report.count == 1
    assert report.vector == AssignmentVector.from_ids(instance, minimizer)


def test_no_unassigned_students(stable_eff):
    ctx = student_optimal_stable(stable_eff)
    assert ctx.is_perfect
    report = min_envy_bruteforce(ctx, stable_eff)
    assert report.count == 0
    matching, increase = realize(ctx, stable_eff, report.vector)
    assert matching == ctx.matching
    assert increase == CapacityVector.zeros(stable_eff.m)


def test_normalize_moves_envious_placed_student(problems):
    ctx = student_optimal_stable(problems)
    v = AssignmentVector.from_ids(problems, {"u4": "w2", "u5": "w1"})
    assert normalize(ctx, problems, v) == AssignmentVector.from_ids(problems, {"u4": "w1", "u5": "w1"})


def test_realize_problems(problems):
    ctx = student_optimal_stable(problems)
    matching, increase = realize(ctx, problems, AssignmentVector.from_ids(problems, {"u4": "w2", "u5": "w2"}))
    assert matching_to_dict(problems, matching) == {
        "u1": "w1", "u2": "w2", "u3": "w2", "u4": "w2", "u5": "w2",
    }
    assert increase.increase == (0, 3, 0)
    assert blocking_pairs(problems, matching, increase) == []


def test_realize_intro_backfills(intro):
    ctx = student_optimal_stable(intro)
    matching, increase = realize(ctx, intro, AssignmentVector.from_ids(intro, {"u4": "w1", "u5": "w1"}))
    assert matching_to_dict(intro, matching) == {
        "u1": "w1", "u2": "w2", "u3": "w3", "u4": "w1", "u5": "w1",
    }
    assert increase.increase == (2, 0, 0)


def test_realize_is_stable_and_perfect(solver_corpus):
    for instance in solver_corpus[:400]:
        ctx = student_optimal_stable(instance)
        for schools in islice(iter_assignment_vectors(ctx, instance), 30):
            v = AssignmentVector.from_schools(ctx, schools)
            normalized = normalize(ctx, instance, v)
            envious = envious_assigned(instance, ctx, normalized.choice)
            assert envious <= envious_assigned(instance, ctx, v.choice)
            matching, increase = realize(ctx, instance, v)
            assert matching.is_perfect(instance.n)
            assert blocking_pairs(instance, matching, increase) == []
            assert increase.l1 <= len(envious) + ctx.s
