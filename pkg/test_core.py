"""
Tests for the instance model, documents and feasibility checks
"""
import json

import pytest

from core import (
    CapacityVector, Instance, Matching, instance_stats, is_feasible, iter_feasible_assignments,
    parse_increase, parse_instance, parse_matching, require_feasible, serialize_instance,
    serialize_matching,
)
from exceptions import InfeasibleMatchingError, InstanceValidationError, UnknownIdentifierError


def _tiny(**overrides) -> dict:
    document = {
        "students": ["a", "b"],
        "schools": [{"id": "x", "capacity": 1}, {"id": "y", "capacity": 1}],
        "preferences": {"a": ["x", "y"], "b": ["x"]},
        "priorities": {"x": ["b", "a"], "y": ["a"]},
    }
    document.update(overrides)
    return document


def test_intro_indices(intro):
    assert intro.n == 5
    assert intro.m == 3
    assert intro.student_index["u4"] == 3
    assert intro.school_index["w3"] == 2
    assert intro.capacities == (1, 1, 1)
    assert intro.prefers(0, 0, 2)
    assert not intro.prefers(0, 1, 0)
    assert intro.prefers(3, 0, None)
    assert not intro.acceptable(2, 0)


def test_parse_and_serialize_canonical():
    text = json.dumps(_tiny(), indent=2) + "\n"
    instance = parse_instance(text)
    assert instance.students == ("a", "b")
    assert instance.preferences == ((0, 1), (0,))
    assert serialize_instance(instance) == text


@pytest.mark.parametrize("overrides, identifier", [
    ({"preferences": {"a": ["x", "y"], "b": ["y"]}}, "b"),
    ({"preferences": {"a": ["x", "y"], "b": []}}, "b"),
    ({"schools": [{"id": "x", "capacity": 0}, {"id": "y", "capacity": 1}]}, "x"),
    ({"students": ["a", "x"]}, "x"),
])
def test_invalid_instances(overrides, identifier):
    with pytest.raises(InstanceValidationError) as info:
        parse_instance(json.dumps(_tiny(**overrides)))
    assert info.value.identifier == identifier


def test_unknown_school_in_preferences():
    with pytest.raises(UnknownIdentifierError):
        parse_instance(json.dumps(_tiny(preferences={"a": ["x", "z"], "b": ["x"]})))


def test_malformed_document():
    document = _tiny()
    del document["priorities"]
    with pytest.raises(InstanceValidationError) as info:
        parse_instance(json.dumps(document))
    assert info.value.identifier == "priorities"


def test_matching_documents(intro):
    matching = parse_matching(intro, '{"assignment": {"u1": "w2", "u2": "w1"}}')
    assert matching.assignment == {0: 1, 1: 0}
    assert json.loads(serialize_matching(intro, matching)) == {"assignment": {"u1": "w2", "u2": "w1"}}
    with pytest.raises(UnknownIdentifierError):
        parse_matching(intro, '{"assignment": {"u9": "w1"}}')


def test_increase_documents(intro):
    r = parse_increase(intro, '{"increase": {"w1": 2}}')
    assert r == CapacityVector((2, 0, 0))
    with pytest.raises(InstanceValidationError):
        parse_increase(intro, '{"increase": {"w1": -1}}')
    with pytest.raises(UnknownIdentifierError):
        intro.increase([1, 0])


def test_capacity_vector():
    r = CapacityVector((2, 0, 1))
    assert r.l1 == 3
    assert r.linf == 2
    assert CapacityVector((1, 0, 1)).dominated_by(r)
    assert not CapacityVector((0, 1, 0)).dominated_by(r)
    assert CapacityVector.zeros(0).linf == 0
    with pytest.raises(InstanceValidationError):
        CapacityVector((1, -1))


def test_feasibility(intro):
    two_at_w1 = intro.matching({"u2": "w1", "u4": "w1"})
    assert not is_feasible(intro, two_at_w1)
    assert is_feasible(intro, two_at_w1, intro.increase({"w1": 1}))
    unacceptable = intro.matching({"u3": "w1"})
    assert not is_feasible(intro, unacceptable)
    with pytest.raises(InfeasibleMatchingError):
        require_feasible(intro, unacceptable)
    with pytest.raises(UnknownIdentifierError):
        is_feasible(intro, Matching({7: 0}))


def test_instance_stats(intro):
    stats = instance_stats(intro)
    assert stats.as_dict() == {"n": 5, "m": 3, "delta_st": 3, "delta_sc": 5, "total_capacity": 3}


def test_without_students(stable_eff):
    smaller = stable_eff.without_students(["u5"])
    assert smaller.students == ("u1", "u2", "u3", "u4")
    assert smaller.priorities[smaller.school_index["w1"]] == (2, 1, 0)
    assert "w4" not in stable_eff.without_students(["u1"]).schools
    with pytest.raises(UnknownIdentifierError):
        stable_eff.without_students(["nobody"])


def test_build_with_uniform_capacity():
    instance = Instance.build(["a"], ["x"], 2, {"a": ["x"]}, {"x": ["a"]})
    assert instance.capacities == (2,)


def test_iter_feasible_assignments_respects_capacity():
    found = list(iter_feasible_assignments([[0, None], [0, None]], [1]))
    assert found == [[0, None], [None, 0], [None, None]]
