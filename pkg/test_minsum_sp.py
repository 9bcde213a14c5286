"""
Tests for the MinSumSP solvers
"""
import pytest

import minsum_sp
from core import Instance, matching_to_dict
from deferred_acceptance import blocking_pairs, student_optimal_stable
from envy_vectors import min_envy_bruteforce
from exceptions import CertificateError
from generators import gen_example
from minsum_sp import (
    FEASIBLE, INFEASIBLE, build_ip, build_result, solve_exact, solve_formula, solve_greedy, solve_ip,
    solve_lp_relaxation, solve_lp_round, solve_minsum_sp, solve_special_cases, solve_with_ip,
)


def _short_priorities() -> Instance:
    """Three unassigned students, two schools each, every priority list of length two"""
    students = [f"x{i}" for i in range(1, 7)] + ["y1", "y2", "y3"]
    schools = [f"a{i}" for i in range(1, 7)]
    preferences = {f"x{i}": [f"a{i}"] for i in range(1, 7)}
    priorities = {}
    for k in range(1, 4):
        preferences[f"y{k}"] = [f"a{2 * k - 1}", f"a{2 * k}"]
        for i in (2 * k - 1, 2 * k):
            priorities[f"a{i}"] = [f"x{i}", f"y{k}"]
    return Instance.build(students, schools, 1, preferences, priorities)


def _intro_single_choice() -> Instance:
    """The intro market with u4 and u5 listing only w1"""
    preferences = {
        "u1": ["w1", "w3", "w2"], "u2": ["w2", "w1", "w3"], "u3": ["w2", "w3"], "u4": ["w1"], "u5": ["w1"],
    }
    priorities = {"w1": ["u2", "u4", "u1", "u5"], "w2": ["u1", "u2", "u3"], "w3": ["u3", "u1", "u2"]}
    return Instance.build(["u1", "u2", "u3", "u4", "u5"], ["w1", "w2", "w3"], 1, preferences, priorities)


def _assert_certified(instance, result):
    assert result.certificates["stable"]
    assert result.certificates["perfect"]
    assert blocking_pairs(instance, result.witness, result.increase) == []
    assert result.witness.is_perfect(instance.n)


def test_exact_problems(problems):
    result = solve_exact(problems, budget=5)
    assert result.status == FEASIBLE
    assert result.objective == 3
    assert result.increase.increase == (3, 0, 0)
    _assert_certified(problems, result)


def test_exact_intro(intro):
    result = solve_exact(intro, budget=5)
    assert result.objective == 2
    assert result.increase.increase == (2, 0, 0)
    assert matching_to_dict(intro, result.witness) == {
        "u1": "w1", "u2": "w2", "u3": "w3", "u4": "w1", "u5": "w1",
    }
    assert solve_exact(intro, budget=1).status == INFEASIBLE


def test_exact_perfect_base(stable_eff):
    result = solve_exact(stable_eff)
    assert result.objective == 0
    assert result.increase.l1 == 0


def test_formula_problems(problems):
    result = solve_formula(problems, budget=3)
    assert result.feasible
    assert result.objective == 3
    assert result.details["min_envy"] == 1
    assert result.details["upper_bound"] == 3
    assert result.increase.increase == (0, 3, 0)
    _assert_certified(problems, result)


def test_formula_intro_reports_realized_norm(intro):
    formula = solve_formula(intro, budget=2)
    assert formula.details["upper_bound"] == 3
    assert formula.objective == formula.details["achieved"] == 2
    assert formula.increase.l1 == 2
    assert formula.feasible
    assert formula.objective == solve_exact(intro).objective
    assert not solve_formula(intro, budget=1).feasible


def test_build_ip_problems(problems):
    ctx = student_optimal_stable(problems)
    model = build_ip(ctx, problems)
    assert model.variable_names(problems) == [
        "x[u1]", "x[u2]", "x[u3]", "y[u4,w1]", "y[u4,w2]", "y[u5,w1]", "y[u5,w2]",
    ]
    assert (2, 3, 1) in model.envy_constraints
    assert solve_ip(model).value == 1


def test_ip_intro(intro):
    model = build_ip(student_optimal_stable(intro), intro)
    assert solve_ip(model).value == 1
    result = solve_with_ip(intro)
    assert result.details["ip_value"] == 1
    _assert_certified(intro, result)


def test_ip_without_unassigned(stable_eff):
    model = build_ip(student_optimal_stable(stable_eff), stable_eff)
    assert model.y_pairs == ()
    assert solve_ip(model).value == 0
    assert solve_lp_relaxation(model).value == 0.0


def test_lp_round_problems(problems):
    result = solve_lp_round(problems, budget=4)
    assert result.feasible
    assert result.objective <= 4
    assert result.details["lp_value"] <= 1 + 1e-9
    _assert_certified(problems, result)


def test_greedy_problems(problems):
    result = solve_greedy(problems)
    assert result.objective == 3
    _assert_certified(problems, result)


@pytest.mark.parametrize("n", [3, 5, 10])
def test_greedy_tight_family(n):
    instance = gen_example("greedy-tight", s_hat=2, n=n)
    assert solve_greedy(instance).objective == (n + 1) * 2
    assert solve_exact(instance).objective == n + 2


def test_special_cases():
    short = _short_priorities()
    result = solve_special_cases(short, budget=3)
    assert result.path == "short-priorities"
    assert result.feasible
    assert result.objective == 3
    assert result.increase.increase == (1, 0, 1, 0, 1, 0)
    _assert_certified(short, result)
    assert not solve_special_cases(short, budget=2).feasible


def test_special_single_vector(problems):
    students = ["x1", "x2", "x3", "y1", "y2", "y3"]
    preferences = {f"{side}{i}": [f"a{i}"] for side in "xy" for i in (1, 2, 3)}
    priorities = {f"a{i}": [f"x{i}", f"y{i}"] for i in (1, 2, 3)}
    single = Instance.build(students, ["a1", "a2", "a3"], 1, preferences, priorities)
    result = solve_special_cases(single)
    assert result.path == "single-vector"
    assert result.objective == 3
    assert result.increase.increase == (1, 1, 1)
    _assert_certified(single, result)
    assert solve_special_cases(problems) is None


def test_dispatch(intro, problems):
    assert solve_minsum_sp(intro).path == "exact"
    assert solve_minsum_sp(_short_priorities()).path == "special:short-priorities"
    with pytest.raises(ValueError):
        solve_minsum_sp(problems, method="special")
    with pytest.raises(ValueError):
        solve_minsum_sp(problems, method="simulated-annealing")


def test_exact_parallel_matches_sequential(intro):
    sequential = solve_exact(intro)
    parallel = solve_exact(intro, threads=2)
    assert parallel.increase == sequential.increase
    assert parallel.witness == sequential.witness


def test_solver_relations(solver_corpus):
    for instance in solver_corpus:
        ctx = student_optimal_stable(instance)
        exact = solve_exact(instance)
        formula = solve_formula(instance)
        greedy = solve_greedy(instance)
        lp_round = solve_lp_round(instance)
        min_envy = formula.details["min_envy"]
        bound = {name: result.details["upper_bound"] for name, result in
                 (("formula", formula), ("greedy", greedy), ("lp_round", lp_round))}

        assert bound["formula"] == min_envy + ctx.s
        assert bound["formula"] <= bound["greedy"] <= max(ctx.s, 1) * bound["formula"]
        assert bound["lp_round"] <= ctx.delta_un * min_envy + ctx.s
        assert solve_ip(build_ip(ctx, instance)).value == min_envy_bruteforce(ctx, instance).count == min_envy
        for result in (formula, greedy, lp_round):
            assert exact.objective <= result.objective == result.increase.l1 <= result.details["upper_bound"]
        for result in (exact, formula, greedy, lp_round):
            _assert_certified(instance, result)


def test_single_vector_budget_uses_realized_norm():
    instance = _intro_single_choice()
    result = solve_minsum_sp(instance, budget=2)
    assert result.path == "special:single-vector"
    assert result.status == FEASIBLE
    assert result.objective == 2
    assert result.increase.increase == (2, 0, 0)
    assert result.details["upper_bound"] == 3
    assert result.objective == solve_exact(instance, budget=2).objective
    _assert_certified(instance, result)


def test_auto_falls_back_to_exact_above_the_unassigned_count(monkeypatch):
    instance = _intro_single_choice()
    monkeypatch.setattr(minsum_sp, "realize", lambda ctx, inst, vector: (
        inst.matching({"u1": "w1", "u2": "w2", "u3": "w3", "u4": "w1", "u5": "w1"}),
        inst.increase({"w1": 2, "w3": 1}),
    ))
    result = solve_minsum_sp(instance, budget=2)
    assert result.path == "exact"
    assert result.objective == 2


@pytest.mark.parametrize("method", ["formula", "greedy", "lp-round", "ip"])
def test_blocking_witness_is_rejected(method, intro, monkeypatch):
    monkeypatch.setattr(minsum_sp, "realize", lambda ctx, inst, vector: (
        inst.matching({"u1": "w1", "u2": "w3", "u3": "w2", "u4": "w1", "u5": "w1"}),
        inst.increase({"w1": 2}),
    ))
    with pytest.raises(CertificateError) as info:
        solve_minsum_sp(intro, method=method)
    assert info.value.failed == ["stable"]


def test_build_result_rejects_unstable_witness(intro):
    witness = intro.matching({"u1": "w1", "u2": "w2", "u3": "w3"})
    with pytest.raises(CertificateError) as info:
        build_result(intro, "minsum-sp", "exact", 0, intro.increase({}), witness, None)
    assert info.value.failed == ["stable", "perfect"]
