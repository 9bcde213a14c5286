"""
Stable-and-efficient existence check and exhaustive MinSumSE / MinMaxSE solvers
"""
import logging
from dataclasses import dataclass
from functools import partial
from itertools import chain
from typing import Optional, Tuple

from capacity_search import first_success, iter_vectors_with_l1, iter_vectors_with_linf, useful_bounds
from config import GUARD_CONFIG, LOG_LEVEL
from core import CapacityVector, Instance, Matching
from deferred_acceptance import student_optimal_stable
from efficiency import EfficiencyCheck, is_efficient
from minsum_sp import SolveResult, build_result

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StableEfficientCheck:
    """Whether q+r admits a stable and efficient matching, judged on the student-optimal one"""
    exists: bool
    matching: Matching
    improvement: EfficiencyCheck

    @property
    def witness(self) -> Optional[Matching]:
        return self.matching if self.exists else None

    def __bool__(self) -> bool:
        return self.exists


def exists_stable_efficient(instance: Instance, r: Optional[CapacityVector] = None) -> StableEfficientCheck:
    """
    Some stable matching is efficient iff the student-optimal one is

    Args:
        instance: Instance
        r: Capacity increase

    Returns:
        StableEfficientCheck with the student-optimal matching and its efficiency verdict
    """
    ctx = student_optimal_stable(instance, r)
    verdict = is_efficient(instance, ctx.matching, r)
    return StableEfficientCheck(verdict.efficient, ctx.matching, verdict)


def _efficient_under(instance: Instance, vector: Tuple[int, ...]) -> Optional[Matching]:
    return exists_stable_efficient(instance, CapacityVector(vector)).witness


def _search(instance: Instance, problem: str, candidates, budget: Optional[int],
            guard: Optional[int], threads: Optional[int], objective_of) -> SolveResult:
    guard = GUARD_CONFIG["capacity_vectors"] if guard is None else guard
    outcome = first_success(candidates, partial(_efficient_under, instance), threads, guard,
                            f"{problem} capacity search")
    details = {"candidates": outcome.tried + 1}
    if not outcome.found:
        return build_result(instance, problem, "exact", None, None, None, budget, details)
    increase = CapacityVector(outcome.candidate)
    return build_result(instance, problem, "exact", objective_of(increase), increase,
                        outcome.result, budget, details)


def solve_minsum_se(instance: Instance, budget: Optional[int] = None,
                    guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Smallest |r|_1 admitting a stable and efficient matching

    Args:
        instance: Instance
        budget: Largest norm to try (all useful vectors when None)
        guard: Maximum number of capacity vectors to evaluate
        threads: joblib workers

    Returns:
        SolveResult of the first successful vector, or infeasible
    """
    logger.info(f"Exact MinSumSE search on n={instance.n}, m={instance.m}, budget={budget}")
    base = exists_stable_efficient(instance)
    if base.exists:
        return build_result(instance, "minsum-se", "exact", 0, CapacityVector.zeros(instance.m),
                            base.matching, budget, {"candidates": 1})
    bounds = useful_bounds(instance, base.matching)
    limit = sum(bounds) if budget is None else min(budget, sum(bounds))
    candidates = chain.from_iterable(iter_vectors_with_l1(bounds, k) for k in range(1, limit + 1))
    return _search(instance, "minsum-se", candidates, budget, guard, threads, lambda r: r.l1)


def solve_minmax_se(instance: Instance, budget: Optional[int] = None,
                    guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Smallest |r|_inf admitting a stable and efficient matching

    Each level starts with the (bound-capped) uniform vector, then every other
    vector whose largest entry equals the level.

    Args:
        instance: Instance
        budget: Largest level to try (all useful levels when None)
        guard: Maximum number of capacity vectors to evaluate
        threads: joblib workers

    Returns:
        SolveResult of the first successful vector, or infeasible
    """
    logger.info(f"Exact MinMaxSE search on n={instance.n}, m={instance.m}, budget={budget}")
    base = exists_stable_efficient(instance)
    if base.exists:
        return build_result(instance, "minmax-se", "exact", 0, CapacityVector.zeros(instance.m),
                            base.matching, budget, {"candidates": 1})
    bounds = useful_bounds(instance, base.matching)
    top = max(bounds, default=0)
    limit = top if budget is None else min(budget, top)
    candidates = chain.from_iterable(iter_vectors_with_linf(bounds, k) for k in range(1, limit + 1))
    return _search(instance, "minmax-se", candidates, budget, guard, threads, lambda r: r.linf)
