"""
MinMaxSP: uniform capacity raising until deferred acceptance is perfect, plus trimming
"""
import logging
from typing import Optional

from config import LOG_LEVEL
from core import CapacityVector, Instance, Matching, require_feasible
from deferred_acceptance import is_stable, student_optimal_stable
from exceptions import UnstableMatchingError
from minsum_sp import SolveResult, build_result

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


def solve_minmax_sp(instance: Instance, budget: Optional[int] = None) -> SolveResult:
    """
    Raise every capacity by the same amount until the student-optimal stable matching is perfect

    Args:
        instance: Instance
        budget: Max budget k^max

    Returns:
        SolveResult with the uniform vector; details carry the trimmed vector
    """
    logger.info(f"Uniform MinMaxSP on n={instance.n}, m={instance.m}, budget={budget}")
    cap = max(len(prio) - q for prio, q in zip(instance.priorities, instance.capacities))
    cap = max(cap, 0)
    level = 0
    while True:
        increase = CapacityVector.uniform(instance.m, level)
        ctx = student_optimal_stable(instance, increase)
        if ctx.is_perfect:
            break
        if level >= cap:
            raise AssertionError("uniform increase up to the priority-list lengths must be perfect")
        level += 1

    trimmed = trim(instance, ctx.matching, increase)
    details = {
        "levels_tried": level + 1,
        "trimmed_increase": list(trimmed.increase),
        "trimmed_sum": trimmed.l1,
    }
    return build_result(instance, "minmax-sp", "uniform", level, increase, ctx.matching, budget, details)


def trim(instance: Instance, matching: Matching, r: CapacityVector) -> CapacityVector:
    """
    Shrink r to the seats a stable matching actually uses

    Args:
        instance: Instance
        matching: Matching stable and feasible under q+r
        r: Capacity increase

    Returns:
        r' with r'[w] = max(0, occupancy(w) - q[w]); the matching stays stable under q+r'
    """
    require_feasible(instance, matching, r)
    if not is_stable(instance, matching, r):
        raise UnstableMatchingError("trim requires a stable matching")
    load = matching.occupancy(instance.m)
    trimmed = CapacityVector(tuple(max(0, load[w] - instance.capacities[w]) for w in range(instance.m)))
    if not is_stable(instance, matching, trimmed):
        raise AssertionError("trimming broke stability")
    return trimmed
