"""
Student-proposing deferred acceptance, blocking pairs and a stable-matching enumerator
"""
import heapq
import logging
from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from config import GUARD_CONFIG, LOG_LEVEL, SOLVER_CONFIG
from core import (
    CapacityVector, Instance, Matching, iter_feasible_assignments,
    require_feasible, search_space_size,
)
from exceptions import GuardExceededError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StableContext:
    """Student-optimal stable matching with its unassigned/assigned split"""
    matching: Matching
    unassigned: Tuple[int, ...]
    assigned: Tuple[int, ...]
    capacities: Tuple[int, ...]
    delta_un: int

    @property
    def s(self) -> int:
        return len(self.unassigned)

    @property
    def is_perfect(self) -> bool:
        return not self.unassigned


def student_optimal_stable(instance: Instance,
                           r: Optional[CapacityVector] = None,
                           proposal_order: Optional[Sequence[int]] = None) -> StableContext:
    """
    Run student-proposing deferred acceptance under capacities q+r

    Args:
        instance: Instance
        r: Capacity increase (zero when omitted)
        proposal_order: Order in which free students enter the queue (document order by default)

    Returns:
        StableContext of the student-optimal stable matching
    """
    capacities = instance.capacities_with(r)
    order = list(range(instance.n)) if proposal_order is None else list(proposal_order)
    next_choice = [0] * instance.n
    # Per school a max-heap on priority rank: the worst held student is on top
    held: List[List[Tuple[int, int]]] = [[] for _ in range(instance.m)]
    free = deque(order)

    while free:
        u = free.popleft()
        prefs = instance.preferences[u]
        if next_choice[u] >= len(prefs):
            continue
        w = prefs[next_choice[u]]
        next_choice[u] += 1
        heapq.heappush(held[w], (-instance.school_rank[w][u], u))
        if len(held[w]) > capacities[w]:
            _, rejected = heapq.heappop(held[w])
            free.append(rejected)

    assignment = {u: w for w in range(instance.m) for _, u in held[w]}
    matching = Matching(assignment)
    unassigned = tuple(u for u in range(instance.n) if u not in assignment)
    assigned = tuple(u for u in range(instance.n) if u in assignment)
    delta_un = max((len(instance.preferences[u]) for u in unassigned), default=0)
    logger.debug(f"Deferred acceptance matched {len(assigned)} of {instance.n} students")
    return StableContext(matching, unassigned, assigned, tuple(capacities), delta_un)


def _worst_ranks(instance: Instance, schools_of: Sequence[Optional[int]]) -> List[int]:
    """Priority rank of the lowest-priority student held by each school (-1 if empty)"""
    worst = [-1] * instance.m
    for u, w in enumerate(schools_of):
        if w is not None:
            rank = instance.school_rank[w][u]
            if rank > worst[w]:
                worst[w] = rank
    return worst


def find_blocking_pairs(instance: Instance, schools_of: Sequence[Optional[int]],
                        capacities: Sequence[int], first_only: bool = False) -> List[Tuple[int, int]]:
    """Blocking pairs of an assignment list assumed feasible"""
    load = [0] * instance.m
    for w in schools_of:
        if w is not None:
            load[w] += 1
    worst = _worst_ranks(instance, schools_of)
    pairs = []
    for u in range(instance.n):
        current = schools_of[u]
        limit = len(instance.preferences[u]) if current is None else instance.student_rank[u][current]
        for w in instance.preferences[u][:limit]:
            if load[w] < capacities[w] or instance.school_rank[w][u] < worst[w]:
                pairs.append((u, w))
                if first_only:
                    return pairs
    return pairs


def blocking_pairs(instance: Instance, matching: Matching,
                   r: Optional[CapacityVector] = None) -> List[Tuple[int, int]]:
    """
    All blocking (student, school) pairs of a feasible matching

    Args:
        instance: Instance
        matching: Matching feasible under q+r
        r: Capacity increase

    Returns:
        Pairs in student order, then preference order; empty iff the matching is stable
    """
    require_feasible(instance, matching, r)
    return find_blocking_pairs(instance, matching.as_list(instance.n), instance.capacities_with(r))


def is_stable(instance: Instance, matching: Matching, r: Optional[CapacityVector] = None) -> bool:
    require_feasible(instance, matching, r)
    schools_of = matching.as_list(instance.n)
    return not find_blocking_pairs(instance, schools_of, instance.capacities_with(r), first_only=True)


def _stable_in_branch(instance: Instance, options: List[List[Optional[int]]],
                      capacities: List[int], limit: Optional[int]) -> List[Matching]:
    found = []
    for schools_of in iter_feasible_assignments(options, capacities):
        if not find_blocking_pairs(instance, schools_of, capacities, first_only=True):
            found.append(Matching.from_list(schools_of))
            if limit is not None and len(found) >= limit:
                break
    return found


def enumerate_stable_matchings(instance: Instance,
                               r: Optional[CapacityVector] = None,
                               limit: Optional[int] = None,
                               guard: Optional[int] = None,
                               threads: Optional[int] = None) -> List[Matching]:
    """
    Exhaustively list the stable matchings under q+r

    Args:
        instance: Instance
        r: Capacity increase
        limit: Maximum number of matchings to return
        guard: Maximum product of per-student option counts
        threads: joblib workers; branches on the first student's options

    Returns:
        Stable matchings in canonical candidate order (preference order, unmatched last)
    """
    guard = GUARD_CONFIG["stable_enumeration"] if guard is None else guard
    threads = threads or SOLVER_CONFIG["threads"]
    capacities = instance.capacities_with(r)
    options: List[List[Optional[int]]] = [list(prefs) + [None] for prefs in instance.preferences]
    size = search_space_size(options)
    if size > guard:
        raise GuardExceededError("stable matching enumeration", guard, size)
    logger.debug(f"Enumerating stable matchings over {size} candidate maps")

    if threads <= 1 or not options:
        return _stable_in_branch(instance, options, capacities, limit)

    branches = [[[choice]] + options[1:] for choice in options[0]]
    results = Parallel(n_jobs=threads)(
        delayed(_stable_in_branch)(instance, branch, capacities, limit) for branch in branches
    )
    merged = [matching for part in results for matching in part]
    return merged if limit is None else merged[:limit]
