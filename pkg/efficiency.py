"""
Justified envy, dominance and Pareto-efficiency checks for student welfare
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional

import networkx as nx

from config import GUARD_CONFIG, LOG_LEVEL
from core import (
    CapacityVector, Instance, Matching, check_indices, iter_feasible_assignments,
    require_feasible, search_space_size,
)
from exceptions import GuardExceededError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvyEdge:
    """envier prefers school, where envied sits, and school ranks envier above envied"""
    envier: int
    envied: int
    school: int


@dataclass(frozen=True)
class EfficiencyCheck:
    """Verdict of is_efficient; witness is a dominating matching when inefficient"""
    efficient: bool
    witness: Optional[Matching] = None
    kind: Optional[str] = None
    moves: Optional[Dict[int, int]] = None

    def __bool__(self) -> bool:
        return self.efficient


def justified_envy_pairs(instance: Instance, matching: Matching) -> List[EnvyEdge]:
    """
    Every justified-envy triple of a matching

    Args:
        instance: Instance
        matching: Matching with acceptable assignments

    Returns:
        EnvyEdges ordered by envier, then the envier's preference, then envied index
    """
    check_indices(instance, matching)
    holders = matching.students_at(instance.m)
    edges = []
    for u in range(instance.n):
        current = matching.school_of(u)
        limit = len(instance.preferences[u]) if current is None else instance.student_rank[u][current]
        for w in instance.preferences[u][:limit]:
            rank = instance.school_rank[w][u]
            for other in holders[w]:
                if rank < instance.school_rank[w][other]:
                    edges.append(EnvyEdge(u, other, w))
    return edges


def dominates(instance: Instance, mu: Matching, sigma: Matching) -> bool:
    """True iff every student weakly prefers mu to sigma and some student strictly"""
    strictly_better = False
    for u in range(instance.n):
        a, b = mu.school_of(u), sigma.school_of(u)
        if instance.prefers(u, b, a):
            return False
        if instance.prefers(u, a, b):
            strictly_better = True
    return strictly_better


def _apply_moves(matching: Matching, moves: Dict[int, int]) -> Matching:
    assignment = dict(matching.assignment)
    assignment.update(moves)
    return Matching(assignment)


def is_efficient(instance: Instance, matching: Matching,
                 r: Optional[CapacityVector] = None) -> EfficiencyCheck:
    """
    Decide Pareto efficiency through the improvement graph over schools

    An arc mu(u) -> w labelled u exists for every school w that u prefers to
    mu(u). The matching is inefficient iff an arc (possibly from an unmatched
    student) enters an under-filled school, or the school arcs contain a cycle.

    Args:
        instance: Instance
        matching: Matching feasible under q+r
        r: Capacity increase

    Returns:
        EfficiencyCheck, with a dominating witness when inefficient
    """
    require_feasible(instance, matching, r)
    capacities = instance.capacities_with(r)
    load = matching.occupancy(instance.m)

    graph = nx.MultiDiGraph()
    graph.add_nodes_from(range(instance.m))
    for u in range(instance.n):
        current = matching.school_of(u)
        limit = len(instance.preferences[u]) if current is None else instance.student_rank[u][current]
        for w in instance.preferences[u][:limit]:
            if load[w] < capacities[w]:
                moves = {u: w}
                logger.debug(f"{instance.students[u]} can move into slack at {instance.schools[w]}")
                return EfficiencyCheck(False, _apply_moves(matching, moves), "slack", moves)
            if current is not None:
                graph.add_edge(current, w, key=u)

    try:
        cycle = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return EfficiencyCheck(True)
    moves = {student: head for _, head, student in cycle}
    logger.debug(f"Improvement cycle through {len(moves)} schools")
    return EfficiencyCheck(False, _apply_moves(matching, moves), "cycle", moves)


def efficiency_oracle(instance: Instance, matching: Matching,
                      r: Optional[CapacityVector] = None,
                      guard: Optional[int] = None) -> bool:
    """
    Brute-force efficiency check: look for any feasible matching that dominates

    Each student only ranges over schools weakly preferred to the current one
    (plus staying unmatched when unmatched), so any different feasible candidate
    dominates.

    Args:
        instance: Instance
        matching: Matching feasible under q+r
        r: Capacity increase
        guard: Maximum product of option counts

    Returns:
        True iff no feasible matching dominates
    """
    require_feasible(instance, matching, r)
    guard = GUARD_CONFIG["efficiency_oracle"] if guard is None else guard
    current = matching.as_list(instance.n)
    options = []
    for u in range(instance.n):
        prefs = list(instance.preferences[u])
        if current[u] is None:
            options.append(prefs + [None])
        else:
            options.append(prefs[:instance.student_rank[u][current[u]] + 1])
    size = search_space_size(options)
    if size > guard:
        raise GuardExceededError("efficiency oracle", guard, size)

    for candidate in iter_feasible_assignments(options, instance.capacities_with(r)):
        if candidate != current:
            return False
    return True
