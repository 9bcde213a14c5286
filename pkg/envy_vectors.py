"""
Assignment vectors for initially unassigned students, justified-envy counts and matching realization
"""
import logging
from dataclasses import dataclass
from itertools import product
from math import prod
from typing import Dict, FrozenSet, Iterator, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from config import GUARD_CONFIG, LOG_LEVEL, SOLVER_CONFIG
from core import CapacityVector, Instance, Matching
from deferred_acceptance import StableContext
from exceptions import AssignmentVectorError, GuardExceededError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AssignmentVector:
    """One acceptable school for each student left unassigned by the base matching"""
    choice: Dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "choice", dict(sorted(self.choice.items())))

    def __hash__(self):
        return hash(tuple(self.choice.items()))

    @classmethod
    def from_schools(cls, ctx: StableContext, schools: Sequence[int]) -> "AssignmentVector":
        """Vector from schools listed in the order of ctx.unassigned"""
        if len(schools) != ctx.s:
            raise AssignmentVectorError(f"expected {ctx.s} choices, got {len(schools)}")
        return cls(dict(zip(ctx.unassigned, schools)))

    @classmethod
    def from_ids(cls, instance: Instance, choice: Mapping[str, str]) -> "AssignmentVector":
        try:
            return cls({instance.student_index[sid]: instance.school_index[wid] for sid, wid in choice.items()})
        except KeyError as exc:
            raise AssignmentVectorError(f"unknown identifier {exc.args[0]!r} in assignment vector") from exc


@dataclass(frozen=True)
class EnvyReport:
    """JE(v): assigned students who would justifiedly envy a newly placed student"""
    vector: AssignmentVector
    enviers: FrozenSet[int]

    @property
    def count(self) -> int:
        return len(self.enviers)


class Realization(NamedTuple):
    matching: Matching
    increase: CapacityVector


def validate_vector(ctx: StableContext, instance: Instance, v: AssignmentVector) -> None:
    if set(v.choice) != set(ctx.unassigned):
        raise AssignmentVectorError("assignment vector domain differs from the unassigned students")
    for u, w in v.choice.items():
        if not (0 <= w < instance.m and instance.acceptable(u, w)):
            raise AssignmentVectorError(f"{instance.students[u]} cannot be placed at school index {w}")


def envious_assigned(instance: Instance, ctx: StableContext, choice: Mapping[int, int]) -> FrozenSet[int]:
    """Assigned students preferring some school that receives a lower-priority placed student"""
    worst_placed = [-1] * instance.m
    for u, w in choice.items():
        rank = instance.school_rank[w][u]
        if rank > worst_placed[w]:
            worst_placed[w] = rank
    enviers = set()
    for a in ctx.assigned:
        current = ctx.matching.school_of(a)
        for w in instance.preferences[a][:instance.student_rank[a][current]]:
            if worst_placed[w] > instance.school_rank[w][a]:
                enviers.add(a)
                break
    return frozenset(enviers)


def envy_report(ctx: StableContext, instance: Instance, v: AssignmentVector) -> EnvyReport:
    """
    Compute JE(v) for the base matching extended by v

    Args:
        ctx: Base stable context
        instance: Instance
        v: Assignment vector over ctx.unassigned

    Returns:
        EnvyReport whose count is the number of envious students, not of envy pairs
    """
    validate_vector(ctx, instance, v)
    return EnvyReport(v, envious_assigned(instance, ctx, v.choice))


def count_assignment_vectors(ctx: StableContext, instance: Instance) -> int:
    return prod(len(instance.preferences[u]) for u in ctx.unassigned)


def iter_assignment_vectors(ctx: StableContext, instance: Instance) -> Iterator[Tuple[int, ...]]:
    """School tuples in the order of ctx.unassigned, each student's list in preference order"""
    return product(*(instance.preferences[u] for u in ctx.unassigned))


def _best_in_slice(instance: Instance, ctx: StableContext,
                   options: List[Sequence[int]]) -> Tuple[int, Tuple[int, ...]]:
    best_count, best_schools = None, None
    for schools in product(*options):
        count = len(envious_assigned(instance, ctx, dict(zip(ctx.unassigned, schools))))
        if best_count is None or count < best_count:
            best_count, best_schools = count, schools
            if count == 0:
                break
    return best_count, best_schools


def min_envy_bruteforce(ctx: StableContext, instance: Instance,
                        guard: Optional[int] = None,
                        threads: Optional[int] = None) -> EnvyReport:
    """
    Scan every assignment vector for the fewest envious assigned students

    Args:
        ctx: Base stable context
        instance: Instance
        guard: Maximum number of vectors
        threads: joblib workers; slices follow the first unassigned student's choices

    Returns:
        EnvyReport of the first minimizer in enumeration order
    """
    guard = GUARD_CONFIG["assignment_vectors"] if guard is None else guard
    threads = threads or SOLVER_CONFIG["threads"]
    if not ctx.unassigned:
        return EnvyReport(AssignmentVector({}), frozenset())
    size = count_assignment_vectors(ctx, instance)
    if size > guard:
        raise GuardExceededError("assignment vector scan", guard, size)
    logger.debug(f"Scanning {size} assignment vectors")

    options = [instance.preferences[u] for u in ctx.unassigned]
    if threads <= 1:
        _, schools = _best_in_slice(instance, ctx, options)
    else:
        slices = [[(first,)] + options[1:] for first in options[0]]
        results = Parallel(n_jobs=threads)(
            delayed(_best_in_slice)(instance, ctx, part) for part in slices
        )
        # min keeps the earliest slice among equal counts
        _, schools = min(results, key=lambda item: item[0])
    vector = AssignmentVector.from_schools(ctx, schools)
    return EnvyReport(vector, envious_assigned(instance, ctx, vector.choice))


def normalize(ctx: StableContext, instance: Instance, v: AssignmentVector) -> AssignmentVector:
    """
    Remove justified envy among the placed students

    The first envious placed student (document order) moves to the best school
    holding a placed student it justifiedly envies; repeat until none is left.
    """
    validate_vector(ctx, instance, v)
    current = dict(v.choice)
    while True:
        holders: Dict[int, List[int]] = {}
        for u, w in current.items():
            holders.setdefault(w, []).append(u)
        mover, target = None, None
        for u in ctx.unassigned:
            for w in instance.preferences[u][:instance.student_rank[u][current[u]]]:
                rank = instance.school_rank[w][u]
                if any(rank < instance.school_rank[w][x] for x in holders.get(w, ())):
                    mover, target = u, w
                    break
            if mover is not None:
                break
        if mover is None:
            return AssignmentVector(current)
        current[mover] = target


def _backfill(instance: Instance, schools_of: List[Optional[int]]) -> None:
    """Fill seats below base capacity with the highest-priority student who wants them"""
    while True:
        load = [0] * instance.m
        for w in schools_of:
            if w is not None:
                load[w] += 1
        moved = False
        for w in range(instance.m):
            if load[w] >= instance.capacities[w]:
                continue
            for u in instance.priorities[w]:
                if instance.prefers(u, w, schools_of[u]):
                    schools_of[u] = w
                    moved = True
                    break
            if moved:
                break
        if not moved:
            return


def realize(ctx: StableContext, instance: Instance, v: AssignmentVector) -> Realization:
    """
    Turn an assignment vector into a stable perfect matching and its capacity increase

    Steps: normalize v; place the unassigned students; move every envious assigned
    student to the best school holding a student of lower priority (judged on the
    state before any such move); back-fill seats left below base capacity; set
    r[w] = max(0, occupancy - q[w]).

    Args:
        ctx: Base stable context (r = 0)
        instance: Instance
        v: Assignment vector

    Returns:
        Realization(matching, increase) with |r|_1 <= n_je(normalized v) + s
    """
    vector = normalize(ctx, instance, v)
    schools_of = ctx.matching.as_list(instance.n)
    for u, w in vector.choice.items():
        schools_of[u] = w

    enviers = envious_assigned(instance, ctx, vector.choice)
    worst = [-1] * instance.m
    for u, w in enumerate(schools_of):
        if w is not None and instance.school_rank[w][u] > worst[w]:
            worst[w] = instance.school_rank[w][u]
    targets = {}
    for a in sorted(enviers):
        for w in instance.preferences[a]:
            if worst[w] > instance.school_rank[w][a]:
                targets[a] = w
                break
    for a, w in targets.items():
        schools_of[a] = w

    _backfill(instance, schools_of)
    load = [0] * instance.m
    for w in schools_of:
        load[w] += 1
    increase = CapacityVector(tuple(max(0, load[w] - instance.capacities[w]) for w in range(instance.m)))
    logger.debug(f"Realized vector with {len(enviers)} envious students, |r|_1 = {increase.l1}")
    return Realization(Matching.from_list(schools_of), increase)
