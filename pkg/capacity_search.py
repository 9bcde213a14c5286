"""
Enumeration helpers shared by the exhaustive capacity-vector solvers
"""
import logging
from dataclasses import dataclass
from itertools import islice, product
from typing import Any, Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

from joblib import Parallel, delayed

from config import LOG_LEVEL, SOLVER_CONFIG
from core import Instance, Matching
from exceptions import GuardExceededError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass
class SearchOutcome:
    """First candidate accepted by a check, with the check's result"""
    candidate: Optional[Any]
    result: Optional[Any]
    tried: int

    @property
    def found(self) -> bool:
        return self.candidate is not None


def useful_bounds(instance: Instance, base: Optional[Matching] = None) -> List[int]:
    """
    Largest increase worth trying at each school

    Seats beyond the priority-list length can never be filled. When the base
    student-optimal matching is given, schools it leaves under-filled are fixed
    at zero: they never gain students under larger capacities.

    Args:
        instance: Instance
        base: Student-optimal stable matching under the base capacities

    Returns:
        Per-school upper bounds
    """
    bounds = [max(0, len(instance.priorities[w]) - instance.capacities[w]) for w in range(instance.m)]
    if base is not None:
        load = base.occupancy(instance.m)
        bounds = [b if load[w] >= instance.capacities[w] else 0 for w, b in enumerate(bounds)]
    return bounds


def iter_vectors_with_l1(bounds: Sequence[int], total: int) -> Iterator[Tuple[int, ...]]:
    """Vectors with the given sum, larger entries at earlier schools first"""
    m = len(bounds)
    suffix = [0] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] + bounds[i]
    if total > suffix[0]:
        return
    vector = [0] * m

    def fill(i: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if i == m:
            if remaining == 0:
                yield tuple(vector)
            return
        high = min(bounds[i], remaining)
        low = max(0, remaining - suffix[i + 1])
        for amount in range(high, low - 1, -1):
            vector[i] = amount
            yield from fill(i + 1, remaining - amount)
        vector[i] = 0

    yield from fill(0, total)


def iter_vectors_with_linf(bounds: Sequence[int], level: int) -> Iterator[Tuple[int, ...]]:
    """Vectors whose largest entry is exactly level; the capped uniform vector comes first"""
    caps = [min(b, level) for b in bounds]
    if level == 0:
        yield tuple(caps)
        return
    if level not in caps:
        return
    for vector in product(*(range(c, -1, -1) for c in caps)):
        if level in vector:
            yield vector


def first_success(candidates: Iterable[Any],
                  check: Callable[[Any], Optional[Any]],
                  threads: Optional[int] = None,
                  guard: Optional[int] = None,
                  what: str = "candidates") -> SearchOutcome:
    """
    Evaluate candidates in order and return the first one whose check is not None

    With threads > 1 candidates are checked in batches through joblib; the
    lowest-index success of a batch wins, so the answer matches the sequential run.

    Args:
        candidates: Candidates in canonical order
        check: Picklable callable returning a result or None
        threads: Worker count (config default when None)
        guard: Maximum number of candidates to evaluate
        what: Label for guard errors

    Returns:
        SearchOutcome (candidate None when nothing succeeded)
    """
    threads = threads or SOLVER_CONFIG["threads"]
    batch_size = 1 if threads <= 1 else SOLVER_CONFIG["parallel_batch_size"]
    iterator = iter(candidates)
    tried = 0
    parallel = Parallel(n_jobs=threads) if threads > 1 else None

    while True:
        batch = list(islice(iterator, batch_size))
        if not batch:
            return SearchOutcome(None, None, tried)
        over_guard = guard is not None and tried + len(batch) > guard
        if over_guard:
            batch = batch[:guard - tried]
        if parallel is not None:
            results = parallel(delayed(check)(candidate) for candidate in batch)
        else:
            results = [check(candidate) for candidate in batch]
        for candidate, result in zip(batch, results):
            tried += 1
            if result is not None:
                return SearchOutcome(candidate, result, tried)
        if over_guard:
            raise GuardExceededError(what, guard)
