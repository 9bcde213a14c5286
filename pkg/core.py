"""
Instance model, validation and canonical serialization for capacity planning
"""
import logging
from dataclasses import dataclass, field
from math import prod
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from config import LOG_LEVEL
from documents import (
    IncreaseDocument, InstanceDocument, MatchingDocument, SchoolEntry,
    dump_document, load_document,
)
from exceptions import InfeasibleMatchingError, InstanceValidationError, UnknownIdentifierError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

# Rank of a partner that is not on the list
UNACCEPTABLE = 1 << 30


@dataclass(frozen=True)
class Instance:
    """Students, schools, strict lists and base capacities, indexed in document order"""

    students: Tuple[str, ...]
    schools: Tuple[str, ...]
    capacities: Tuple[int, ...]
    preferences: Tuple[Tuple[int, ...], ...]
    priorities: Tuple[Tuple[int, ...], ...]
    student_rank: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    school_rank: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    student_index: Dict[str, int] = field(init=False, repr=False, compare=False)
    school_index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n, m = len(self.students), len(self.schools)
        if len(self.capacities) != m or len(self.priorities) != m or len(self.preferences) != n:
            raise InstanceValidationError("list lengths do not match the number of agents")

        student_rank = [[UNACCEPTABLE] * m for _ in range(n)]
        school_rank = [[UNACCEPTABLE] * n for _ in range(m)]
        for u, prefs in enumerate(self.preferences):
            if not prefs:
                raise InstanceValidationError("empty preference list", self.students[u])
            for position, w in enumerate(prefs):
                if not 0 <= w < m:
                    raise UnknownIdentifierError("preference names an unknown school", self.students[u])
                if student_rank[u][w] != UNACCEPTABLE:
                    raise InstanceValidationError("school listed twice", self.schools[w])
                student_rank[u][w] = position
        for w, prio in enumerate(self.priorities):
            if self.capacities[w] < 1:
                raise InstanceValidationError("capacity must be at least one", self.schools[w])
            if not prio:
                raise InstanceValidationError("empty priority list", self.schools[w])
            for position, u in enumerate(prio):
                if not 0 <= u < n:
                    raise UnknownIdentifierError("priority names an unknown student", self.schools[w])
                if school_rank[w][u] != UNACCEPTABLE:
                    raise InstanceValidationError("student listed twice", self.students[u])
                school_rank[w][u] = position
        for u in range(n):
            for w in range(m):
                if (student_rank[u][w] == UNACCEPTABLE) != (school_rank[w][u] == UNACCEPTABLE):
                    raise InstanceValidationError(
                        f"mutual acceptability violated between {self.students[u]} and {self.schools[w]}",
                        self.students[u],
                    )

        object.__setattr__(self, "student_rank", tuple(tuple(row) for row in student_rank))
        object.__setattr__(self, "school_rank", tuple(tuple(row) for row in school_rank))
        object.__setattr__(self, "student_index", {sid: i for i, sid in enumerate(self.students)})
        object.__setattr__(self, "school_index", {wid: j for j, wid in enumerate(self.schools)})

    @classmethod
    def build(cls,
              students: Sequence[str],
              schools: Sequence[str],
              capacities: Union[Sequence[int], Mapping[str, int], int],
              preferences: Mapping[str, Sequence[str]],
              priorities: Mapping[str, Sequence[str]]) -> "Instance":
        """
        Build an instance from identifier lists

        Args:
            students: Student identifiers in document order
            schools: School identifiers in document order
            capacities: One capacity per school, a mapping, or a single value for all
            preferences: Student identifier -> ordered acceptable school identifiers
            priorities: School identifier -> ordered acceptable student identifiers

        Returns:
            Validated Instance
        """
        _check_distinct(students, schools)
        student_index = {sid: i for i, sid in enumerate(students)}
        school_index = {wid: j for j, wid in enumerate(schools)}

        if isinstance(capacities, int):
            caps = [capacities] * len(schools)
        elif isinstance(capacities, Mapping):
            caps = [capacities.get(wid, 1) for wid in schools]
        else:
            caps = list(capacities)
        for wid, cap in zip(schools, caps):
            if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
                raise InstanceValidationError("capacity must be a positive integer", wid)

        for key in preferences:
            if key not in student_index:
                raise UnknownIdentifierError("preferences given for an unknown student", key)
        for key in priorities:
            if key not in school_index:
                raise UnknownIdentifierError("priorities given for an unknown school", key)

        pref_rows = []
        for sid in students:
            row = []
            for wid in preferences.get(sid, ()):
                if wid not in school_index:
                    raise UnknownIdentifierError(f"{sid} lists an unknown school", wid)
                row.append(school_index[wid])
            pref_rows.append(tuple(row))
        prio_rows = []
        for wid in schools:
            row = []
            for sid in priorities.get(wid, ()):
                if sid not in student_index:
                    raise UnknownIdentifierError(f"{wid} lists an unknown student", sid)
                row.append(student_index[sid])
            prio_rows.append(tuple(row))

        return cls(tuple(students), tuple(schools), tuple(caps), tuple(pref_rows), tuple(prio_rows))

    @property
    def n(self) -> int:
        return len(self.students)

    @property
    def m(self) -> int:
        return len(self.schools)

    def acceptable(self, u: int, w: int) -> bool:
        return self.student_rank[u][w] != UNACCEPTABLE

    def prefers(self, u: int, a: Optional[int], b: Optional[int]) -> bool:
        """True iff student u strictly prefers school a to school b (None is unmatched)"""
        if a is None:
            return False
        if b is None:
            return True
        return self.student_rank[u][a] < self.student_rank[u][b]

    def capacities_with(self, r: Optional["CapacityVector"] = None) -> List[int]:
        """Base capacities plus an increase vector"""
        if r is None:
            return list(self.capacities)
        if len(r.increase) != self.m:
            raise UnknownIdentifierError(f"increase vector has dimension {len(r.increase)}, expected {self.m}")
        return [q + extra for q, extra in zip(self.capacities, r.increase)]

    def matching(self, assignment: Mapping[str, str]) -> "Matching":
        """Matching from a student id -> school id mapping"""
        pairs = {}
        for sid, wid in assignment.items():
            if sid not in self.student_index:
                raise UnknownIdentifierError("matching names an unknown student", sid)
            if wid not in self.school_index:
                raise UnknownIdentifierError("matching names an unknown school", wid)
            pairs[self.student_index[sid]] = self.school_index[wid]
        return Matching(pairs)

    def increase(self, amounts: Union[Mapping[str, int], Sequence[int], None] = None) -> "CapacityVector":
        """Capacity vector from a school id -> amount mapping (missing schools are 0) or a sequence"""
        if amounts is None:
            return CapacityVector.zeros(self.m)
        if isinstance(amounts, Mapping):
            values = [0] * self.m
            for wid, amount in amounts.items():
                if wid not in self.school_index:
                    raise UnknownIdentifierError("increase names an unknown school", wid)
                values[self.school_index[wid]] = int(amount)
            return CapacityVector(tuple(values))
        values = tuple(int(a) for a in amounts)
        if len(values) != self.m:
            raise UnknownIdentifierError(f"increase vector has dimension {len(values)}, expected {self.m}")
        return CapacityVector(values)

    def acceptable_students(self, w: int) -> int:
        return len(self.priorities[w])

    def without_students(self, removed: Sequence[str]) -> "Instance":
        """Drop students from the instance and from every priority list; schools left with nobody go too"""
        gone = set(removed)
        for sid in gone:
            if sid not in self.student_index:
                raise UnknownIdentifierError("cannot remove an unknown student", sid)
        students = [sid for sid in self.students if sid not in gone]
        preferences = {
            sid: [self.schools[w] for w in self.preferences[self.student_index[sid]]]
            for sid in students
        }
        priorities = {
            wid: [self.students[u] for u in self.priorities[j] if self.students[u] not in gone]
            for j, wid in enumerate(self.schools)
        }
        priorities = {wid: prio for wid, prio in priorities.items() if prio}
        schools = [wid for wid in self.schools if wid in priorities]
        capacities = {wid: self.capacities[self.school_index[wid]] for wid in schools}
        return Instance.build(students, schools, capacities, preferences, priorities)

    def to_document(self) -> InstanceDocument:
        return InstanceDocument(
            students=list(self.students),
            schools=[SchoolEntry(id=wid, capacity=cap) for wid, cap in zip(self.schools, self.capacities)],
            preferences={
                sid: [self.schools[w] for w in self.preferences[u]] for u, sid in enumerate(self.students)
            },
            priorities={
                wid: [self.students[u] for u in self.priorities[j]] for j, wid in enumerate(self.schools)
            },
        )

    @classmethod
    def from_document(cls, document: InstanceDocument) -> "Instance":
        schools = [entry.id for entry in document.schools]
        capacities = [entry.capacity for entry in document.schools]
        return cls.build(document.students, schools, capacities, document.preferences, document.priorities)


@dataclass(frozen=True)
class Matching:
    """Partial assignment student index -> school index; unmatched students are absent"""

    assignment: Dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(sorted(self.assignment.items())))

    def __hash__(self):
        return hash(tuple(self.assignment.items()))

    @classmethod
    def from_list(cls, schools_of: Sequence[Optional[int]]) -> "Matching":
        return cls({u: w for u, w in enumerate(schools_of) if w is not None})

    def school_of(self, u: int) -> Optional[int]:
        return self.assignment.get(u)

    def as_list(self, n: int) -> List[Optional[int]]:
        return [self.assignment.get(u) for u in range(n)]

    def occupancy(self, m: int) -> List[int]:
        load = [0] * m
        for w in self.assignment.values():
            load[w] += 1
        return load

    def students_at(self, m: int) -> List[List[int]]:
        holders: List[List[int]] = [[] for _ in range(m)]
        for u, w in self.assignment.items():
            holders[w].append(u)
        return holders

    def unmatched(self, n: int) -> List[int]:
        return [u for u in range(n) if u not in self.assignment]

    def is_perfect(self, n: int) -> bool:
        return len(self.assignment) == n

    def __len__(self) -> int:
        return len(self.assignment)


@dataclass(frozen=True)
class CapacityVector:
    """Nonnegative per-school capacity increase"""

    increase: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "increase", tuple(self.increase))
        for amount in self.increase:
            if amount < 0:
                raise InstanceValidationError(f"capacity increase must be nonnegative, got {amount}")

    @classmethod
    def zeros(cls, m: int) -> "CapacityVector":
        return cls((0,) * m)

    @classmethod
    def uniform(cls, m: int, level: int) -> "CapacityVector":
        return cls((level,) * m)

    @property
    def l1(self) -> int:
        return sum(self.increase)

    @property
    def linf(self) -> int:
        return max(self.increase, default=0)

    def dominated_by(self, other: "CapacityVector") -> bool:
        """Componentwise self <= other"""
        return all(a <= b for a, b in zip(self.increase, other.increase))

    def __len__(self) -> int:
        return len(self.increase)


@dataclass(frozen=True)
class InstanceStats:
    n: int
    m: int
    delta_st: int
    delta_sc: int
    total_capacity: int

    def as_dict(self) -> Dict[str, int]:
        return {
            "n": self.n, "m": self.m, "delta_st": self.delta_st,
            "delta_sc": self.delta_sc, "total_capacity": self.total_capacity,
        }


def _check_distinct(students: Sequence[str], schools: Sequence[str]) -> None:
    """Identifiers must be unique across both sides"""
    seen = set()
    for identifier in list(students) + list(schools):
        if identifier in seen:
            raise InstanceValidationError("duplicate identifier", identifier)
        seen.add(identifier)


def parse_instance(text: str) -> Instance:
    """
    Parse and validate an instance document

    Args:
        text: JSON instance document

    Returns:
        Validated Instance
    """
    document = load_document(InstanceDocument, text)
    instance = Instance.from_document(document)
    logger.debug(f"Parsed instance with {instance.n} students and {instance.m} schools")
    return instance


def serialize_instance(instance: Instance) -> str:
    return dump_document(instance.to_document())


def instance_stats(instance: Instance) -> InstanceStats:
    """Sizes and list-length maxima of an instance"""
    return InstanceStats(
        n=instance.n,
        m=instance.m,
        delta_st=max((len(p) for p in instance.preferences), default=0),
        delta_sc=max((len(p) for p in instance.priorities), default=0),
        total_capacity=sum(instance.capacities),
    )


def check_indices(instance: Instance, matching: Matching) -> None:
    for u, w in matching.assignment.items():
        if not 0 <= u < instance.n:
            raise UnknownIdentifierError(f"matching references student index {u}")
        if not 0 <= w < instance.m:
            raise UnknownIdentifierError(f"matching references school index {w}")


def infeasibility_reason(instance: Instance, matching: Matching,
                         r: Optional[CapacityVector] = None) -> Optional[str]:
    """Why a matching is not feasible under q+r, or None if it is"""
    check_indices(instance, matching)
    capacities = instance.capacities_with(r)
    for u, w in matching.assignment.items():
        if not instance.acceptable(u, w):
            return f"{instance.students[u]} does not find {instance.schools[w]} acceptable"
    for w, load in enumerate(matching.occupancy(instance.m)):
        if load > capacities[w]:
            return f"{instance.schools[w]} holds {load} students but has capacity {capacities[w]}"
    return None


def is_feasible(instance: Instance, matching: Matching, r: Optional[CapacityVector] = None) -> bool:
    """True iff every assignment is acceptable and no school exceeds q+r"""
    return infeasibility_reason(instance, matching, r) is None


def require_feasible(instance: Instance, matching: Matching, r: Optional[CapacityVector] = None) -> None:
    reason = infeasibility_reason(instance, matching, r)
    if reason is not None:
        raise InfeasibleMatchingError(reason)


def parse_matching(instance: Instance, text: str) -> Matching:
    document = load_document(MatchingDocument, text)
    return instance.matching(document.assignment)


def matching_to_dict(instance: Instance, matching: Matching) -> Dict[str, str]:
    return {instance.students[u]: instance.schools[w] for u, w in matching.assignment.items()}


def serialize_matching(instance: Instance, matching: Matching) -> str:
    return dump_document(MatchingDocument(assignment=matching_to_dict(instance, matching)))


def parse_increase(instance: Instance, text: str) -> CapacityVector:
    document = load_document(IncreaseDocument, text)
    return instance.increase(document.increase)


def increase_to_dict(instance: Instance, r: CapacityVector) -> Dict[str, int]:
    return {wid: amount for wid, amount in zip(instance.schools, r.increase)}


def serialize_increase(instance: Instance, r: CapacityVector) -> str:
    return dump_document(IncreaseDocument(increase=increase_to_dict(instance, r)))


def search_space_size(options: Sequence[Sequence[Optional[int]]]) -> int:
    return prod(len(choices) for choices in options)


def iter_feasible_assignments(options: Sequence[Sequence[Optional[int]]],
                              capacities: Sequence[int]) -> Iterator[List[Optional[int]]]:
    """
    Depth-first walk over per-student options, pruning capacity overflows

    Args:
        options: Per student, the schools (or None for unmatched) to try, in order
        capacities: Effective capacity of each school

    Returns:
        Iterator of assignment lists in option order
    """
    n = len(options)
    load = [0] * len(capacities)
    current: List[Optional[int]] = [None] * n

    def extend(i: int) -> Iterator[List[Optional[int]]]:
        if i == n:
            yield list(current)
            return
        for w in options[i]:
            if w is None:
                current[i] = None
                yield from extend(i + 1)
            elif load[w] < capacities[w]:
                load[w] += 1
                current[i] = w
                yield from extend(i + 1)
                load[w] -= 1
        current[i] = None

    yield from extend(0)
