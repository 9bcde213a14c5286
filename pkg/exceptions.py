"""
Exception hierarchy for the capacity planner
"""
from typing import List, Optional


class CapacityPlanningError(Exception):
    """Base class for every error raised by this package"""


class InstanceValidationError(CapacityPlanningError, ValueError):
    """A document or instance violates the model's invariants"""

    def __init__(self, message: str, identifier: Optional[str] = None):
        self.identifier = identifier
        if identifier is not None:
            message = f"{message} (offending identifier: {identifier!r})"
        super().__init__(message)


class UnknownIdentifierError(InstanceValidationError):
    """A matching or vector references a student or school outside the instance"""


class InfeasibleMatchingError(CapacityPlanningError, ValueError):
    """A matching is not acceptable-valid or exceeds capacities"""


class UnstableMatchingError(CapacityPlanningError, ValueError):
    """A stable matching was required"""


class AssignmentVectorError(CapacityPlanningError, ValueError):
    """An assignment vector does not match the unassigned students of its context"""


class GuardExceededError(CapacityPlanningError, RuntimeError):
    """An exhaustive search grew past its configured guard"""

    def __init__(self, what: str, guard: int, size: Optional[int] = None):
        self.what = what
        self.guard = guard
        self.size = size
        detail = f"{size} candidates" if size is not None else "search"
        super().__init__(f"{what}: {detail} exceeds guard {guard}")


class LPSolverError(CapacityPlanningError, RuntimeError):
    """The simplex routine failed or returned an inaccurate solution"""


class ReductionInputError(CapacityPlanningError, ValueError):
    """A reduction generator received an unusable source instance"""


class UnknownExampleError(CapacityPlanningError, ValueError):
    """gen_example was asked for a name it does not know"""


class CertificateError(CapacityPlanningError, RuntimeError):
    """A solver witness fails a certificate its problem promises"""

    def __init__(self, problem: str, method: str, failed: List[str]):
        self.problem = problem
        self.method = method
        self.failed = failed
        super().__init__(f"{problem}/{method} witness is not {', '.join(failed)}")
