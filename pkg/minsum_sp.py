"""
MinSumSP solvers: envy-vector formula, exact capacity search, IP / LP rounding, greedy and special cases
"""
import logging
from dataclasses import dataclass, field
from functools import partial
from itertools import chain, product
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from capacity_search import first_success, iter_vectors_with_l1, useful_bounds
from config import GUARD_CONFIG, LOG_LEVEL, LP_CONFIG, PROBLEM_CERTIFICATES
from core import CapacityVector, Instance, Matching, instance_stats
from deferred_acceptance import StableContext, is_stable, student_optimal_stable
from efficiency import is_efficient
from envy_vectors import AssignmentVector, envious_assigned, min_envy_bruteforce, normalize, realize
from exceptions import CertificateError, GuardExceededError, LPSolverError
from lp_simplex import solve_lp

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)

FEASIBLE = "feasible-within-budget"
INFEASIBLE = "infeasible-within-budget"


@dataclass
class SolveResult:
    """Outcome of a solver: objective, increase, witness and re-verified certificates"""
    problem: str
    method: str
    status: str
    objective: Optional[int]
    increase: Optional[CapacityVector]
    witness: Optional[Matching]
    certificates: Dict[str, bool]
    budget: Optional[int] = None
    path: Optional[str] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


@dataclass(frozen=True)
class LpModel:
    """Integer model: x_u for assigned students, y_(u,w) for unassigned students and their schools"""
    x_students: Tuple[int, ...]
    y_pairs: Tuple[Tuple[int, int], ...]
    envy_constraints: Tuple[Tuple[int, int, int], ...]

    @property
    def unassigned(self) -> Tuple[int, ...]:
        return tuple(dict.fromkeys(u for u, _ in self.y_pairs))

    def variable_names(self, instance: Instance) -> List[str]:
        names = [f"x[{instance.students[u]}]" for u in self.x_students]
        names += [f"y[{instance.students[u]},{instance.schools[w]}]" for u, w in self.y_pairs]
        return names

    def matrices(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Objective, envy rows (y - x <= 0) and assignment rows (sum y = 1) over [x, y]"""
        n_x, n_y = len(self.x_students), len(self.y_pairs)
        x_index = {u: i for i, u in enumerate(self.x_students)}
        y_index = {pair: n_x + j for j, pair in enumerate(self.y_pairs)}
        costs = np.concatenate([np.ones(n_x), np.zeros(n_y)])
        a_ub = np.zeros((len(self.envy_constraints), n_x + n_y))
        for row, (u, v, w) in enumerate(self.envy_constraints):
            a_ub[row, x_index[u]] = -1.0
            a_ub[row, y_index[(v, w)]] = 1.0
        groups = self.unassigned
        a_eq = np.zeros((len(groups), n_x + n_y))
        for row, v in enumerate(groups):
            for (student, w), column in y_index.items():
                if student == v:
                    a_eq[row, column] = 1.0
        return costs, a_ub, np.zeros(len(self.envy_constraints)), a_eq, np.ones(len(groups))


@dataclass
class IpSolution:
    value: int
    x: Dict[int, int]
    y: Dict[Tuple[int, int], int]


@dataclass
class LpRelaxation:
    value: float
    x: Dict[int, float]
    y: Dict[Tuple[int, int], float]


def certify(instance: Instance, matching: Matching, r: CapacityVector) -> Dict[str, bool]:
    """Independently re-check stability, perfectness and efficiency of a witness"""
    return {
        "stable": is_stable(instance, matching, r),
        "perfect": matching.is_perfect(instance.n),
        "efficient": is_efficient(instance, matching, r).efficient,
    }


def build_result(instance: Instance, problem: str, method: str,
                 objective: Optional[int], increase: Optional[CapacityVector],
                 witness: Optional[Matching], budget: Optional[int],
                 details: Optional[Dict[str, Any]] = None, path: Optional[str] = None) -> SolveResult:
    """
    Assemble a SolveResult, compare with the budget and attach certificates

    Raises:
        CertificateError: The witness fails a certificate promised for the problem
    """
    if witness is not None and increase is not None:
        certificates = certify(instance, witness, increase)
        failed = [flag for flag in PROBLEM_CERTIFICATES[problem] if not certificates[flag]]
        if failed:
            logger.error(f"{method} witness fails its certificates: {certificates}")
            raise CertificateError(problem, method, failed)
    else:
        certificates = {"stable": False, "perfect": False, "efficient": False}
    within = objective is not None and (budget is None or objective <= budget)
    result = SolveResult(
        problem=problem, method=method, status=FEASIBLE if within else INFEASIBLE,
        objective=objective, increase=increase, witness=witness, certificates=certificates,
        budget=budget, path=path, details=details or {},
    )
    logger.info(f"{problem}/{method}: {result.status}, objective {objective}")
    return result


def _from_vector(instance: Instance, ctx: StableContext, vector: AssignmentVector,
                 method: str, budget: Optional[int], details: Dict[str, Any],
                 path: Optional[str] = None) -> SolveResult:
    """
    Realize an assignment vector

    The objective is the realized |r|_1. n_je of the normalized vector plus s
    bounds it from above and is kept as details["upper_bound"].
    """
    normalized = normalize(ctx, instance, vector)
    envious = len(envious_assigned(instance, ctx, normalized.choice))
    matching, increase = realize(ctx, instance, vector)
    details = dict(details, unassigned=ctx.s, envious=envious, upper_bound=envious + ctx.s,
                   achieved=increase.l1)
    return build_result(instance, "minsum-sp", method, increase.l1, increase, matching,
                        budget, details, path)


def solve_formula(instance: Instance, budget: Optional[int] = None,
                  guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Minimum justified-envy count over all assignment vectors plus the number of unassigned students

    Args:
        instance: Instance
        budget: Sum budget k+
        guard: Maximum number of assignment vectors
        threads: joblib workers

    Returns:
        SolveResult realized from the first minimizer
    """
    logger.info(f"Formula method on n={instance.n}, m={instance.m}, budget={budget}")
    ctx = student_optimal_stable(instance)
    report = min_envy_bruteforce(ctx, instance, guard=guard, threads=threads)
    return _from_vector(instance, ctx, report.vector, "formula", budget, {"min_envy": report.count})


def _perfect_under(instance: Instance, vector: Tuple[int, ...]) -> Optional[Matching]:
    ctx = student_optimal_stable(instance, CapacityVector(vector))
    return ctx.matching if ctx.is_perfect else None


def solve_exact(instance: Instance, budget: Optional[int] = None,
                guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Smallest |r|_1 whose student-optimal stable matching is perfect, by exhaustive search

    Norms run upward from the number of unassigned students; within a norm,
    larger increases at earlier schools come first.

    Args:
        instance: Instance
        budget: Largest norm to try (all useful vectors when None)
        guard: Maximum number of capacity vectors to evaluate
        threads: joblib workers

    Returns:
        SolveResult of the first perfect vector, or infeasible
    """
    logger.info(f"Exact MinSumSP search on n={instance.n}, m={instance.m}, budget={budget}")
    base = student_optimal_stable(instance)
    zero = CapacityVector.zeros(instance.m)
    if base.is_perfect:
        return build_result(instance, "minsum-sp", "exact", 0, zero, base.matching, budget, {"candidates": 1})

    bounds = useful_bounds(instance, base.matching)
    limit = sum(bounds) if budget is None else min(budget, sum(bounds))
    candidates = chain.from_iterable(iter_vectors_with_l1(bounds, k) for k in range(base.s, limit + 1))
    guard = GUARD_CONFIG["capacity_vectors"] if guard is None else guard
    outcome = first_success(candidates, partial(_perfect_under, instance), threads, guard,
                            "capacity vector search")
    details = {"candidates": outcome.tried}
    if not outcome.found:
        return build_result(instance, "minsum-sp", "exact", None, None, None, budget, details)
    increase = CapacityVector(outcome.candidate)
    return build_result(instance, "minsum-sp", "exact", increase.l1, increase, outcome.result, budget, details)


def build_ip(ctx: StableContext, instance: Instance) -> LpModel:
    """
    Integer model over the base matching

    One envy constraint x_u >= y_(v,w) for every assigned u, unassigned v and
    school w acceptable to v such that u prefers w to its school and w ranks u above v.
    """
    y_pairs = tuple((v, w) for v in ctx.unassigned for w in instance.preferences[v])
    constraints = []
    for u in ctx.assigned:
        current = ctx.matching.school_of(u)
        for v in ctx.unassigned:
            for w in instance.preferences[v]:
                if instance.prefers(u, w, current) and instance.school_rank[w][u] < instance.school_rank[w][v]:
                    constraints.append((u, v, w))
    return LpModel(tuple(ctx.assigned), y_pairs, tuple(constraints))


def solve_ip(model: LpModel, guard: Optional[int] = None) -> IpSolution:
    """
    Exact 0/1 optimum: enumerate integral y, x follows as the induced lower bounds

    Args:
        model: Model from build_ip
        guard: Maximum number of y assignments

    Returns:
        IpSolution of the first optimum in enumeration order
    """
    guard = GUARD_CONFIG["assignment_vectors"] if guard is None else guard
    groups = model.unassigned
    choices = [[w for u, w in model.y_pairs if u == v] for v in groups]
    size = int(np.prod([len(c) for c in choices])) if choices else 1
    if size > guard:
        raise GuardExceededError("integer program enumeration", guard, size)

    raised_by: Dict[Tuple[int, int], List[int]] = {}
    for u, v, w in model.envy_constraints:
        raised_by.setdefault((v, w), []).append(u)

    best_value, best_schools = None, ()
    for schools in product(*choices):
        lifted = set()
        for v, w in zip(groups, schools):
            lifted.update(raised_by.get((v, w), ()))
        if best_value is None or len(lifted) < best_value:
            best_value, best_schools = len(lifted), schools
            if best_value == 0:
                break

    chosen = dict(zip(groups, best_schools))
    y = {pair: int(chosen.get(pair[0]) == pair[1]) for pair in model.y_pairs}
    lifted = {u for u, v, w in model.envy_constraints if y[(v, w)]}
    x = {u: int(u in lifted) for u in model.x_students}
    return IpSolution(value=best_value or 0, x=x, y=y)


def solve_lp_relaxation(model: LpModel) -> LpRelaxation:
    """
    Solve the relaxation with x, y >= 0 and check constraint residuals

    Args:
        model: Model from build_ip

    Returns:
        LpRelaxation with the optimal value and variable values
    """
    if not model.y_pairs:
        return LpRelaxation(0.0, {u: 0.0 for u in model.x_students}, {})
    costs, a_ub, b_ub, a_eq, b_eq = model.matrices()
    solution = solve_lp(costs, a_ub, b_ub, a_eq, b_eq)
    tolerance = LP_CONFIG["tolerance"]
    z = solution.x
    residual = max(
        float(np.max(a_ub @ z - b_ub, initial=0.0)),
        float(np.max(np.abs(a_eq @ z - b_eq), initial=0.0)),
        float(np.max(-z, initial=0.0)),
    )
    if residual > tolerance:
        raise LPSolverError(f"LP solution violates constraints by {residual:.3e}")
    n_x = len(model.x_students)
    x = {u: float(z[i]) for i, u in enumerate(model.x_students)}
    y = {pair: float(z[n_x + j]) for j, pair in enumerate(model.y_pairs)}
    return LpRelaxation(solution.value, x, y)


def round_relaxation(ctx: StableContext, relaxation: LpRelaxation) -> AssignmentVector:
    """Give each unassigned student the first school in its list with y >= 1/delta_un"""
    threshold = 1.0 / ctx.delta_un - LP_CONFIG["tolerance"]
    choice = {}
    for (v, w), value in relaxation.y.items():
        if v not in choice and value >= threshold:
            choice[v] = w
    missing = set(ctx.unassigned) - set(choice)
    if missing:
        raise LPSolverError(f"rounding found no school for {len(missing)} students")
    return AssignmentVector(choice)


def solve_lp_round(instance: Instance, budget: Optional[int] = None) -> SolveResult:
    """
    LP relaxation of the integer model rounded at threshold 1/delta_un

    Args:
        instance: Instance
        budget: Sum budget k+

    Returns:
        SolveResult realized from the rounded vector
    """
    logger.info(f"LP rounding on n={instance.n}, m={instance.m}, budget={budget}")
    ctx = student_optimal_stable(instance)
    if not ctx.unassigned:
        return _from_vector(instance, ctx, AssignmentVector({}), "lp-round", budget, {"lp_value": 0.0})
    model = build_ip(ctx, instance)
    relaxation = solve_lp_relaxation(model)
    vector = round_relaxation(ctx, relaxation)
    return _from_vector(instance, ctx, vector, "lp-round", budget, {"lp_value": relaxation.value})


def solve_with_ip(instance: Instance, budget: Optional[int] = None, guard: Optional[int] = None) -> SolveResult:
    """Exact integer model, realized through its optimal assignment"""
    logger.info(f"Integer model on n={instance.n}, m={instance.m}, budget={budget}")
    ctx = student_optimal_stable(instance)
    model = build_ip(ctx, instance)
    solution = solve_ip(model, guard=guard)
    vector = AssignmentVector({v: w for (v, w), value in solution.y.items() if value})
    return _from_vector(instance, ctx, vector, "ip", budget, {"ip_value": solution.value})


def solve_greedy(instance: Instance, budget: Optional[int] = None) -> SolveResult:
    """
    Place each unassigned student where the fewest assigned students would envy it

    Counts are taken against the base matching alone; ties go to the school
    earlier in the student's list.

    Args:
        instance: Instance
        budget: Sum budget k+

    Returns:
        SolveResult realized from the greedy vector
    """
    logger.info(f"Greedy on n={instance.n}, m={instance.m}, budget={budget}")
    ctx = student_optimal_stable(instance)
    choice = {}
    for u in ctx.unassigned:
        best_school, best_count = None, None
        for w in instance.preferences[u]:
            count = len(envious_assigned(instance, ctx, {u: w}))
            if best_count is None or count < best_count:
                best_school, best_count = w, count
        choice[u] = best_school
    return _from_vector(instance, ctx, AssignmentVector(choice), "greedy", budget, {})


def solve_special_cases(instance: Instance, budget: Optional[int] = None) -> Optional[SolveResult]:
    """
    Polynomial cases: at most one school per unassigned student, or priority lists of length at most two

    Args:
        instance: Instance
        budget: Sum budget k+

    Returns:
        SolveResult, or None when neither case applies
    """
    ctx = student_optimal_stable(instance)
    if ctx.delta_un <= 1:
        vector = AssignmentVector({u: instance.preferences[u][0] for u in ctx.unassigned})
        return _from_vector(instance, ctx, vector, "special", budget, {}, path="single-vector")

    if instance_stats(instance).delta_sc <= 2:
        schools_of = ctx.matching.as_list(instance.n)
        extra = [0] * instance.m
        for u in ctx.unassigned:
            w = instance.preferences[u][0]
            schools_of[u] = w
            extra[w] += 1
        increase = CapacityVector(tuple(extra))
        return build_result(instance, "minsum-sp", "special", ctx.s, increase,
                            Matching.from_list(schools_of), budget,
                            {"unassigned": ctx.s, "upper_bound": ctx.s, "achieved": ctx.s},
                            path="short-priorities")
    return None


def solve_minsum_sp(instance: Instance, method: str = "auto", budget: Optional[int] = None,
                    guard: Optional[int] = None, threads: Optional[int] = None) -> SolveResult:
    """
    Dispatch a MinSumSP method

    auto keeps a special-case result when its realized norm meets the lower
    bound s and runs exact search otherwise.
    """
    if method == "auto":
        special = solve_special_cases(instance, budget)
        if special is not None and special.objective == special.details["unassigned"]:
            special.path = f"special:{special.path}"
            return special
        result = solve_exact(instance, budget, guard=guard, threads=threads)
        result.path = "exact"
        return result
    if method == "exact":
        return solve_exact(instance, budget, guard=guard, threads=threads)
    if method == "formula":
        return solve_formula(instance, budget, guard=guard, threads=threads)
    if method == "ip":
        return solve_with_ip(instance, budget, guard=guard)
    if method == "lp-round":
        return solve_lp_round(instance, budget)
    if method == "greedy":
        return solve_greedy(instance, budget)
    if method == "special":
        special = solve_special_cases(instance, budget)
        if special is None:
            raise ValueError("no polynomial special case applies to this instance")
        return special
    raise ValueError(f"unknown MinSumSP method {method!r}")
