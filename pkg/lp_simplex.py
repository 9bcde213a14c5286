"""
Dense two-phase simplex with Bland's rule for small linear programs
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from config import LOG_LEVEL, LP_CONFIG
from exceptions import LPSolverError

# Set up logging
logging.basicConfig(level=LOG_LEVEL)
logger = logging.getLogger(__name__)


@dataclass
class LpSolution:
    x: np.ndarray
    value: float
    iterations: int


class SimplexTableau:
    """Tableau in canonical form: basis columns are unit vectors, last column is the right-hand side"""

    def __init__(self, matrix: np.ndarray, basis: List[int], tolerance: float, max_iterations: int):
        self.matrix = matrix
        self.basis = basis
        self.tolerance = tolerance
        self.max_iterations = max_iterations
        self.objective = np.zeros(matrix.shape[1])
        self.iterations = 0

    def set_costs(self, costs: np.ndarray) -> None:
        """Objective row of reduced costs for the given cost vector"""
        row = np.zeros(self.matrix.shape[1])
        row[:len(costs)] = costs
        for i, column in enumerate(self.basis):
            row -= row[column] * self.matrix[i]
        self.objective = row

    def pivot(self, row: int, column: int) -> None:
        self.matrix[row] /= self.matrix[row, column]
        for i in range(self.matrix.shape[0]):
            if i != row and self.matrix[i, column] != 0.0:
                self.matrix[i] -= self.matrix[i, column] * self.matrix[row]
        self.objective -= self.objective[column] * self.matrix[row]
        self.basis[row] = column
        self.iterations += 1

    def optimize(self, allowed: np.ndarray) -> None:
        """
        Primal simplex with Bland's rule

        Args:
            allowed: Boolean mask of columns that may enter the basis
        """
        tol = self.tolerance
        while True:
            if self.iterations >= self.max_iterations:
                raise LPSolverError(f"simplex did not converge in {self.max_iterations} pivots")
            candidates = np.flatnonzero(allowed & (self.objective[:-1] < -tol))
            if candidates.size == 0:
                return
            column = int(candidates[0])
            entries = self.matrix[:, column]
            best_row, best_ratio = None, None
            for i in np.flatnonzero(entries > tol):
                ratio = self.matrix[i, -1] / entries[i]
                if (best_row is None or ratio < best_ratio - tol
                        or (abs(ratio - best_ratio) <= tol and self.basis[i] < self.basis[best_row])):
                    best_row, best_ratio = int(i), ratio
            if best_row is None:
                raise LPSolverError("linear program is unbounded")
            self.pivot(best_row, column)

    def value(self) -> float:
        return -self.objective[-1]


def solve_lp(costs: np.ndarray,
             a_ub: Optional[np.ndarray] = None,
             b_ub: Optional[np.ndarray] = None,
             a_eq: Optional[np.ndarray] = None,
             b_eq: Optional[np.ndarray] = None,
             tolerance: Optional[float] = None) -> LpSolution:
    """
    Minimize costs @ x subject to a_ub x <= b_ub, a_eq x = b_eq, x >= 0

    Args:
        costs: Objective coefficients
        a_ub, b_ub: Inequality rows
        a_eq, b_eq: Equality rows
        tolerance: Pivot and feasibility tolerance

    Returns:
        LpSolution with an optimal basic solution
    """
    tolerance = LP_CONFIG["tolerance"] if tolerance is None else tolerance
    costs = np.asarray(costs, dtype=float)
    n_vars = costs.size
    a_ub = np.zeros((0, n_vars)) if a_ub is None else np.asarray(a_ub, dtype=float).reshape(-1, n_vars)
    b_ub = np.zeros(0) if b_ub is None else np.asarray(b_ub, dtype=float)
    a_eq = np.zeros((0, n_vars)) if a_eq is None else np.asarray(a_eq, dtype=float).reshape(-1, n_vars)
    b_eq = np.zeros(0) if b_eq is None else np.asarray(b_eq, dtype=float)

    n_ub, n_eq = a_ub.shape[0], a_eq.shape[0]
    rows = n_ub + n_eq
    # Columns: originals, one slack per inequality, one artificial per row that needs one
    needs_artificial = [b_ub[i] < 0 for i in range(n_ub)] + [True] * n_eq
    n_art = sum(needs_artificial)
    width = n_vars + n_ub + n_art
    matrix = np.zeros((rows, width + 1))
    matrix[:n_ub, :n_vars] = a_ub
    matrix[:n_ub, n_vars:n_vars + n_ub] = np.eye(n_ub)
    matrix[:n_ub, -1] = b_ub
    matrix[n_ub:, :n_vars] = a_eq
    matrix[n_ub:, -1] = b_eq
    for i in range(rows):
        if matrix[i, -1] < 0:
            matrix[i] *= -1.0

    basis = []
    artificial = n_vars + n_ub
    for i in range(rows):
        if needs_artificial[i]:
            matrix[i, artificial] = 1.0
            basis.append(artificial)
            artificial += 1
        else:
            basis.append(n_vars + i)

    tableau = SimplexTableau(matrix, basis, tolerance, LP_CONFIG["max_iterations"])
    structural = np.zeros(width, dtype=bool)
    structural[:n_vars + n_ub] = True

    if n_art:
        phase_one = np.zeros(width)
        phase_one[n_vars + n_ub:] = 1.0
        tableau.set_costs(phase_one)
        tableau.optimize(np.ones(width, dtype=bool))
        if tableau.value() > tolerance * max(1, rows):
            raise LPSolverError("linear program is infeasible")
        _drive_out_artificials(tableau, n_vars + n_ub)

    tableau.set_costs(costs)
    tableau.optimize(structural)

    solution = np.zeros(width)
    for i, column in enumerate(tableau.basis):
        solution[column] = tableau.matrix[i, -1]
    x = np.clip(solution[:n_vars], 0.0, None)
    logger.debug(f"Simplex finished after {tableau.iterations} pivots")
    return LpSolution(x=x, value=float(costs @ x), iterations=tableau.iterations)


def _drive_out_artificials(tableau: SimplexTableau, first_artificial: int) -> None:
    """Pivot zero-level artificials out of the basis, dropping redundant rows"""
    row = 0
    while row < len(tableau.basis):
        if tableau.basis[row] < first_artificial:
            row += 1
            continue
        entries = np.abs(tableau.matrix[row, :first_artificial])
        candidates = np.flatnonzero(entries > tableau.tolerance)
        if candidates.size:
            tableau.pivot(row, int(candidates[0]))
            row += 1
        else:
            tableau.matrix = np.delete(tableau.matrix, row, axis=0)
            del tableau.basis[row]
