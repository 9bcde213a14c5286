"""
Tests for the dense two-phase simplex
"""
import numpy as np
import pytest

from exceptions import LPSolverError
from lp_simplex import solve_lp


def test_inequality_optimum():
    solution = solve_lp([-1.0, -1.0], a_ub=[[1.0, 2.0], [3.0, 1.0]], b_ub=[4.0, 6.0])
    assert solution.x == pytest.approx([1.6, 1.2])
    assert solution.value == pytest.approx(-2.8)


def test_equality_with_redundant_row():
    solution = solve_lp([1.0, 0.0], a_eq=[[1.0, 1.0], [2.0, 2.0]], b_eq=[1.0, 2.0])
    assert solution.x == pytest.approx([0.0, 1.0])
    assert solution.value == pytest.approx(0.0)


def test_negative_right_hand_side():
    # x >= 2 written as -x <= -2
    solution = solve_lp([1.0, 1.0], a_ub=[[-1.0, 0.0]], b_ub=[-2.0])
    assert solution.x == pytest.approx([2.0, 0.0])


def test_mixed_constraints_residuals():
    a_ub = np.array([[-1.0, 0.0, 1.0], [0.0, -1.0, 1.0]])
    b_ub = np.zeros(2)
    a_eq = np.array([[0.0, 0.0, 1.0]])
    b_eq = np.ones(1)
    solution = solve_lp([1.0, 1.0, 0.0], a_ub, b_ub, a_eq, b_eq)
    assert solution.value == pytest.approx(2.0)
    assert np.max(a_ub @ solution.x - b_ub) <= 1e-9
    assert np.max(np.abs(a_eq @ solution.x - b_eq)) <= 1e-9


def test_infeasible():
    with pytest.raises(LPSolverError, match="infeasible"):
        solve_lp([1.0], a_ub=[[1.0]], b_ub=[-1.0])


def test_unbounded():
    with pytest.raises(LPSolverError, match="unbounded"):
        solve_lp([-1.0])
