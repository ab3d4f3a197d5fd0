from solver.backward import rk4_step, solve_backward_grid, stability_bound, steps_for
from solver.comparison import ComparisonReport, check_comparison
from solver.fields import HOMOGENEOUS, TIME_GRID, SolutionField
from solver.growth import GrowthReport, bounded_regime_bound, growth_bound_check
from solver.homogeneous import homogeneous_residual, solve_homogeneous
from solver.problem import HittingProblem, Terminal, constant_terminal, indicator_terminal, polynomial_terminal
from solver.truncation import TruncationDiagnostics, truncation_sequence

__all__ = [
    "HittingProblem", "Terminal", "SolutionField", "TruncationDiagnostics", "ComparisonReport", "GrowthReport",
    "HOMOGENEOUS", "TIME_GRID",
    "constant_terminal", "polynomial_terminal", "indicator_terminal",
    "solve_homogeneous", "homogeneous_residual", "solve_backward_grid", "rk4_step", "stability_bound",
    "steps_for", "truncation_sequence", "check_comparison", "growth_bound_check", "bounded_regime_bound",
]
