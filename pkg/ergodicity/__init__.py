from ergodicity.condition import ConditionK, condition_K, polynomial_constant
from ergodicity.moments import MomentReport, exp_moment, expected_hitting_times, moment_residual
from ergodicity.worst_case import abscissa, column_vertices, worst_case_exp_moment

__all__ = [
    "MomentReport", "ConditionK",
    "expected_hitting_times", "exp_moment", "moment_residual", "worst_case_exp_moment", "column_vertices",
    "abscissa", "condition_K", "polynomial_constant",
]
