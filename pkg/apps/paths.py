"""
Стохастические кратчайшие пути: случайное блуждание по графу с расстояниями,
управление - допустимые ускорения отдельных рёбер.
"""
import logging
from dataclasses import dataclass, field, replace

import numpy as np

from builders.matrices import MatrixBuilder
from chain.rates import RateMatrix
from drivers.controls import ControlSet
from drivers.hamiltonian import hamiltonian_inf
from errors import DimensionMismatch
from solver.backward import solve_backward_grid, steps_for
from solver.fields import SolutionField
from solver.homogeneous import solve_homogeneous
from solver.problem import HittingProblem, Terminal, constant_terminal

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = 10.0


@dataclass(frozen=True, eq=False)
class GraphSpec:
    """
    distances[i][j] - длина ребра i → j (inf - ребра нет).
    speedups - пары (метка, множители), множитель factors[j][i] ускоряет
    ребро i → j; немасштабированное блуждание всегда допустимо.
    """
    nodes: tuple[str, ...]
    distances: np.ndarray
    target: int
    speedups: tuple[tuple[str, np.ndarray], ...] = field(default=())

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=float)
        n = len(self.nodes)
        if d.shape != (n, n):
            raise DimensionMismatch(f"Матрица расстояний формы {d.shape}, а узлов {n}")
        edges = np.isfinite(d) & ~np.eye(n, dtype=bool)
        if np.any(d[edges] <= 0):
            raise DimensionMismatch("Расстояния должны быть положительными")
        if not 0 <= self.target < n:
            raise DimensionMismatch(f"Цель {self.target} вне списка узлов")
        object.__setattr__(self, "distances", d)

    @property
    def n(self) -> int:
        return len(self.nodes)

    def walk_matrix(self) -> RateMatrix:
        walk = MatrixBuilder.walk_from_distances(self.distances)
        # Цель поглощающая
        return MatrixBuilder.absorbed(walk, [self.target])

    def control_set(self) -> ControlSet:
        a = self.walk_matrix()
        labels = ["walk"]
        matrices = [a]
        for label, factors in self.speedups:
            labels.append(label)
            matrices.append(MatrixBuilder.absorbed(MatrixBuilder.scaled_edges(a, factors), [self.target]))
        live = [x for x in range(self.n) if x != self.target]
        return ControlSet.from_table(labels, matrices, a, columns=live)


def _time_terminal(n: int) -> Terminal:
    # ξ = τ: φ(t, x) = t
    return Terminal(lambda t, _x: t, n, time_dependent=True)


def shortest_path_times(g: GraphSpec, horizon: float = DEFAULT_HORIZON,
                        steps: int | None = None) -> tuple[SolutionField, SolutionField]:
    """
    remaining - однородное решение с драйвером inf_u{z*(A^u − A)x} + 1 и φ = 0;
    full - решение на сетке для ξ = τ с драйвером без +1 и u(horizon) = horizon + remaining.
    """
    cs = g.control_set()
    a = cs.reference
    target = frozenset([g.target])

    remaining_driver = hamiltonian_inf(cs, a, offset=np.ones(g.n))
    remaining_problem = HittingProblem(a, target, constant_terminal(np.zeros(g.n)), remaining_driver,
                                       c=1.0)
    remaining = solve_homogeneous(remaining_problem)
    policy = remaining_driver.policy(0.0, remaining.u, remaining_problem.live)
    remaining = replace(remaining, metadata={
        "policy": {g.nodes[x]: cs.labels[u] for x, u in zip(remaining_problem.live, policy)}})

    full_problem = HittingProblem(a, target, _time_terminal(g.n), hamiltonian_inf(cs, a))
    steps = steps or steps_for(full_problem, horizon, refine=2)
    full = solve_backward_grid(full_problem, horizon, steps, terminal_values=horizon + remaining.u)
    logger.info("Кратчайшие пути: остаток %s, расхождение тождества %.2e",
                np.array2string(remaining.u, precision=4), time_identity_gap(full, remaining))
    return full, remaining


def time_identity_gap(full: SolutionField, remaining: SolutionField) -> float:
    """
    max |Y_t − (Y′_t + t)| по узлам сетки.
    """
    return float(max(np.abs(u - (remaining.u + t)).max() for t, u in full.grid()))
