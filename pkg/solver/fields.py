from dataclasses import dataclass, field

import numpy as np

HOMOGENEOUS = "homogeneous"
TIME_GRID = "time_grid"


@dataclass(frozen=True, eq=False)
class SolutionField:
    """
    Решение Y_t = u(t, X_t), e_i^*Z_t = u(t, e_i).
    В режиме homogeneous u - вектор длины n, в режиме time_grid - массив
    (len(times), n) значений на узлах сетки.
    """
    mode: str
    u: np.ndarray
    residual: float = 0.0
    iterations: int = 0
    times: np.ndarray | None = None
    method: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        u = np.array(self.u, dtype=float)
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def n(self) -> int:
        return self.u.shape[-1]

    @property
    def z(self) -> np.ndarray:
        # Z постоянен и совпадает с u для однородных задач
        return self.initial

    @property
    def initial(self) -> np.ndarray:
        """
        u(0, ·).
        """
        return self.u if self.mode == HOMOGENEOUS else self.u[0]

    def value_at(self, t: float) -> np.ndarray:
        """
        u(t, ·); между узлами сетки - линейная интерполяция.
        """
        if self.mode == HOMOGENEOUS:
            return np.array(self.u)
        return np.array([np.interp(t, self.times, self.u[:, x]) for x in range(self.n)])

    def grid(self):
        """
        Пары (t, u(t)) по всем узлам; для однородного решения один узел t = 0.
        """
        if self.mode == HOMOGENEOUS:
            return [(0.0, self.u)]
        return list(zip(self.times, self.u))

    def sup_abs(self) -> float:
        return float(np.abs(self.u).max(initial=0.0))

    def header(self) -> list[str]:
        return ["state", "u"] if self.mode == HOMOGENEOUS else ["t", "state", "u"]

    def rows(self) -> list[tuple]:
        if self.mode == HOMOGENEOUS:
            return [(x, float(v)) for x, v in enumerate(self.u)]
        return [(float(t), x, float(v)) for t, row in zip(self.times, self.u) for x, v in enumerate(row)]
