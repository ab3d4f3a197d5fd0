"""
Марковские драйверы BSDE: f(ω, t, y, z) = f̃(X_{t−}, t, y, z).
"""
import logging
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

DriverFn = Callable[[int, float, float, np.ndarray], float]


class MarkovianDriver:
    """
    Вычислимый драйвер (x, t, y, z) → f. Метаданные:
    c и beta_hat - константы роста |f(t, 0, 0)| ≤ c(1 + t^beta_hat) и
    монотонности (f(y) − f(y′))/(y − y′) ∈ [−c, 0];
    monotone - объявлена ли монотонность по y;
    time_dependent, y_dependent - от чего драйвер зависит на самом деле.
    """
    kind = "custom"

    def __init__(self, fn: DriverFn, n: int, *, c: float = 0.0, beta_hat: float = 0.0,
                 monotone: bool = True, time_dependent: bool = False, y_dependent: bool = False,
                 name: str | None = None):
        self._fn = fn
        self.n = n
        self.c = float(c)
        self.beta_hat = float(beta_hat)
        self.monotone = monotone
        self.time_dependent = time_dependent
        self.y_dependent = y_dependent
        self.name = name or self.kind

    def __call__(self, x: int, t: float, y: float, z) -> float:
        return float(self._fn(int(x), float(t), float(y), np.asarray(z, dtype=float)))

    def __repr__(self):
        return f"{type(self).__name__}(name={self.name!r}, n={self.n})"

    def field(self, t: float, u, states=None) -> np.ndarray:
        """
        Вектор f(e_i, t, u_i, u) по состояниям states (остальные компоненты 0).
        """
        u = np.asarray(u, dtype=float)
        out = np.zeros(self.n)
        for i in (range(self.n) if states is None else states):
            out[i] = self(i, t, u[i], u)
        return out

    def exact_witness(self, x: int, t: float):
        """
        Точный вектор λ из определения сбалансированности, если он известен
        в замкнутой форме (аффинные драйверы). Иначе None.
        """
        return None

    def y_ratio(self, x: int, t: float, y: float, y2: float, z) -> float:
        """
        Приращённое отношение r = −(f(y) − f(y′))/(y − y′).
        """
        return -(self(x, t, y, z) - self(x, t, y2, z)) / (y - y2)

    def shift_invariance_defect(self, samples: int = 200, seed: int = 0, scale: float = 1.0) -> float:
        """
        max |f(x, t, y, z + α𝟙) − f(x, t, y, z)| по случайным точкам.
        """
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(samples):
            x = int(rng.integers(self.n))
            t = float(rng.uniform(0.0, 10.0))
            y = float(rng.normal(scale=scale))
            z = rng.normal(scale=scale, size=self.n)
            alpha = float(rng.normal(scale=10.0 * scale))
            worst = max(worst, abs(self(x, t, y, z + alpha) - self(x, t, y, z)))
        return worst

    def monotonicity_violations(self, samples: int = 200, seed: int = 0, scale: float = 1.0,
                                slack: float = 1e-9) -> list[dict]:
        """
        Точки, где r = −Δf/Δy выходит из [0, c].
        """
        rng = np.random.default_rng(seed)
        bad = []
        for _ in range(samples):
            x = int(rng.integers(self.n))
            t = float(rng.uniform(0.0, 10.0))
            y, y2 = rng.normal(scale=scale, size=2)
            if abs(y - y2) < 1e-8:
                continue
            z = rng.normal(scale=scale, size=self.n)
            r = self.y_ratio(x, t, y, y2, z)
            if r < -slack or r > self.c + slack:
                bad.append({"x": x, "t": t, "y": float(y), "y2": float(y2), "ratio": r})
        return bad
