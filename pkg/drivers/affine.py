import numpy as np

from chain.rates import RateMatrix
from drivers.base import MarkovianDriver
from errors import DimensionMismatch


class AffineDriver(MarkovianDriver):
    """
    f(x, t, y, z) = z*(B − A)e_x + g_x(t) − r_x·y.

    b - матрица B (столбец x задаёт строку коэффициентов для состояния x),
    g - вектор или функция t → вектор, r - неотрицательные ставки дисконтирования.
    """
    kind = "affine"

    def __init__(self, a: RateMatrix, b: RateMatrix | None = None, g=None, r=None, beta_hat: float = 0.0,
                 name: str | None = None):
        self.a = a
        self.b = b if b is not None else a
        if self.b.n != a.n:
            raise DimensionMismatch(f"Размерности A ({a.n}) и B ({self.b.n}) не совпадают")
        self._g_fn = g if callable(g) else None
        self.g = None if callable(g) else (np.zeros(a.n) if g is None else np.asarray(g, dtype=float))
        self.r = np.zeros(a.n) if r is None else np.asarray(r, dtype=float)
        if self.r.shape != (a.n,) or (self.g is not None and self.g.shape != (a.n,)):
            raise DimensionMismatch("Векторы g и r должны иметь длину n")
        self._delta = self.b.q - a.q
        super().__init__(self._evaluate, a.n, c=float(max(self.r.max(initial=0.0), 0.0)), beta_hat=beta_hat,
                         monotone=bool(np.all(self.r >= 0)), time_dependent=self._g_fn is not None,
                         y_dependent=bool(np.any(self.r != 0)), name=name)

    def offset(self, t: float) -> np.ndarray:
        return np.asarray(self._g_fn(t), dtype=float) if self._g_fn is not None else self.g

    def _evaluate(self, x: int, t: float, y: float, z: np.ndarray) -> float:
        return float(z @ self._delta[:, x] + self.offset(t)[x] - self.r[x] * y)

    def exact_witness(self, x: int, t: float):
        return np.array(self.b.q[:, x])


def zero_driver(a: RateMatrix) -> AffineDriver:
    return AffineDriver(a, name="zero")


def constant_driver(a: RateMatrix, value: float) -> AffineDriver:
    return AffineDriver(a, g=np.full(a.n, float(value)), name="constant")


def measure_change_driver(a: RateMatrix, b: RateMatrix) -> AffineDriver:
    # z*(B − A)e_x: ожидания под B
    return AffineDriver(a, b=b, name="measure_change")


def discount_driver(a: RateMatrix, loss_rates) -> AffineDriver:
    return AffineDriver(a, r=loss_rates, name="discount")
