import numpy as np

from chain.rates import RateMatrix, validate_rate_matrix


def _with_diagonal(off: np.ndarray) -> np.ndarray:
    off = np.array(off, dtype=float)
    np.fill_diagonal(off, 0.0)
    return off - np.diag(off.sum(axis=0))


class MatrixBuilder:
    @staticmethod
    def from_off_diagonal(off, state_names=None) -> RateMatrix:
        """
        Матрица интенсивностей по внедиагональным элементам (соглашение столбцов),
        диагональ дополняется до нулевых сумм столбцов.
        """
        return validate_rate_matrix(_with_diagonal(off), state_names)

    @staticmethod
    def two_state(rate_01: float, rate_10: float = 0.0) -> RateMatrix:
        off = np.zeros((2, 2))
        off[1, 0] = rate_01
        off[0, 1] = rate_10
        return MatrixBuilder.from_off_diagonal(off)

    @staticmethod
    def birth_chain(n: int, rate: float = 1.0, death: float = 0.0) -> RateMatrix:
        """
        Цепь 0 → 1 → ... → n−1 с интенсивностью rate (и death назад).
        Последнее состояние поглощающее.
        """
        off = np.zeros((n, n))
        for i in range(n - 1):
            off[i + 1, i] = rate
            if i > 0:
                off[i - 1, i] = death
        return MatrixBuilder.from_off_diagonal(off)

    @staticmethod
    def cycle(n: int, rate: float = 1.0) -> RateMatrix:
        off = np.zeros((n, n))
        for i in range(n):
            off[(i + 1) % n, i] = rate
        return MatrixBuilder.from_off_diagonal(off)

    @staticmethod
    def path_graph(n: int, rate: float = 1.0) -> RateMatrix:
        # Симметричное блуждание по отрезку
        off = np.zeros((n, n))
        for i in range(n - 1):
            off[i + 1, i] = rate
            off[i, i + 1] = rate
        return MatrixBuilder.from_off_diagonal(off)

    @staticmethod
    def from_conductances(w) -> RateMatrix:
        """
        e_j^* A e_i = w_ij при i ≠ j, e_i^* A e_i = −Σ_j w_ij.
        """
        w = np.array(w, dtype=float)
        return MatrixBuilder.from_off_diagonal(w.T)

    @staticmethod
    def walk_from_distances(distances) -> RateMatrix:
        """
        Случайное блуждание по графу с расстояниями D[i][j] (ребро i → j,
        np.inf или 0 - ребра нет): интенсивность перехода i → j равна
        (1/D_ij) / Σ_k (1/D_ik), полная интенсивность выхода равна 1.
        """
        d = np.array(distances, dtype=float)
        inverse = np.zeros_like(d)
        edges = np.isfinite(d) & (d > 0)
        inverse[edges] = 1.0 / d[edges]
        np.fill_diagonal(inverse, 0.0)
        totals = inverse.sum(axis=1)
        weights = np.divide(inverse, totals[:, None], out=np.zeros_like(inverse), where=totals[:, None] > 0)
        return MatrixBuilder.from_off_diagonal(weights.T)

    @staticmethod
    def absorbed(a: RateMatrix, target) -> RateMatrix:
        """
        Â: Âx = Ax для x вне цели и Âx = 0 на цели.
        """
        q = np.array(a.q)
        for x in target:
            q[:, int(x)] = 0.0
        return validate_rate_matrix(q, a.state_names or None)

    @staticmethod
    def scaled_edges(a: RateMatrix, factors) -> RateMatrix:
        """
        Умножает внедиагональные интенсивности на factors (та же раскладка, что и q).
        """
        off = np.array(a.q) * np.asarray(factors, dtype=float)
        return MatrixBuilder.from_off_diagonal(off, a.state_names or None)

    @staticmethod
    def random(n: int, rng: np.random.Generator, density: float = 0.6, low: float = 0.5,
               high: float = 2.0, absorbing=()) -> RateMatrix:
        """
        Случайная неприводимая матрица: цикл 0 → 1 → ... → 0 как каркас плюс
        случайные рёбра. Столбцы absorbing обнуляются.
        """
        off = np.where(rng.random((n, n)) < density, rng.uniform(low, high, (n, n)), 0.0)
        for i in range(n):
            if off[(i + 1) % n, i] == 0.0:
                off[(i + 1) % n, i] = rng.uniform(low, high)
        for x in absorbing:
            off[:, int(x)] = 0.0
        return MatrixBuilder.from_off_diagonal(off)

    @staticmethod
    def random_in_box(a: RateMatrix, gamma: float, rng: np.random.Generator) -> RateMatrix:
        """
        Случайная B с γ·a_jx ≤ b_jx ≤ a_jx/γ для всех j ≠ x (элемент семейства Q_γ).
        """
        lo = gamma * np.array(a.q)
        hi = np.array(a.q) / gamma
        off = lo + rng.random(a.q.shape) * (hi - lo)
        return MatrixBuilder.from_off_diagonal(off)
