import logging
import math

import numpy as np

from chain.rates import RateMatrix, seminorm_sq
from drivers.balance import BalanceCertificate
from drivers.base import MarkovianDriver
from errors import InvalidArgument, NotCertified

logger = logging.getLogger(__name__)


class TruncatedDriver(MarkovianDriver):
    """
    f^{(n)}(x, t, y, z) = f(x, t, y^{(n)}, (z − z_x𝟙)^{(n)}), где y^{(n)} = (−n) ∨ y ∧ n.
    """
    kind = "truncated"

    def __init__(self, base: MarkovianDriver, level: float):
        if level <= 0:
            raise InvalidArgument(f"Уровень усечения должен быть положительным, получено {level}")
        self.base = base
        self.level = float(level)
        super().__init__(self._evaluate, base.n, c=base.c, beta_hat=base.beta_hat, monotone=base.monotone,
                         time_dependent=base.time_dependent, y_dependent=base.y_dependent,
                         name=f"{base.name}^({level:g})")

    def _evaluate(self, x: int, t: float, y: float, z: np.ndarray) -> float:
        n = self.level
        centred = np.clip(z - z[x], -n, n)
        return self.base(x, t, min(max(y, -n), n), centred)


def truncate_driver(d: MarkovianDriver, n: float) -> TruncatedDriver:
    return TruncatedDriver(d, n)


def lipschitz_constant(a: RateMatrix, gamma: float) -> float:
    """
    (Δf)² ≤ |x*Ax|·‖(D − I)Δz‖²_M, диагональ D − I лежит в [γ − 1, γ⁻¹ − 1],
    поэтому множитель равен max(γ⁻¹, (γ⁻¹ − 1)²).
    """
    factor = max(1.0 / gamma, (1.0 / gamma - 1.0) ** 2)
    return math.sqrt(a.max_exit_rate * factor)


def empirical_lipschitz(d: MarkovianDriver, a: RateMatrix, samples: int = 10_000, seed: int = 0,
                        states=None, scale: float = 1.0) -> float:
    """
    Выборочный sup |f(z) − f(z′)| / ‖z − z′‖_M.
    """
    rng = np.random.default_rng(seed)
    pool = list(range(a.n)) if states is None else [int(s) for s in states]
    worst = 0.0
    for _ in range(samples):
        x = int(pool[rng.integers(len(pool))])
        t = float(rng.uniform(0.0, 10.0))
        y = float(rng.normal(scale=scale))
        z = rng.normal(scale=scale, size=a.n)
        z_prime = rng.normal(scale=scale, size=a.n)
        norm = math.sqrt(seminorm_sq(a, x, z - z_prime))
        if norm < 1e-12:
            continue
        worst = max(worst, abs(d(x, t, y, z) - d(x, t, y, z_prime)) / norm)
    return worst


def lipschitz_bound(d: MarkovianDriver, a: RateMatrix, gamma: float,
                    certificate: BalanceCertificate | None = None, samples: int = 1000, seed: int = 0) -> float:
    """
    Константа Липшица драйвера по z в полунорме ‖·‖_M.
    Требует сертификат сбалансированности с уровнем не ниже gamma.
    """
    if certificate is None or not certificate.passed:
        raise NotCertified("Драйвер не сертифицирован как γ-сбалансированный")
    if certificate.gamma < gamma - 1e-12:
        raise NotCertified(f"Сертификат выдан для γ = {certificate.gamma}, запрошено γ = {gamma}")
    bound = lipschitz_constant(a, gamma)
    observed = empirical_lipschitz(d, a, samples=samples, seed=seed)
    if observed > bound * (1 + 1e-9):
        logger.warning("Выборочная константа Липшица %.6g превышает оценку %.6g", observed, bound)
    else:
        logger.debug("Константа Липшица %.6g (выборочно %.6g)", bound, observed)
    return bound
