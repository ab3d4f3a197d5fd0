"""
Построение K(t) = k(1 + t)^{1+β} и K̃(t) по наихудшему экспоненциальному моменту.

Для τ > t имеем 1 + τ ≤ (1 + t)(1 + (τ − t)^+), а (1 + s)^p ≤ C(p, β′)·e^{β′s}
с C(p, β′) = sup_s (1 + s)^p e^{−β′s}. Отсюда
E^Q[(1 + τ)^p | F_t] ≤ C(p, β′)·H·(1 + t)^p, где H = sup_x sup_Q E^Q[e^{β′τ}].
При |φ(t, x)| ≤ k_φ(1 + t^β) ≤ 2k_φ(1 + t)^β получаем
k = max(1, C·H, 2k_φ·C·H), C = C(1 + β, β′).
Для K̃ показатель p̃ = (1 + β)(1 + β̃) и k̃ = k^{1+β̃}·C(p̃, β′)·H.
"""
import logging
import math
from dataclasses import dataclass

from chain.rates import RateMatrix
from ergodicity.worst_case import abscissa, worst_case_exp_moment
from errors import InvalidArgument, NoFiniteExponent

logger = logging.getLogger(__name__)

MIN_EXPONENT = 1e-9


def polynomial_constant(p: float, beta_prime: float) -> float:
    """
    C(p, β′) = sup_{s ≥ 0} (1 + s)^p e^{−β′s}.
    Максимум в s* = p/β′ − 1 при p > β′, иначе в s = 0.
    """
    if p <= beta_prime:
        return 1.0
    return (p / beta_prime) ** p * math.exp(-(p - beta_prime))


@dataclass(frozen=True)
class ConditionK:
    k: float
    beta: float
    beta_tilde: float
    k_tilde: float
    beta_prime: float
    h_sup: float
    poly_constant: float
    gamma: float

    def K(self, t: float) -> float:
        return self.k * (1.0 + t) ** (1.0 + self.beta)

    def K_tilde(self, t: float) -> float:
        return self.k_tilde * (1.0 + t) ** ((1.0 + self.beta) * (1.0 + self.beta_tilde))

    def to_dict(self) -> dict:
        return {"k": self.k, "beta": self.beta, "beta_tilde": self.beta_tilde, "k_tilde": self.k_tilde,
                "beta_prime": self.beta_prime, "h_sup": self.h_sup, "poly_constant": self.poly_constant,
                "gamma": self.gamma}


def condition_K(a: RateMatrix, gamma: float, target, beta: float, k_phi: float = 1.0,
                beta_tilde: float = 0.0) -> ConditionK:
    """
    β′ - половина наихудшей границы сходимости; при её отсутствии
    выбрасывается NoFiniteExponent.
    """
    if beta <= 0:
        raise InvalidArgument(f"beta должно быть положительным, получено {beta}")
    edge = abscissa(a, target, gamma)
    if edge <= MIN_EXPONENT:
        raise NoFiniteExponent()
    beta_prime = 0.5 * edge if math.isfinite(edge) else 1.0
    report = worst_case_exp_moment(a, gamma, target, beta_prime)
    if not report.finite:
        raise NoFiniteExponent()
    h_sup = report.sup()

    constant = polynomial_constant(1.0 + beta, beta_prime)
    k = max(1.0, constant * h_sup, 2.0 * k_phi * constant * h_sup)
    p_tilde = (1.0 + beta) * (1.0 + beta_tilde)
    k_tilde = k ** (1.0 + beta_tilde) * polynomial_constant(p_tilde, beta_prime) * h_sup
    logger.info("K(t) = %.4g(1 + t)^%.3g; β′ = %.4g, H = %.4g", k, 1.0 + beta, beta_prime, h_sup)
    return ConditionK(k=k, beta=beta, beta_tilde=beta_tilde, k_tilde=k_tilde, beta_prime=beta_prime,
                      h_sup=h_sup, poly_constant=constant, gamma=gamma)
