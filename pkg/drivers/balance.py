"""
Выборочная проверка γ-сбалансированности драйвера.

Для каждой случайной точки (x, t, y, z, z′) ищется вектор λ = D·A e_x
(D диагональна, отношения в [γ, γ⁻¹], 𝟙*λ = 0) с
f(x, t, y, z) − f(x, t, y, z′) = (z − z′)*(λ − A e_x).
Успех - свидетельство, а не доказательство; провал с контрпримером окончателен.
"""
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from chain.rates import RateMatrix
from drivers.base import MarkovianDriver
from errors import InvalidArgument

logger = logging.getLogger(__name__)

RATIO_SLACK = 1e-9
RESIDUAL_SLACK = 1e-9


@dataclass
class WitnessSample:
    x: int
    t: float
    z: np.ndarray
    z_prime: np.ndarray
    lam: np.ndarray


@dataclass
class BalanceCertificate:
    gamma: float
    witness_samples: list[WitnessSample] = field(default_factory=list)
    verdict: bool = True
    counterexample: dict | None = None

    @property
    def passed(self) -> bool:
        return self.verdict


def ratios(a: RateMatrix, x: int, lam: np.ndarray) -> np.ndarray:
    """
    e_i^*λ / e_i^*A e_x с соглашением 0/0 := 1.
    """
    col = a.q[:, x]
    out = np.ones(a.n)
    nonzero = col != 0
    out[nonzero] = lam[nonzero] / col[nonzero]
    out[~nonzero & (lam != 0)] = np.inf
    return out


def _identity_residual(a: RateMatrix, x: int, v: np.ndarray, lam: np.ndarray, delta: float) -> float:
    return abs(float(v @ (lam - a.q[:, x])) - delta)


def _witness_ok(a: RateMatrix, x: int, v, lam, delta, gamma) -> bool:
    scale = max(1.0, abs(delta))
    r = ratios(a, x, lam)
    return (abs(lam.sum()) <= RESIDUAL_SLACK * max(1.0, np.abs(lam).max())
            and _identity_residual(a, x, v, lam, delta) <= RESIDUAL_SLACK * scale
            and bool(np.all(r >= gamma - RATIO_SLACK)) and bool(np.all(r <= 1.0 / gamma + RATIO_SLACK)))


def minimal_witness(a: RateMatrix, x: int, v: np.ndarray, delta: float, gamma: float):
    """
    λ с наименьшим отклонением отношений от 1, удовлетворяющий тождеству
    приращений. Возвращает None, если таких λ нет.

    В координатах κ_j = λ_j/q_jx − 1 (j ≠ x, q_jx > 0) условие имеет вид
    w·κ = Δ с w_j = (v_j − v_x)q_jx и γ − 1 ≤ κ_j ≤ γ⁻¹ − 1; проекция нуля
    на это множество равна clip(μw) при скаляре μ, найденном монотонным
    одномерным поиском.
    """
    col = a.q[:, x]
    reach = [j for j in range(a.n) if j != x and col[j] > 0]
    lo, hi = gamma - 1.0, 1.0 / gamma - 1.0
    w = np.array([(v[j] - v[x]) * col[j] for j in reach])
    scale = max(1.0, abs(delta))

    if len(w) == 0 or np.all(np.abs(w) <= 1e-300):
        kappa = np.zeros(len(reach))
        if abs(delta) > RESIDUAL_SLACK * scale:
            return None
    else:
        s_min = float(np.sum(np.minimum(w * lo, w * hi)))
        s_max = float(np.sum(np.maximum(w * lo, w * hi)))
        if delta < s_min - RESIDUAL_SLACK * scale or delta > s_max + RESIDUAL_SLACK * scale:
            return None

        def gap(mu: float) -> float:
            return float(w @ np.clip(mu * w, lo, hi)) - delta

        bound = 2.0 * max(abs(lo), abs(hi)) / np.min(np.abs(w[np.abs(w) > 0]))
        g_lo, g_hi = gap(-bound), gap(bound)
        if g_lo >= 0:
            mu = -bound
        elif g_hi <= 0:
            mu = bound
        else:
            mu = brentq(gap, -bound, bound, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
        kappa = np.clip(mu * w, lo, hi)

    lam = np.zeros(a.n)
    for k, j in enumerate(reach):
        lam[j] = (1.0 + kappa[k]) * col[j]
    lam[x] = -lam.sum()
    return lam


def check_balanced(d: MarkovianDriver, a: RateMatrix, gamma: float, samples: int = 1000, seed: int = 0,
                   states=None, scale: float = 1.0, keep: int = 20) -> BalanceCertificate:
    """
    Проверяет γ-сбалансированность на samples случайных точках.
    states ограничивает состояния x, в которых берутся точки; keep - сколько
    свидетелей сохранить в сертификате.
    """
    if not 0 < gamma <= 1:
        raise InvalidArgument(f"gamma должно лежать в (0, 1], получено {gamma}")
    rng = np.random.default_rng(seed)
    pool = list(range(a.n)) if states is None else [int(s) for s in states]
    cert = BalanceCertificate(gamma=gamma)

    for _ in range(samples):
        x = int(pool[rng.integers(len(pool))])
        t = float(rng.uniform(0.0, 10.0))
        magnitude = scale * 10.0 ** rng.uniform(-1.0, 1.0)
        y = float(rng.normal(scale=magnitude))
        z = rng.normal(scale=magnitude, size=a.n)
        z_prime = rng.normal(scale=magnitude, size=a.n)
        alpha = float(rng.normal(scale=magnitude))

        base = d(x, t, y, z)
        shifted = d(x, t, y, z + alpha)
        if abs(shifted - base) > RESIDUAL_SLACK * max(1.0, abs(base)):
            cert.verdict = False
            cert.counterexample = {"reason": "shift", "x": x, "t": t, "y": y, "z": z.tolist(),
                                   "alpha": alpha, "defect": abs(shifted - base)}
            break

        delta = base - d(x, t, y, z_prime)
        v = z - z_prime
        lam = d.exact_witness(x, t)
        if lam is None or not _witness_ok(a, x, v, lam, delta, gamma):
            lam = minimal_witness(a, x, v, delta, gamma)
        if lam is None or not _witness_ok(a, x, v, lam, delta, gamma):
            cert.verdict = False
            cert.counterexample = {"reason": "ratio", "x": x, "t": t, "y": y, "z": z.tolist(),
                                   "z_prime": z_prime.tolist(), "increment": delta}
            break
        if len(cert.witness_samples) < keep:
            cert.witness_samples.append(WitnessSample(x, t, z, z_prime, lam))

    if cert.verdict:
        logger.debug("Драйвер %s γ-сбалансирован на %d точках (γ = %.4f)", d.name, samples, gamma)
    else:
        logger.info("Драйвер %s не прошёл проверку сбалансированности: %s", d.name, cert.counterexample["reason"])
    return cert
