"""
Однородный по времени случай: Y_t = u(X_t), Z ≡ 𝐮, где 𝐮 решает
f(e_x, u_x, 𝐮) + (A*𝐮)_x = 0 для x ∉ Ξ и u = φ на Ξ.
"""
import logging

import numpy as np
import scipy.linalg

from config import Config
from errors import DriverTimeDependent, NoConvergence
from solver.fields import HOMOGENEOUS, SolutionField
from solver.problem import HittingProblem

logger = logging.getLogger(__name__)

MIN_DAMPING = 2.0 ** -12


def homogeneous_residual(p: HittingProblem, u) -> np.ndarray:
    """
    Невязка f(e_x, u_x, 𝐮) + (A*𝐮)_x на живых состояниях (ноль на цели).
    """
    u = np.asarray(u, dtype=float)
    out = p.chain.q.T @ u + p.driver.field(0.0, u, p.live)
    out[p.target_list] = 0.0
    return out


def _assemble(p: HittingProblem, phi: np.ndarray, live_values: np.ndarray) -> np.ndarray:
    u = np.array(phi)
    u[p.live] = live_values
    return u


def _initial_guess(p: HittingProblem, phi: np.ndarray) -> np.ndarray:
    # Линейное решение с источником f(e_x, 0, 0)
    live, target = p.live, p.target_list
    at = p.chain.q.T
    source = p.driver.field(0.0, np.zeros(p.n), live)[live]
    rhs = -source - at[np.ix_(live, target)] @ phi[target]
    try:
        return scipy.linalg.solve(at[np.ix_(live, live)], rhs)
    except (np.linalg.LinAlgError, ValueError):
        logger.debug("Линейная начальная система вырождена, старт с нуля")
        return np.zeros(len(live))


def _newton(residual, x0: np.ndarray, tol: float, max_iter: int):
    """
    Демпфированный метод Ньютона с якобианом по конечным разностям.
    Возвращает (x, невязка, итерации, сошёлся ли).
    """
    x = np.array(x0)
    r = residual(x)
    norm = float(np.abs(r).max(initial=0.0))
    iterations = 0
    while norm >= tol and iterations < max_iter:
        iterations += 1
        jac = np.empty((len(x), len(x)))
        for k in range(len(x)):
            step = np.sqrt(np.finfo(float).eps) * max(1.0, abs(x[k]))
            shifted = np.array(x)
            shifted[k] += step
            jac[:, k] = (residual(shifted) - r) / step
        try:
            dx = scipy.linalg.solve(jac, -r)
        except (np.linalg.LinAlgError, ValueError):
            logger.debug("Вырожденный якобиан на итерации %d", iterations)
            return x, norm, iterations, False

        damping = 1.0
        while damping >= MIN_DAMPING:
            trial = x + damping * dx
            r_trial = residual(trial)
            trial_norm = float(np.abs(r_trial).max(initial=0.0))
            if np.isfinite(trial_norm) and trial_norm < norm:
                x, r, norm = trial, r_trial, trial_norm
                break
            damping /= 2
        else:
            return x, norm, iterations, norm < tol
    return x, norm, iterations, norm < tol


def _picard(p: HittingProblem, phi: np.ndarray, x0: np.ndarray, tol: float, max_iter: int):
    """
    u^{k+1}: (A*u^{k+1})_x = −f(e_x, u^k_x, u^k) на живых состояниях,
    с релаксацией, которая уменьшается, когда невязка растёт.
    """
    live, target = p.live, p.target_list
    at = p.chain.q.T
    lu_piv = scipy.linalg.lu_factor(at[np.ix_(live, live)])
    boundary = at[np.ix_(live, target)] @ phi[target]
    x = np.array(x0)
    norm = float(np.abs(homogeneous_residual(p, _assemble(p, phi, x))).max(initial=0.0))
    omega = 1.0
    for iteration in range(1, max_iter + 1):
        u = _assemble(p, phi, x)
        update = scipy.linalg.lu_solve(lu_piv, -p.driver.field(0.0, u, live)[live] - boundary)
        candidate = (1 - omega) * x + omega * update
        candidate_norm = float(np.abs(homogeneous_residual(p, _assemble(p, phi, candidate))).max(initial=0.0))
        if not np.isfinite(candidate_norm):
            return x, norm, iteration
        if candidate_norm > norm and omega > MIN_DAMPING:
            omega /= 2
        x, norm = candidate, candidate_norm
        if norm < tol:
            return x, norm, iteration
    return x, norm, max_iter


def solve_homogeneous(p: HittingProblem, tol: float = Config.RESIDUAL_TOL, max_iter: int = Config.MAX_NEWTON_ITER,
                      initial=None, picard_iter: int = Config.MAX_PICARD_ITER) -> SolutionField:
    """
    Решает алгебраическую систему однородной задачи.
    Сначала демпфированный Ньютон на живых координатах; если он застревает,
    итерации Пикара с неявным линейным шагом по поглощённой цепи.
    initial - начальное приближение на всех состояниях (значения на цели
    игнорируются).
    """
    if not p.time_homogeneous:
        raise DriverTimeDependent()
    phi = p.terminal.vector(0.0)
    live = p.live
    if not live:
        return SolutionField(HOMOGENEOUS, phi, method="trivial")

    def residual(values: np.ndarray) -> np.ndarray:
        return homogeneous_residual(p, _assemble(p, phi, values))[live]

    x0 = _initial_guess(p, phi) if initial is None else np.asarray(initial, dtype=float)[live]
    x, norm, iterations, converged = _newton(residual, x0, tol, max_iter)
    method = "newton"
    if not converged:
        logger.warning("Метод Ньютона остановился с невязкой %.3e, переход к итерациям Пикара", norm)
        try:
            x, norm, extra = _picard(p, phi, x, tol, picard_iter)
        except (np.linalg.LinAlgError, ValueError):
            raise NoConvergence(norm, iterations)
        iterations += extra
        method = "picard"

    u = _assemble(p, phi, x)
    u[p.target_list] = phi[p.target_list]
    check = float(np.abs(homogeneous_residual(p, u)).max(initial=0.0))
    if not np.isfinite(check) or check >= tol:
        raise NoConvergence(check, iterations)
    logger.info("Однородная задача решена (%s): невязка %.3e за %d итераций", method, check, iterations)
    return SolutionField(HOMOGENEOUS, u, residual=check, iterations=iterations, method=method)
