"""
Caustic condition written as two polynomial-type equations in theta = cos(phi).

With gamma(k) the antisymmetric coefficients (k = -m..m), C(j) = cos_multiple(j, theta)
and S(j) = sin_multiple(j, theta):

    f1 = sigma sum_{k,l} gamma(k) gamma(l) [k^2 S(k+l) - k l C(k+l)]
         + 2 c sum_{k=1}^{m} k^2 gamma_k S(k)
    f2 = sum_{k,l} gamma(k) gamma(l) [C(k+l) + k l S(k+l)]

A caustic requires f1 = f2 = 0 at the same theta.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.optimize

from lib.caustic_algebra.chebyshev import check_theta, first_kind_table, second_kind_table
from lib.errors import DomainError

logger = logging.getLogger(__name__)

THETA_SAMPLES = 4096
JOINT_TOL = 1e-8


@dataclass(frozen=True)
class CausticPolynomialSystem:
    coeffs: object
    sigma: float
    c: float = 1.0
    theta_samples: int = THETA_SAMPLES

    def __post_init__(self):
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if self.c == 0 or not math.isfinite(self.c):
            raise DomainError(f"advection speed c must be finite and nonzero, got {self.c}")
        if self.theta_samples < 2:
            raise DomainError(f"theta scan needs at least 2 samples, got {self.theta_samples}")

    @property
    def theta_grid(self):
        return np.linspace(-1.0, 1.0, int(self.theta_samples))


@dataclass(frozen=True)
class JointRoot:
    theta_star: float
    phi_star: float
    f1: float
    f2: float


@dataclass(frozen=True)
class F1F2Curves:
    theta: np.ndarray
    f1: np.ndarray
    f2: np.ndarray


def _multiple_tables(theta, m):
    """C(j), S(j) for j = -2m..2m, stacked along axis 0 (row j + 2m)."""
    n = 2 * m
    cos_pos = first_kind_table(theta, n)
    sin_pos = np.zeros_like(cos_pos)
    if n >= 1:
        root = np.sqrt((1.0 - theta) * (1.0 + theta))
        sin_pos[1:] = root * second_kind_table(theta, n - 1)
    cos_all = np.concatenate([cos_pos[:0:-1], cos_pos])
    sin_all = np.concatenate([-sin_pos[:0:-1], sin_pos])
    return cos_all, sin_all


def _pair_terms(system, theta):
    coeffs = system.coeffs
    m = coeffs.m
    k = coeffs.offsets
    g = coeffs.full()
    cos_all, sin_all = _multiple_tables(theta, m)
    idx = (k[:, None] + k[None, :]) + 2 * m
    gg = np.outer(g, g)
    kk = np.outer(k, k)
    C = cos_all[idx]
    S = sin_all[idx]
    return k, g, gg, kk, C, S, sin_all


def _broadcast(weights, theta):
    return weights.reshape(weights.shape + (1,) * theta.ndim)


def f1(system, theta):
    """First caustic function of theta in [-1, 1]; scalar or array."""
    theta = check_theta(theta)
    k, g, gg, kk, C, S, sin_all = _pair_terms(system, theta)
    weights_s = _broadcast(gg * (k ** 2)[:, None], theta)
    weights_c = _broadcast(gg * kk, theta)
    double_sum = np.sum(weights_s * S - weights_c * C, axis=(0, 1))
    m = system.coeffs.m
    pos = system.coeffs.positive_offsets
    single = np.tensordot(pos ** 2 * np.asarray(system.coeffs.gamma), sin_all[pos + 2 * m], axes=1)
    value = system.sigma * double_sum + 2.0 * system.c * single
    return value.item() if value.ndim == 0 else value


def f2(system, theta):
    """Second caustic function of theta in [-1, 1]; scalar or array."""
    theta = check_theta(theta)
    _, _, gg, kk, C, S, _ = _pair_terms(system, theta)
    value = np.sum(_broadcast(gg, theta) * (C + _broadcast(kk, theta) * S), axis=(0, 1))
    return value.item() if value.ndim == 0 else value


def f1_reported_three_point(sigma, gamma1):
    """f1(1) as evaluated in the worked 3-point example: -2 sigma (gamma1^2 - gamma1^2)."""
    return -2.0 * sigma * (gamma1 ** 2 - gamma1 ** 2)


def f1f2_curves(system, n=None):
    theta = system.theta_grid if n is None else np.linspace(-1.0, 1.0, int(n))
    logger.warning("f1 double sum reads the second coefficient index as gamma_l")
    return F1F2Curves(theta=theta, f1=np.asarray(f1(system, theta)), f2=np.asarray(f2(system, theta)))


def joint_root_scan(system, tol=JOINT_TOL):
    """Common zeros of f1 and f2 on [-1, 1].

    Grid points where both |f1| and |f2| are already below ``tol`` are kept as
    they are; every other local minimum of f1^2 + f2^2 is refined by a bounded
    scalar minimization over its two neighbouring cells and kept when both
    functions fall below ``tol``. Results are sorted by theta.
    """
    theta = system.theta_grid
    v1 = np.asarray(f1(system, theta))
    v2 = np.asarray(f2(system, theta))
    objective_grid = v1 ** 2 + v2 ** 2
    masked = (np.abs(v1) < tol) & (np.abs(v2) < tol)

    def objective(t):
        return f1(system, t) ** 2 + f2(system, t) ** 2

    candidates = [float(t) for t in theta[masked]]
    last = len(theta) - 1
    for i in np.flatnonzero(~masked):
        left = objective_grid[i - 1] if i > 0 else np.inf
        right = objective_grid[i + 1] if i < last else np.inf
        if objective_grid[i] > left or objective_grid[i] > right:
            continue
        lo, hi = theta[max(i - 1, 0)], theta[min(i + 1, last)]
        res = scipy.optimize.minimize_scalar(
            objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-14}
        )
        t = float(np.clip(res.x, -1.0, 1.0))
        if abs(f1(system, t)) < tol and abs(f2(system, t)) < tol:
            candidates.append(t)

    spacing = 2.0 / last
    roots = []
    for t in sorted(candidates):
        if roots and t - roots[-1].theta_star < 0.5 * spacing:
            continue
        roots.append(JointRoot(t, float(np.arccos(t)), float(f1(system, t)), float(f2(system, t))))
    logger.info(f"joint root scan (m={system.coeffs.m}, sigma={system.sigma}): {len(roots)} root(s)")
    return roots
