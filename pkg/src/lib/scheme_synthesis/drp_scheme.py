"""
Dispersion-Relation-Preserving (DRP) first-derivative stencils.

The antisymmetric (2m+1)-point stencil

    (du/dx)_i ~ (1/h) sum_{k=-m}^{m} gamma(k) u_{i+k}

is fitted to the exact derivative over reduced wavenumbers |zeta| <= pi/2
(waves longer than 4h) by minimizing the integrated wavenumber error

    E = 2 int_0^{pi/2} (zeta - 2 sum_{k>=1} gamma_k sin(k zeta))^2 dzeta.
"""
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.integrate
import scipy.linalg

from lib.errors import DomainError, SolverError

logger = logging.getLogger(__name__)

# Upper end of the fitted band, zeta in [0, pi/2].
BAND_EDGE = 0.5 * math.pi

# sin(n pi/2) and cos(n pi/2) for n mod 4, exact.
_SIN_QUARTER = (0, 1, 0, -1)
_COS_QUARTER = (1, 0, -1, 0)


@dataclass(frozen=True)
class SchemeCoefficients:
    """Independent coefficients gamma_1..gamma_m of an antisymmetric stencil.

    gamma(0) = 0 and gamma(-k) = -gamma(k) are structural: only the positive
    half is stored and ``coefficient`` extends it.
    """

    m: int
    gamma: Tuple[float, ...]

    def __post_init__(self):
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"stencil half-width must be a positive integer, got {self.m!r}")
        gamma = tuple(float(g) for g in self.gamma)
        if len(gamma) != self.m:
            raise DomainError(f"expected {self.m} coefficients, got {len(gamma)}")
        if not all(math.isfinite(g) for g in gamma):
            raise DomainError("stencil coefficients must be finite")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "gamma", gamma)

    def coefficient(self, k):
        """gamma(k) for any integer k in [-m, m]."""
        if abs(k) > self.m:
            raise DomainError(f"stencil index {k} outside [-{self.m}, {self.m}]")
        if k == 0:
            return 0.0
        if k > 0:
            return self.gamma[k - 1]
        return -self.gamma[-k - 1]

    @property
    def offsets(self):
        return np.arange(-self.m, self.m + 1)

    def full(self):
        """gamma(k) for k = -m..m as an array of length 2m+1."""
        half = np.asarray(self.gamma)
        return np.concatenate([-half[::-1], [0.0], half])

    @property
    def positive_offsets(self):
        return np.arange(1, self.m + 1)


@dataclass(frozen=True)
class NormalSystem:
    """Gram system A gamma = b of the reduced least-squares problem."""

    matrix: np.ndarray
    rhs: np.ndarray


def _sin_sin_integral(i, j):
    # int_0^{pi/2} sin(i z) sin(j z) dz
    if i == j:
        return math.pi / 4.0
    return 0.5 * (_SIN_QUARTER[(i - j) % 4] / (i - j) - _SIN_QUARTER[(i + j) % 4] / (i + j))


def _zeta_sin_integral(i):
    # int_0^{pi/2} z sin(i z) dz
    return _SIN_QUARTER[i % 4] / i ** 2 - BAND_EDGE * _COS_QUARTER[i % 4] / i


def _cos_difference_integral(k, i):
    # int_0^{pi/2} cos((k - i) z) dz, any integers
    d = k - i
    if d == 0:
        return BAND_EDGE
    return _SIN_QUARTER[d % 4] / d


def _check_half_width(m):
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"stencil half-width must be a positive integer, got {m!r}")
    return int(m)


def build_normal_system(m):
    """Exact normal equations of the reduced (antisymmetric) problem.

    Parameters
    ----------
    m : int
        Stencil half-width, m >= 1.

    Returns
    -------
    NormalSystem
        A_ij = 4 int_0^{pi/2} sin(i z) sin(j z) dz and
        b_i = 2 int_0^{pi/2} z sin(i z) dz, i, j = 1..m, from closed forms.
    """
    m = _check_half_width(m)
    matrix = np.empty((m, m))
    for i in range(1, m + 1):
        for j in range(1, m + 1):
            matrix[i - 1, j - 1] = 4.0 * _sin_sin_integral(i, j)
    rhs = np.array([2.0 * _zeta_sin_integral(i) for i in range(1, m + 1)])
    return NormalSystem(matrix=matrix, rhs=rhs)


def _cholesky_solve(matrix, rhs):
    try:
        factor = scipy.linalg.cho_factor(matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"normal matrix is not positive definite: {e}") from e
    solution = scipy.linalg.cho_solve(factor, rhs, check_finite=False)
    residual = np.max(np.abs(matrix @ solution - rhs)) / max(np.max(np.abs(rhs)), 1.0)
    if not np.all(np.isfinite(solution)) or residual > 1e-12:
        raise SolverError(f"normal equations solved with relative residual {residual:.3e}")
    return solution


def synthesize_drp(m):
    """Least-squares DRP coefficients of the (2m+1)-point stencil."""
    system = build_normal_system(m)
    gamma = _cholesky_solve(system.matrix, system.rhs)
    coeffs = SchemeCoefficients(m=int(m), gamma=tuple(gamma))
    logger.debug(f"synthesized m={m}: gamma={coeffs.gamma}")
    return coeffs


def full_stationarity_system(m):
    """Stationarity conditions over all 2m+1 unknowns gamma_{-m}..gamma_m.

    Row i (i = -m..m) reads
        sum_k gamma_k int_0^{pi/2} cos((k - i) z) dz = int_0^{pi/2} z sin(i z) dz,
    i.e. dE/dgamma_i = 0 without assuming antisymmetry.
    """
    m = _check_half_width(m)
    offsets = range(-m, m + 1)
    matrix = np.array([[_cos_difference_integral(k, i) for k in offsets] for i in offsets])
    # b_{-i} = -b_i
    rhs = np.array([0.0 if i == 0 else math.copysign(1.0, i) * _zeta_sin_integral(abs(i)) for i in offsets])
    return NormalSystem(matrix=matrix, rhs=rhs)


def solve_full_stationarity(m):
    """gamma(k), k = -m..m, from the unreduced system.

    The result is antisymmetric up to round-off, which grows with the
    condition number of the matrix (about 3e11 at m = 8): agreement with
    the reduced solution is near 1e-11 up to m = 5 and degrades beyond.
    """
    system = full_stationarity_system(m)
    logger.debug(f"stationarity system m={m}: condition number {np.linalg.cond(system.matrix):.3e}")
    try:
        factor = scipy.linalg.cho_factor(system.matrix, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise SolverError(f"stationarity matrix is not positive definite: {e}") from e
    return scipy.linalg.cho_solve(factor, system.rhs, check_finite=False)


def modified_wavenumber(coeffs, phi):
    """lambda_bar * h = 2 sum_{k>=1} gamma_k sin(k phi); odd in phi.

    ``phi`` may be a scalar or an array.
    """
    phi = np.asarray(phi, dtype=float)
    k = coeffs.positive_offsets
    value = 2.0 * np.sin(np.multiply.outer(phi, k)) @ np.asarray(coeffs.gamma)
    return float(value) if value.ndim == 0 else value


def wavenumber_slope(coeffs):
    """d(lambda_bar h)/d phi at phi = 0, i.e. 2 sum k gamma_k (1 for a consistent stencil)."""
    return 2.0 * float(np.dot(coeffs.positive_offsets, coeffs.gamma))


def integrated_error(coeffs):
    """Integrated wavenumber error E >= 0 by adaptive quadrature (atol 1e-10)."""
    k = coeffs.positive_offsets
    gamma = np.asarray(coeffs.gamma)

    def integrand(zeta):
        return (zeta - 2.0 * np.dot(gamma, np.sin(k * zeta))) ** 2

    value, _ = scipy.integrate.quad(integrand, 0.0, BAND_EDGE, epsabs=1e-10, epsrel=1e-12, limit=200)
    return max(2.0 * value, 0.0)


def coefficient_table(coeffs):
    """(k, gamma(k)) rows for k = -m..m."""
    return [(int(k), float(g)) for k, g in zip(coeffs.offsets, coeffs.full())]
