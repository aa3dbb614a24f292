"""
Discrete dispersion relation of the explicit DRP update

    u_i^{n+1} = u_i^n - sigma sum_k gamma(k) u_{i+k}^n.

A Fourier mode e^{i phi j} is multiplied by G(phi) per step. Two backends
produce the phase xi_tau(phi):

* GENERAL_LOG: xi_tau = -arg G = arctan(sigma L(phi)), L = lambda_bar h.
* THREE_POINT_CLOSED_FORM: the worked 3-point relation
  xi_tau = arctan[-(1 + g sigma) sin phi / (1 + (g sigma - 1) cos phi)], g = gamma_1.

Both phases are odd in phi, group velocities (V_g / c = xi_tau' / sigma) even.
All functions accept a scalar phi or an array of them.
"""
import logging
from dataclasses import dataclass

import numpy as np

from lib.dispersion.grid import DispersionBackend
from lib.errors import DegenerateAmplificationError, DomainError

logger = logging.getLogger(__name__)

# Richardson steps of the finite-difference oracle.
FD_STEPS = (1e-4, 5e-5)


@dataclass(frozen=True)
class DispersionSample:
    phi: float
    xi_tau: float
    eta_tau: float
    vg_over_c: float


@dataclass(frozen=True)
class DispersionProfile:
    """Sampled xi_tau, eta_tau and V_g/c over phi (arrays of equal length)."""

    backend: DispersionBackend
    phi: np.ndarray
    xi_tau: np.ndarray
    eta_tau: np.ndarray
    vg_over_c: np.ndarray

    def __len__(self):
        return len(self.phi)

    def __getitem__(self, i):
        return DispersionSample(
            float(self.phi[i]), float(self.xi_tau[i]), float(self.eta_tau[i]), float(self.vg_over_c[i])
        )


def _out(value):
    value = np.asarray(value)
    return value.item() if value.ndim == 0 else value


def _sine_sums(coeffs, phi):
    """L, L', L'' of lambda_bar h = 2 sum gamma_k sin(k phi)."""
    phi = np.asarray(phi, dtype=float)
    k = coeffs.positive_offsets
    gamma = np.asarray(coeffs.gamma)
    kphi = np.multiply.outer(phi, k)
    s, c = np.sin(kphi), np.cos(kphi)
    lam = 2.0 * s @ gamma
    dlam = 2.0 * c @ (k * gamma)
    d2lam = -2.0 * s @ (k ** 2 * gamma)
    return lam, dlam, d2lam


def _closed_form_terms(coeffs, grid):
    if coeffs.m != 1:
        raise DomainError(f"the 3-point closed form needs m = 1, got m = {coeffs.m}")
    g_sigma = coeffs.gamma[0] * grid.sigma
    return 1.0 + g_sigma, g_sigma - 1.0


def amplification_factor(coeffs, grid, phi):
    """G(phi) = 1 - 2 i sigma sum_{k>=1} gamma_k sin(k phi)."""
    lam, _, _ = _sine_sums(coeffs, phi)
    return _out(1.0 - 1j * grid.sigma * lam)


def phase_frequency(coeffs, grid, backend, phi):
    """Phase advance per step xi_tau (radians) for the selected backend."""
    backend = DispersionBackend.from_name(backend)
    if backend is DispersionBackend.GENERAL_LOG:
        lam, _, _ = _sine_sums(coeffs, phi)
        return _out(np.arctan(grid.sigma * lam))
    a, b = _closed_form_terms(coeffs, grid)
    phi = np.asarray(phi, dtype=float)
    return _out(np.arctan2(-a * np.sin(phi), 1.0 + b * np.cos(phi)))


def damping_rate(coeffs, grid, phi):
    """eta_tau = ln|G(phi)|; the mode amplitude is multiplied by e^{eta_tau} per step."""
    modulus = np.abs(np.asarray(amplification_factor(coeffs, grid, phi)))
    if np.any(modulus == 0.0):
        raise DegenerateAmplificationError("amplification factor vanishes, ln|G| undefined")
    return _out(np.log(modulus))


def group_velocity(coeffs, grid, backend, phi):
    """V_g / c from the analytic phi-derivative of xi_tau."""
    backend = DispersionBackend.from_name(backend)
    sigma = grid.sigma
    if backend is DispersionBackend.GENERAL_LOG:
        lam, dlam, _ = _sine_sums(coeffs, phi)
        return _out(dlam / (1.0 + (sigma * lam) ** 2))
    a, b = _closed_form_terms(coeffs, grid)
    phi = np.asarray(phi, dtype=float)
    num = -a * np.sin(phi)
    den = 1.0 + b * np.cos(phi)
    return _out(-a * (np.cos(phi) + b) / (num ** 2 + den ** 2) / sigma)


def group_velocity_slope(coeffs, grid, backend, phi):
    """Analytic d(V_g / c)/d phi; zero at every caustic."""
    backend = DispersionBackend.from_name(backend)
    sigma = grid.sigma
    if backend is DispersionBackend.GENERAL_LOG:
        lam, dlam, d2lam = _sine_sums(coeffs, phi)
        q = 1.0 + (sigma * lam) ** 2
        return _out(d2lam / q - 2.0 * sigma ** 2 * lam * dlam ** 2 / q ** 2)
    a, b = _closed_form_terms(coeffs, grid)
    phi = np.asarray(phi, dtype=float)
    s, c = np.sin(phi), np.cos(phi)
    num, dnum = -a * s, -a * c
    den, dden = 1.0 + b * c, -b * s
    p, dp = -a * (c + b), a * s
    q = num ** 2 + den ** 2
    dq = 2.0 * num * dnum + 2.0 * den * dden
    return _out((dp * q - p * dq) / (q ** 2 * sigma))


def group_velocity_fd(coeffs, grid, backend, phi):
    """V_g / c from Richardson-extrapolated central differences of phase_frequency."""
    phi = np.asarray(phi, dtype=float)

    def central(step):
        forward = np.asarray(phase_frequency(coeffs, grid, backend, phi + step))
        backward = np.asarray(phase_frequency(coeffs, grid, backend, phi - step))
        return (forward - backward) / (2.0 * step)

    coarse, fine = FD_STEPS
    return _out((4.0 * central(fine) - central(coarse)) / 3.0 / grid.sigma)


def group_velocity_curvature(coeffs, grid, backend, phi, step=1e-4):
    """|d^2 V_g / dk^2| in physical units (length^3 / time), phi = k h.

    Central difference of the analytic slope.
    """
    ahead = group_velocity_slope(coeffs, grid, backend, phi + step)
    behind = group_velocity_slope(coeffs, grid, backend, phi - step)
    d2v = (np.asarray(ahead) - np.asarray(behind)) / (2.0 * step)
    return _out(np.abs(d2v * grid.c * grid.h ** 2))


def log_relation_phase(coeffs, grid, phi):
    """Phase of the logarithmic relation taken literally with B = 0.

    xi_tau = -arg(1 + (tau / h) sum_k gamma(k) e^{i k phi}). With tau / h = sigma / c
    this has the opposite sign of -arg G.
    """
    lam, _, _ = _sine_sums(coeffs, phi)
    return _out(-np.angle(1.0 + 1j * (grid.sigma / grid.c) * lam))


def dispersion_profile(coeffs, grid, backend, n=1001):
    """Sample the dispersion relation on n uniform points of [-pi, pi]."""
    if n < 2:
        raise DomainError(f"a profile needs at least 2 samples, got {n}")
    backend = DispersionBackend.from_name(backend)
    phi = np.linspace(-np.pi, np.pi, int(n))
    profile = DispersionProfile(
        backend=backend,
        phi=phi,
        xi_tau=np.asarray(phase_frequency(coeffs, grid, backend, phi)),
        eta_tau=np.asarray(damping_rate(coeffs, grid, phi)),
        vg_over_c=np.asarray(group_velocity(coeffs, grid, backend, phi)),
    )
    logger.info(
        f"dispersion profile ({backend.value}, m={coeffs.m}, sigma={grid.sigma}): "
        f"max |G| = {np.exp(profile.eta_tau.max()):.6f}"
    )
    return profile
