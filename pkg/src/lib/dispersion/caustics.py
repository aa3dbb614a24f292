"""
Spurious caustics: stationary points of the numerical group velocity.
"""
import enum
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.optimize

from lib.dispersion.dispersion_relation import group_velocity, group_velocity_slope
from lib.dispersion.grid import DispersionBackend, phi_to_k
from lib.errors import DomainError

logger = logging.getLogger(__name__)

SCAN_POINTS = 4096
BISECT_TOL = 1e-12
CLASSIFY_STEP = 1e-4

# Roots of dV_g/dphi listed for the 3-point closed form.
REFERENCE_ROOTS = (0.0, 0.5 * math.pi, 0.950935)


class CausticKind(enum.Enum):
    MIN = "MIN"
    MAX = "MAX"
    INFLECTION_DEGENERATE = "INFLECTION_DEGENERATE"
    BOUNDARY = "BOUNDARY"


@dataclass(frozen=True)
class StationaryPoint:
    phi_c: float
    k_c: float
    U_c: float
    kind: CausticKind


@dataclass(frozen=True)
class CausticReport:
    backend: DispersionBackend
    sigma: float
    stationary_points: Tuple[StationaryPoint, ...]

    @property
    def interior(self):
        return tuple(p for p in self.stationary_points if p.kind is not CausticKind.BOUNDARY)

    @property
    def phis(self):
        return tuple(p.phi_c for p in self.stationary_points)


@dataclass(frozen=True)
class CausticRay:
    phi_c: float
    U_c: float

    def x(self, t):
        return self.U_c * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class ReferenceComparison:
    reference_phi: float
    nearest_phi: float
    distance: float
    agree: bool


def _classify(coeffs, grid, backend, phi, step):
    centre = group_velocity(coeffs, grid, backend, phi)
    second = (group_velocity(coeffs, grid, backend, phi + step) - 2.0 * centre
              + group_velocity(coeffs, grid, backend, phi - step))
    if abs(second) <= 1e-14 * max(1.0, abs(centre)):
        return CausticKind.INFLECTION_DEGENERATE
    return CausticKind.MIN if second > 0 else CausticKind.MAX


def _point(coeffs, grid, backend, phi, kind):
    return StationaryPoint(
        phi_c=float(phi),
        k_c=float(phi_to_k(grid, phi)),
        U_c=float(grid.c * group_velocity(coeffs, grid, backend, phi)),
        kind=kind,
    )


def find_caustics(coeffs, grid, backend, scan_points=SCAN_POINTS, bisect_tol=BISECT_TOL,
                  classify_step=CLASSIFY_STEP):
    """Locate the stationary points of V_g(phi) on [0, pi].

    Parameters
    ----------
    coeffs : SchemeCoefficients
    grid : GridSpec
    backend : DispersionBackend or str
    scan_points : int
        Uniform samples of dV_g/dphi used to bracket sign changes.
    bisect_tol : float
        Bisection tolerance in phi.
    classify_step : float
        Step of the second difference of V_g that decides MIN / MAX.

    Returns
    -------
    CausticReport
        phi = 0 and phi = pi (BOUNDARY) plus every polished interior root,
        ordered by phi.
    """
    backend = DispersionBackend.from_name(backend)
    if scan_points < 3:
        raise DomainError(f"caustic scan needs at least 3 points, got {scan_points}")
    if backend is DispersionBackend.THREE_POINT_CLOSED_FORM:
        logger.warning("3-point closed-form phase is not derived from the stepped scheme")

    phi = np.linspace(0.0, np.pi, int(scan_points))
    slope = np.asarray(group_velocity_slope(coeffs, grid, backend, phi), dtype=float)
    # V_g is even about 0 and pi, the endpoints are stationary by symmetry
    slope[0] = slope[-1] = 0.0

    def f(p):
        return group_velocity_slope(coeffs, grid, backend, p)

    roots = []
    for i in range(1, len(phi) - 1):
        if slope[i] == 0.0:
            roots.append(phi[i])
        elif slope[i] * slope[i + 1] < 0.0:
            roots.append(scipy.optimize.bisect(f, phi[i], phi[i + 1], xtol=bisect_tol))

    points = [_point(coeffs, grid, backend, 0.0, CausticKind.BOUNDARY)]
    for root in sorted(roots):
        kind = _classify(coeffs, grid, backend, root, classify_step)
        points.append(_point(coeffs, grid, backend, root, kind))
    points.append(_point(coeffs, grid, backend, math.pi, CausticKind.BOUNDARY))

    report = CausticReport(backend=backend, sigma=grid.sigma, stationary_points=tuple(points))
    logger.info(
        f"caustics ({backend.value}, m={coeffs.m}, sigma={grid.sigma}): "
        f"{len(report.interior)} interior stationary point(s)"
    )
    return report


def caustic_ray(report, phi_c, tol=1e-9):
    """Characteristic line x = U_c t of the stationary point at phi_c."""
    for point in report.stationary_points:
        if abs(point.phi_c - phi_c) <= tol:
            return CausticRay(phi_c=point.phi_c, U_c=point.U_c)
    raise DomainError(f"phi = {phi_c} is not a stationary point of this report")


def compare_with_reference(report, reference=REFERENCE_ROOTS, tol=1e-3):
    """Agree/disagree record for each reference root against the report."""
    found = np.asarray(report.phis)
    records = []
    for ref in reference:
        nearest = float(found[np.argmin(np.abs(found - ref))])
        distance = abs(nearest - ref)
        records.append(ReferenceComparison(float(ref), nearest, distance, bool(distance <= tol)))
    return records
