"""
Analytic dispersive-error model for two Gaussian wave packets.

Each packet is advected twice: once at the exact speed c and once at the
numerical group velocity of its carrier. The error field is

    E(x, t) = | u1(c) - u1(V1) + u2(c) - u2(V2) |

so the two numerical packets focus (a caustic) while they overlap.
"""
import logging
import math
from dataclasses import dataclass

import numpy as np
from tqdm import tqdm

from lib.dispersion.dispersion_relation import group_velocity
from lib.errors import DomainError, DomainTooSmallError, InfiniteLifetimeError

logger = logging.getLogger(__name__)

# Half-width of the evaluation window around a packet centre, in e-folding lengths.
WINDOW_LENGTHS = 6.0

DEFAULT_ALPHA = 0.0005
DEFAULT_H = 0.01
DEFAULT_V1 = -2.68381
DEFAULT_V2 = -2.51381


@dataclass(frozen=True)
class WavePacket:
    """u = exp(-alpha xi^2) cos(k xi), xi = x - x0 - v t."""

    alpha: float
    x0: float
    k: float
    v: float

    def __post_init__(self):
        if not all(math.isfinite(f) for f in (self.alpha, self.x0, self.k, self.v)):
            raise DomainError("wave packet fields must be finite")
        if self.alpha <= 0:
            raise DomainError(f"envelope decay alpha must be positive, got {self.alpha}")

    @property
    def length(self):
        """Characteristic length l = 1 / sqrt(alpha)."""
        return 1.0 / math.sqrt(self.alpha)

    def centre(self, t, v=None):
        return self.x0 + (self.v if v is None else v) * t


def packet_value(p, x, t, v=None):
    """Packet value at (x, t); ``v`` overrides the packet's own speed."""
    xi = np.asarray(x, dtype=float) - p.x0 - (p.v if v is None else v) * t
    value = np.exp(-p.alpha * xi ** 2) * np.cos(p.k * xi)
    return value.item() if value.ndim == 0 else value


@dataclass(frozen=True)
class ErrorModelConfig:
    packet1: WavePacket
    packet2: WavePacket
    c: float
    x_min: float
    x_max: float
    nx: int
    t_final: float
    nt: int
    field_nx: int = 2001
    field_nt: int = 201

    def __post_init__(self):
        errors = []
        if self.nx < 2 or self.field_nx < 2:
            errors.append("nx and field_nx must be at least 2")
        if self.nt < 2 or self.field_nt < 2:
            errors.append("nt and field_nt must be at least 2")
        if not self.x_max > self.x_min:
            errors.append(f"empty domain [{self.x_min}, {self.x_max}]")
        if not self.t_final > 0:
            errors.append(f"t_final must be positive, got {self.t_final}")
        if not math.isfinite(self.c):
            errors.append("advection speed c must be finite")
        if errors:
            raise DomainError("; ".join(errors))

    @property
    def dx(self):
        return (self.x_max - self.x_min) / (self.nx - 1)

    @property
    def times(self):
        return np.linspace(0.0, self.t_final, self.nt)

    def centres(self, t):
        """The four packet centres (exact and numerical) at time t."""
        p1, p2 = self.packet1, self.packet2
        return (p1.centre(t, self.c), p1.centre(t), p2.centre(t, self.c), p2.centre(t))

    def to_dict(self):
        return {
            "packet1": dict(vars(self.packet1)),
            "packet2": dict(vars(self.packet2)),
            "c": self.c,
            "x_min": self.x_min,
            "x_max": self.x_max,
            "nx": self.nx,
            "dx": self.dx,
            "t_final": self.t_final,
            "nt": self.nt,
            "field_nx": self.field_nx,
            "field_nt": self.field_nt,
        }


@dataclass(frozen=True)
class ErrorHistory:
    times: np.ndarray
    linf: np.ndarray


@dataclass(frozen=True)
class FieldGrid:
    """values[i, j] is the field at (t[i], x[j])."""

    x: np.ndarray
    t: np.ndarray
    values: np.ndarray


@dataclass(frozen=True)
class RaySample:
    phi_c: float
    t: float
    x: float


def error_field(cfg, x, t):
    """Dispersive error E(x, t) >= 0; zero at t = 0."""
    p1, p2 = cfg.packet1, cfg.packet2
    value = np.abs(
        np.asarray(packet_value(p1, x, t, cfg.c)) - packet_value(p1, x, t)
        + packet_value(p2, x, t, cfg.c) - packet_value(p2, x, t)
    )
    return value.item() if value.ndim == 0 else value


def check_domain(cfg):
    """Every packet track must stay 6 e-folding lengths inside the domain."""
    margin = WINDOW_LENGTHS * max(cfg.packet1.length, cfg.packet2.length)
    ends = np.array(cfg.centres(0.0) + cfg.centres(cfg.t_final))
    lo, hi = ends.min(), ends.max()
    if lo - margin < cfg.x_min or hi + margin > cfg.x_max:
        raise DomainTooSmallError(
            f"packets span [{lo:.6g}, {hi:.6g}] up to t = {cfg.t_final:.6g}; with a margin "
            f"of {margin:.6g} the domain must cover [{lo - margin:.6g}, {hi + margin:.6g}], "
            f"got [{cfg.x_min:.6g}, {cfg.x_max:.6g}]"
        )


def _window_indices(cfg, t):
    """Grid indices within 6 e-folding lengths of any packet centre (merged, sorted)."""
    half = WINDOW_LENGTHS * max(cfg.packet1.length, cfg.packet2.length)
    dx = cfg.dx
    spans = []
    for centre in sorted(cfg.centres(t)):
        lo = max(int(math.ceil((centre - half - cfg.x_min) / dx)), 0)
        hi = min(int(math.floor((centre + half - cfg.x_min) / dx)), cfg.nx - 1)
        if hi < lo:
            continue
        if spans and lo <= spans[-1][1] + 1:
            spans[-1][1] = max(spans[-1][1], hi)
        else:
            spans.append([lo, hi])
    if not spans:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([np.arange(lo, hi + 1) for lo, hi in spans])


def linf_history(cfg, tqdm_flag=False):
    """max_x E(x, t) on the nx grid for nt uniform times in [0, t_final].

    Only grid points near a packet centre are evaluated; elsewhere every
    term is below exp(-36).
    """
    check_domain(cfg)
    times = cfg.times
    linf = np.zeros(cfg.nt)
    for i, t in enumerate(tqdm(times, desc="linf history", disable=not tqdm_flag)):
        idx = _window_indices(cfg, t)
        if idx.size:
            linf[i] = np.max(error_field(cfg, cfg.x_min + idx * cfg.dx, t))
    logger.info(f"linf history: max {linf.max():.6f}, final {linf[-1]:.6f}")
    return ErrorHistory(times=times, linf=linf)


def residual_energy_grid(cfg, tqdm_flag=False):
    """Residual kinetic energy 0.5 E^2 on the field_nt x field_nx grid."""
    check_domain(cfg)
    x = np.linspace(cfg.x_min, cfg.x_max, cfg.field_nx)
    t = np.linspace(0.0, cfg.t_final, cfg.field_nt)
    values = np.empty((cfg.field_nt, cfg.field_nx))
    for i, ti in enumerate(tqdm(t, desc="residual energy", disable=not tqdm_flag)):
        values[i] = 0.5 * np.asarray(error_field(cfg, x, ti)) ** 2
    return FieldGrid(x=x, t=t, values=values)


def caustic_rays(report, times):
    """Samples of x = U_c t for every stationary point of the report."""
    times = np.asarray(times, dtype=float)
    return [
        RaySample(point.phi_c, float(t), float(point.U_c * t))
        for point in report.stationary_points
        for t in times
    ]


def overlap_duration(history, threshold):
    """Total time with linf above threshold, crossings linearly interpolated."""
    t, v = np.asarray(history.times), np.asarray(history.linf) - threshold
    total = 0.0
    for i in range(len(t) - 1):
        a, b = v[i], v[i + 1]
        dt = t[i + 1] - t[i]
        if a > 0 and b > 0:
            total += dt
        elif a > 0 or b > 0:
            total += dt * max(a, b) / abs(b - a)
    return total


def packet_speeds(coeffs, grid, backend, k1, k2):
    """Numerical group velocities c V_g(k h) of two carriers."""
    return tuple(float(grid.c * group_velocity(coeffs, grid, backend, k * grid.h)) for k in (k1, k2))


def crossing_config(alpha=DEFAULT_ALPHA, h=DEFAULT_H, v1=DEFAULT_V1, v2=DEFAULT_V2, c=1.0,
                    carrier_phi_c=0.0, delta_k=0.05, separation=None, x0_1=None, x0_2=None,
                    t_final=None, nt=401, field_nx=2001, field_nt=201):
    """Two-packet configuration with automatic geometry.

    The faster packet (in the direction of travel) starts behind the slower
    one, ``separation`` (default 12 l, l = 1 / sqrt(alpha)) apart, so the two
    overlap at t_c = separation / |v1 - v2|; t_final defaults to 2 t_c. The
    domain covers every packet track with a 6.5 l margin and spacing h.
    Carriers are k_c + delta_k and k_c - delta_k with k_c = carrier_phi_c / h.
    """
    length = 1.0 / math.sqrt(alpha)
    separation = 12.0 * length if separation is None else separation
    if x0_1 is None or x0_2 is None:
        x0_1, x0_2 = (separation, 0.0) if v1 < v2 else (0.0, separation)
    if t_final is None:
        if v1 == v2:
            raise InfiniteLifetimeError("equal packet speeds never overlap, give t_final explicitly")
        t_final = 2.0 * abs(x0_1 - x0_2) / abs(v1 - v2)
    k_c = carrier_phi_c / h
    packet1 = WavePacket(alpha=alpha, x0=x0_1, k=k_c + delta_k, v=v1)
    packet2 = WavePacket(alpha=alpha, x0=x0_2, k=k_c - delta_k, v=v2)

    ends = [p.centre(t, v) for p in (packet1, packet2) for t in (0.0, t_final) for v in (c, p.v)]
    pad = (WINDOW_LENGTHS + 0.5) * length
    x_min = min(ends) - pad
    nx = int(math.ceil((max(ends) + pad - x_min) / h)) + 1
    cfg = ErrorModelConfig(
        packet1=packet1, packet2=packet2, c=c, x_min=x_min, x_max=x_min + (nx - 1) * h, nx=nx,
        t_final=t_final, nt=nt, field_nx=field_nx, field_nt=field_nt,
    )
    logger.debug(f"two-packet geometry: {cfg.to_dict()}")
    return cfg

