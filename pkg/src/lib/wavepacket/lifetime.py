import math
from dataclasses import dataclass
from typing import Optional

from lib.errors import DegenerateCausticError, DomainError, InfiniteLifetimeError


@dataclass(frozen=True)
class LifetimeEstimate:
    l1: float
    l2: float
    v1: Optional[float]
    v2: Optional[float]
    t_star: float
    delta_k: Optional[float] = None
    d2vg: Optional[float] = None


def packet_length(alpha):
    """Characteristic packet length l = 1 / sqrt(alpha)."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    return 1.0 / math.sqrt(alpha)


def _check_lengths(l1, l2):
    if not (l1 > 0 and l2 > 0):
        raise DomainError(f"packet lengths must be positive, got {l1}, {l2}")


def caustic_lifetime(l1, l2, v1, v2):
    """t* = (l1 + l2) / |v1 - v2|, the time two packets stay superimposed."""
    _check_lengths(l1, l2)
    if v1 == v2:
        raise InfiniteLifetimeError(f"packets with equal speed {v1} never separate")
    return LifetimeEstimate(l1=l1, l2=l2, v1=v1, v2=v2, t_star=(l1 + l2) / abs(v1 - v2))


def lifetime_second_order(l1, l2, delta_k, d2vg):
    """t* = (l1 + l2) / (2 delta_k^2 |d^2 V_g / dk^2|) for carriers close to k_c."""
    _check_lengths(l1, l2)
    if not delta_k > 0:
        raise DomainError(f"delta_k must be positive, got {delta_k}")
    if d2vg == 0:
        raise DegenerateCausticError("d^2 V_g / dk^2 vanishes at the caustic")
    t_star = (l1 + l2) / (2.0 * delta_k ** 2 * abs(d2vg))
    return LifetimeEstimate(l1=l1, l2=l2, v1=None, v2=None, t_star=t_star, delta_k=delta_k,
                            d2vg=abs(d2vg))
