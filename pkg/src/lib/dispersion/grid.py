import enum
import math
from dataclasses import dataclass, field

from lib.errors import DomainError


class DispersionBackend(enum.Enum):
    GENERAL_LOG = "general"
    THREE_POINT_CLOSED_FORM = "threepoint"

    @classmethod
    def from_name(cls, name):
        if isinstance(name, cls):
            return name
        for backend in cls:
            if name in (backend.value, backend.name):
                return backend
        choices = ", ".join(b.value for b in cls)
        raise DomainError(f"unknown dispersion backend {name!r} (choose from {choices})")


@dataclass(frozen=True)
class GridSpec:
    """Uniform mesh h, advection speed c and Courant number sigma = c tau / h."""

    c: float
    h: float
    sigma: float
    tau: float = field(init=False)

    def __post_init__(self):
        for name in ("c", "h", "sigma"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"{name} must be finite")
        if self.c == 0:
            raise DomainError("advection speed c must be nonzero")
        if self.h <= 0:
            raise DomainError(f"mesh size h must be positive, got {self.h}")
        if self.sigma <= 0:
            raise DomainError(f"Courant number sigma must be positive, got {self.sigma}")
        object.__setattr__(self, "tau", self.sigma * self.h / self.c)


def phi_to_k(grid, phi):
    """Physical wavenumber k = phi sigma / (c tau) = phi / h."""
    return phi * grid.sigma / (grid.c * grid.tau)
