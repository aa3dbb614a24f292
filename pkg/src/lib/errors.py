"""
Exception types raised by the DRP study library.

Every error carries a human readable message; the CLI maps the families
below onto distinct exit codes (see ``commands.EXIT_CODES``).
"""


class DrpError(Exception):
    """Base class of every error raised on purpose by the library."""


class ConfigError(DrpError):
    """Configuration text or file rejected.

    ``errors`` lists every problem found (not just the first), each one
    already prefixed with its line number when it is known.
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("\n".join(self.errors))


class DomainError(DrpError, ValueError):
    """Argument outside the domain of an operation."""


class SolverError(DrpError):
    """Internal linear-algebra failure (must not happen for SPD systems)."""


class DegenerateAmplificationError(DrpError, ArithmeticError):
    """|G(phi)| = 0, the damping exponent ln|G| is undefined."""


class DomainTooSmallError(DrpError, ValueError):
    """A wave packet reaches the edge of the spatial domain before t_final."""


class InfiniteLifetimeError(DrpError, ArithmeticError):
    """Two packets with identical speeds stay superimposed forever."""


class DegenerateCausticError(DrpError, ZeroDivisionError):
    """Second wavenumber derivative of V_g vanishes at the caustic."""


class InstabilityError(DrpError, ArithmeticError):
    """Stepped solution exceeded the amplification cap."""

    def __init__(self, step, growth, cap):
        self.step = step
        self.growth = growth
        self.cap = cap
        super().__init__(
            f"explicit scheme amplified the solution by {growth:.3e} "
            f"(cap {cap:.1e}) at step {step}"
        )
