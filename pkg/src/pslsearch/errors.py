"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid search parameters or sequence input."""


class FitnessOverflowError(ArithmeticError):
    """Fitness accumulation left the finite float64 range."""

    def __init__(self, length: int, alpha: int):
        self.length = length
        self.alpha = alpha
        super().__init__(
            f"fitness overflow for L={length}, alpha={alpha}: "
            f"sum of |C_k|^{alpha} is not representable as float64; "
            f"use a smaller exponent (lower --alpha2)"
        )


class CapabilityError(ValueError):
    """Requested problem size is beyond what the routine supports."""


class FormatError(ValueError):
    """Malformed sequence file, run record or convergence log."""

    def __init__(self, message: str, *, field: str | None = None, offset: int | None = None):
        self.field = field
        self.offset = offset
        super().__init__(message)
