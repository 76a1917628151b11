"""
Exception hierarchy for the geometric discord toolkit.
"""

from typing import Optional


class GQDError(Exception):
    """Base class for all toolkit errors."""


class NotPSDError(GQDError, ValueError):
    """A matrix expected to be positive semidefinite has a negative eigenvalue."""

    def __init__(self, min_eigenvalue: float, tolerance: float):
        self.min_eigenvalue = min_eigenvalue
        self.tolerance = tolerance
        super().__init__(
            f"Matrix is not PSD: smallest eigenvalue {min_eigenvalue:.3e} < -{tolerance:.1e}"
        )


class ConvergenceError(GQDError, RuntimeError):
    """The Jacobi eigensolver exhausted its sweep budget."""

    def __init__(self, sweeps: int, residual: float):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal residual {residual:.3e})"
        )


class NotXStateError(GQDError, ValueError):
    """A two-qubit state has non-zero entries outside the X pattern."""


class TemperatureError(GQDError, ValueError):
    """A thermal operation was called with T <= 0."""

    def __init__(self, temperature: float, operation: Optional[str] = None):
        self.temperature = temperature
        where = f"{operation}: " if operation else ""
        super().__init__(
            f"{where}temperature must be positive (got T={temperature}); "
            "use ground_state for T = 0"
        )


class RangeViolationError(GQDError, ValueError):
    """A discord value fell outside [0, 1] by more than the clamp tolerance."""


class InvalidSpecError(GQDError, ValueError):
    """A classical-quantum state was built from out-of-range parameters."""

