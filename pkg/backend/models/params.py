"""
Physical parameters of the two-spin XX chain with DM interaction.
"""

import math
from typing import Any, Dict, Optional

from pydantic import BaseModel, field_validator


class ModelParams(BaseModel):
    """
    Coupling J, field B, DM strength D and temperature T (k_B = hbar = 1).

    T = 0 is a valid value and selects the ground state; thermal operations
    refuse it.
    """

    J: float = 1.0
    B: float = 0.0
    D: float = 0.0
    T: float = 1.0

    model_config = {"frozen": True}

    @field_validator("T")
    @classmethod
    def _non_negative_temperature(cls, value: float) -> float:
        if value < 0.0 or math.isnan(value):
            raise ValueError(f"temperature must be >= 0, got {value}")
        return value

    @property
    def delta(self) -> float:
        """Effective coupling sqrt(J^2 + D^2)."""
        return math.hypot(self.J, self.D)

    @property
    def theta(self) -> float:
        """Phase of the flip-flop block, atan2(D, J); 0 when J = D = 0."""
        if self.J == 0.0 and self.D == 0.0:
            return 0.0
        return math.atan2(self.D, self.J)

    @property
    def is_zero_temperature(self) -> bool:
        return self.T == 0.0

    @property
    def beta(self) -> Optional[float]:
        """Inverse temperature, None at T = 0."""
        return None if self.T == 0.0 else 1.0 / self.T

    def replace(self, **changes: float) -> "ModelParams":
        """Copy with some fields changed."""
        return ModelParams(**{**self.to_dict(), **changes})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation."""
        return {"J": self.J, "B": self.B, "D": self.D, "T": self.T}
