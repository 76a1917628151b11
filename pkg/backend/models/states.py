"""
Measurement axes and classical-quantum states on the two-qubit space.
"""

import math
from typing import Tuple

import numpy as np
from pydantic import BaseModel, field_validator

from linalg_core import IDENTITY_2, bloch_operator

Vector3 = Tuple[float, float, float]

_UNIT_TOLERANCE = 1e-10
_BLOCH_TOLERANCE = 1e-12


class BlochMeasurement(BaseModel):
    """Two-outcome projective measurement on qubit A along the unit axis ``u``."""

    u: Vector3

    model_config = {"frozen": True}

    @field_validator("u")
    @classmethod
    def _unit_axis(cls, value: Vector3) -> Vector3:
        norm = math.sqrt(sum(c * c for c in value))
        if abs(norm - 1.0) > _UNIT_TOLERANCE:
            raise ValueError(f"measurement axis must have unit norm, got {norm:.15g}")
        return tuple(c / norm for c in value)

    @classmethod
    def from_angles(cls, phi: float, lam: float) -> "BlochMeasurement":
        """Axis (sin phi cos lam, sin phi sin lam, cos phi), phi in [0, pi], lam in [0, 2pi)."""
        return cls(u=(
            math.sin(phi) * math.cos(lam),
            math.sin(phi) * math.sin(lam),
            math.cos(phi),
        ))

    @classmethod
    def from_vector(cls, vector: np.ndarray) -> "BlochMeasurement":
        v = np.asarray(vector, dtype=float)
        return cls(u=tuple(float(c) for c in v / np.linalg.norm(v)))

    @property
    def angles(self) -> Tuple[float, float]:
        """(phi, lam) of the axis, lam wrapped into [0, 2pi)."""
        x, y, z = self.u
        phi = math.acos(max(-1.0, min(1.0, z)))
        lam = math.atan2(y, x) % (2.0 * math.pi)
        return phi, lam

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.u, dtype=float)

    def projectors(self) -> Tuple[np.ndarray, np.ndarray]:
        """(Pi_plus, Pi_minus) = (I +- u.sigma)/2 as 2x2 matrices."""
        op = bloch_operator(self.vector)
        return 0.5 * (IDENTITY_2 + op), 0.5 * (IDENTITY_2 - op)


class CQState(BaseModel):
    """
    p Pi_1 (x) rho_1 + (1 - p) Pi_2 (x) rho_2 with Pi_1,2 the projectors of
    ``measurement`` and rho_k = (I + b_k.sigma)/2.
    """

    p: float
    measurement: BlochMeasurement
    b1: Vector3 = (0.0, 0.0, 0.0)
    b2: Vector3 = (0.0, 0.0, 0.0)

    model_config = {"frozen": True}

    @field_validator("p")
    @classmethod
    def _probability(cls, value: float) -> float:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {value}")
        return value

    @field_validator("b1", "b2")
    @classmethod
    def _inside_bloch_ball(cls, value: Vector3) -> Vector3:
        norm = math.sqrt(sum(c * c for c in value))
        if norm > 1.0 + _BLOCH_TOLERANCE:
            raise ValueError(f"Bloch vector norm {norm:.15g} exceeds 1")
        return value
