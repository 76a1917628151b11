"""
Validated two-qubit density matrix.
"""

from typing import Any, Dict, Optional

import numpy as np

from config import Tolerances, get_tolerances
from errors import NotPSDError
from linalg_core import EigenSystem, dagger, eigvalsh, matrix_sqrt_psd, spectral_apply, symmetrize

# Entries that must vanish for an X state (0-based row, column)
_X_FORBIDDEN = ((0, 1), (0, 2), (1, 3), (2, 3))


class DensityMatrix:
    """A 4x4 Hermitian, PSD, unit-trace matrix in the |00>,|01>,|10>,|11> basis."""

    def __init__(
        self,
        matrix: np.ndarray,
        validate: bool = True,
        tolerances: Optional[Tolerances] = None,
        eigensystem: Optional[EigenSystem] = None,
    ):
        """
        Wrap and (optionally) validate a density matrix.

        Args:
            matrix: 4x4 complex array
            validate: Check hermiticity, unit trace and positivity
            tolerances: Tolerance record, defaults to the configured one
            eigensystem: Exact eigen-decomposition of ``matrix`` when the caller
                knows it; taken as given, not checked

        Raises:
            ValueError: on a wrong shape, non-Hermitian input or trace != 1
            NotPSDError: on an eigenvalue below -eps_psd
        """
        m = np.array(matrix, dtype=complex)
        if m.shape != (4, 4):
            raise ValueError(f"Density matrix must be 4x4, got {m.shape}")
        if validate:
            tol = tolerances or get_tolerances()
            asymmetry = float(np.max(np.abs(m - dagger(m))))
            if asymmetry > tol.eps_eq:
                raise ValueError(f"Density matrix is not Hermitian (deviation {asymmetry:.3e})")
            trace = np.trace(m)
            if abs(trace - 1.0) > tol.eps_eq:
                raise ValueError(f"Density matrix trace is {trace.real:.15g}, expected 1")
            smallest = float(np.min(eigvalsh(m, tol)))
            if smallest < -tol.eps_psd:
                raise NotPSDError(smallest, tol.eps_psd)
        self._matrix = symmetrize(m)
        self._matrix.setflags(write=False)
        self._eigensystem = eigensystem

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    def __getitem__(self, index):
        return self._matrix[index]

    @property
    def purity(self) -> float:
        """Tr rho^2."""
        return float(np.real(np.trace(self._matrix @ self._matrix)))

    def sqrt(self, tolerances: Optional[Tolerances] = None) -> np.ndarray:
        """PSD square root, from the known eigensystem when there is one."""
        if self._eigensystem is None:
            return matrix_sqrt_psd(self._matrix, tolerances)
        return spectral_apply(self._eigensystem, np.sqrt(np.clip(self._eigensystem.eigenvalues, 0.0, None)))

    def x_form_deviation(self) -> float:
        """Largest modulus among the entries an X state keeps at zero."""
        return max(abs(self._matrix[i, j]) for i, j in _X_FORBIDDEN)

    @classmethod
    def from_ket(cls, ket: np.ndarray) -> "DensityMatrix":
        """Projector onto a (normalised on the fly) 4-component state vector."""
        psi = np.asarray(ket, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, np.conj(psi)))

    @classmethod
    def maximally_mixed(cls) -> "DensityMatrix":
        return cls(np.eye(4, dtype=complex) / 4.0)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary representation (real and imaginary parts)."""
        return {
            "real": self._matrix.real.tolist(),
            "imag": self._matrix.imag.tolist(),
        }

    def __repr__(self) -> str:
        return f"DensityMatrix(purity={self.purity:.6f})"
