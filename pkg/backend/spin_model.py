"""
Two-spin Heisenberg XX chain with a z-axis Dzyaloshinsky-Moriya term in a
uniform field:

    H = J (sx sx + sy sy) + B (sz (x) I + I (x) sz) + D (sx sy - sy sx)

Closed forms are evaluated with a common scale factor exp(-E),
E = 2 beta max(delta, |B|), so every exponential stays <= 1 and low
temperatures do not overflow.
"""

import logging
import math
from typing import NamedTuple, Optional, Tuple

import numpy as np

from config import Tolerances, get_tolerances
from errors import TemperatureError
from linalg_core import IDENTITY_4, EigenSystem, matrix_exp_hermitian
from models.density import DensityMatrix
from models.params import ModelParams

logger = logging.getLogger(__name__)

KET_00 = np.array([1, 0, 0, 0], dtype=complex)
KET_11 = np.array([0, 0, 0, 1], dtype=complex)


class Spectrum(NamedTuple):
    """Energies (+2 delta, -2 delta, +2B, -2B) and the matching eigenvectors."""

    energies: Tuple[float, float, float, float]
    states: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]
    theta_defaulted: bool = False


def _require_temperature(params: ModelParams, operation: str) -> float:
    if params.T <= 0.0:
        raise TemperatureError(params.T, operation)
    return 1.0 / params.T


def hamiltonian(params: ModelParams) -> np.ndarray:
    """4x4 Hamiltonian in the |00>, |01>, |10>, |11> basis."""
    h = np.zeros((4, 4), dtype=complex)
    h[0, 0] = 2.0 * params.B
    h[3, 3] = -2.0 * params.B
    h[1, 2] = 2.0 * params.J + 2.0j * params.D
    h[2, 1] = 2.0 * params.J - 2.0j * params.D
    return h


def _eigenstates(params: ModelParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    phase = np.exp(1j * params.theta)
    psi1 = np.array([0, phase, 1, 0], dtype=complex) / math.sqrt(2.0)
    psi2 = np.array([0, -phase, 1, 0], dtype=complex) / math.sqrt(2.0)
    return psi1, psi2, KET_00.copy(), KET_11.copy()


def spectrum(params: ModelParams) -> Spectrum:
    """
    Exact eigen-decomposition.

    |Psi_1,2> = (+-e^{i theta}|01> + |10>)/sqrt(2) with energies +-2 delta,
    |Psi_3> = |00> (+2B), |Psi_4> = |11> (-2B). When J = D = 0 the phase
    theta is undefined and taken as 0.
    """
    defaulted = params.J == 0.0 and params.D == 0.0
    if defaulted:
        logger.warning("J = D = 0: flip-flop phase theta undefined, using theta = 0")

    delta = params.delta
    return Spectrum(
        energies=(2.0 * delta, -2.0 * delta, 2.0 * params.B, -2.0 * params.B),
        states=_eigenstates(params),
        theta_defaulted=defaulted,
    )


def _scale_exponent(params: ModelParams, beta: float) -> float:
    return 2.0 * beta * max(params.delta, abs(params.B))


def scaled_partition_function(params: ModelParams) -> Tuple[float, float]:
    """
    (Z exp(-E), E) with E = 2 beta max(delta, |B|).

    Raises:
        TemperatureError: if T <= 0
    """
    beta = _require_temperature(params, "partition_function")
    e = _scale_exponent(params, beta)
    bd = 2.0 * beta * params.delta
    bb = 2.0 * beta * params.B
    z_scaled = math.exp(bd - e) + math.exp(-bd - e) + math.exp(bb - e) + math.exp(-bb - e)
    return z_scaled, e


def partition_function(params: ModelParams) -> float:
    """Z = 2 (cosh 2 beta delta + cosh 2 beta B); inf once it exceeds the float range."""
    z_scaled, e = scaled_partition_function(params)
    try:
        return z_scaled * math.exp(e)
    except OverflowError:
        return math.inf


def thermal_state(params: ModelParams, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Closed-form Gibbs state exp(-beta H)/Z.

    Diagonal (e^{-2 beta B}, cosh 2 beta delta, cosh 2 beta delta, e^{2 beta B})/Z,
    rho_23 = -e^{i theta} sinh(2 beta delta)/Z and rho_32 its conjugate.

    Raises:
        TemperatureError: if T <= 0 (use ground_state instead)
    """
    beta = _require_temperature(params, "thermal_state")
    z_scaled, e = scaled_partition_function(params)
    bd = 2.0 * beta * params.delta
    bb = 2.0 * beta * params.B

    cosh_s = 0.5 * (math.exp(bd - e) + math.exp(-bd - e))
    sinh_s = 0.5 * (math.exp(bd - e) - math.exp(-bd - e))
    off = -np.exp(1j * params.theta) * sinh_s

    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = math.exp(-bb - e)
    rho[1, 1] = cosh_s
    rho[2, 2] = cosh_s
    rho[3, 3] = math.exp(bb - e)
    rho[1, 2] = off
    rho[2, 1] = np.conj(off)

    # Boltzmann weights in the order of _eigenstates (+2 delta, -2 delta, +2B, -2B)
    weights = np.array([math.exp(-bd - e), math.exp(bd - e), math.exp(-bb - e), math.exp(bb - e)]) / z_scaled
    order = np.argsort(-weights, kind="stable")
    vectors = np.column_stack(_eigenstates(params))
    eigensystem = EigenSystem(eigenvalues=weights[order], eigenvectors=vectors[:, order])
    return DensityMatrix(rho / z_scaled, tolerances=tolerances, eigensystem=eigensystem)


def thermal_state_numeric(params: ModelParams, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """Gibbs state through the eigensolver: exp(-beta (H - e_min)) normalised by its trace."""
    beta = _require_temperature(params, "thermal_state_numeric")
    ground_energy = -2.0 * max(params.delta, abs(params.B))
    weights = matrix_exp_hermitian(hamiltonian(params) - ground_energy * IDENTITY_4, -beta, tolerances)
    return DensityMatrix(weights / np.trace(weights).real, tolerances=tolerances)


def ground_state(params: ModelParams, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """
    Zero-temperature state; the T field is ignored.

    |Psi_2><Psi_2| when delta > |B|, the fully polarised product state when
    delta < |B| (|11> for B > 0, |00> for B < 0) and the equal mixture of the
    two when |delta - |B|| <= eps_deg. With delta = B = 0 every level is
    degenerate and the result is I/4.
    """
    tol = tolerances or get_tolerances()
    delta = params.delta
    field = abs(params.B)

    if delta <= tol.eps_deg and field <= tol.eps_deg:
        return DensityMatrix.maximally_mixed()

    psi2 = spectrum(params).states[1]
    polarised = KET_11 if params.B >= 0.0 else KET_00
    singlet_like = np.outer(psi2, np.conj(psi2))
    product = np.outer(polarised, np.conj(polarised))

    if abs(delta - field) <= tol.eps_deg:
        logger.debug(f"Degenerate ground level at delta = |B| = {field}")
        return DensityMatrix(0.5 * (singlet_like + product), tolerances=tol)
    if delta > field:
        return DensityMatrix(singlet_like, tolerances=tol)
    return DensityMatrix(product, tolerances=tol)


def state_for(params: ModelParams, tolerances: Optional[Tolerances] = None) -> DensityMatrix:
    """Thermal state for T > 0, ground state at T = 0."""
    if params.is_zero_temperature:
        return ground_state(params, tolerances)
    return thermal_state(params, tolerances)


def sqrt_thermal_state(params: ModelParams, paper_verbatim: bool = False) -> np.ndarray:
    """
    Closed-form square root of the Gibbs state.

    (1/sqrt(Z)) with diagonal (e^{-beta B}, cosh beta delta, cosh beta delta,
    e^{beta B}) and rho_23 entry -e^{i theta} sinh beta delta. With
    ``paper_verbatim`` the middle block carries 2 cosh and 2 sinh, which
    breaks Tr R^2 = 1; that variant only exists for comparison runs.

    Raises:
        TemperatureError: if T <= 0
    """
    beta = _require_temperature(params, "sqrt_thermal_state")
    z_scaled, e = scaled_partition_function(params)
    half = 0.5 * e
    bd = beta * params.delta
    bb = beta * params.B
    factor = 2.0 if paper_verbatim else 1.0

    cosh_s = factor * 0.5 * (math.exp(bd - half) + math.exp(-bd - half))
    sinh_s = factor * 0.5 * (math.exp(bd - half) - math.exp(-bd - half))
    off = -np.exp(1j * params.theta) * sinh_s

    root = np.zeros((4, 4), dtype=complex)
    root[0, 0] = math.exp(-bb - half)
    root[1, 1] = cosh_s
    root[2, 2] = cosh_s
    root[3, 3] = math.exp(bb - half)
    root[1, 2] = off
    root[2, 1] = np.conj(off)
    return root / math.sqrt(z_scaled)


def d_infinity_state() -> DensityMatrix:
    """Limit D -> infinity of the Gibbs state at any finite T: rho_22 = rho_33 = 1/2, rho_23 = -i/2."""
    rho = np.zeros((4, 4), dtype=complex)
    rho[1, 1] = 0.5
    rho[2, 2] = 0.5
    rho[1, 2] = -0.5j
    rho[2, 1] = 0.5j
    return DensityMatrix(rho)
