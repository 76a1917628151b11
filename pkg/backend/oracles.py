"""
Brute-force evaluators of the three discords, straight from their
definitions as distances to classical-quantum states. None of them touches
a closed form; they exist to certify gqd_measures.
"""

import logging
import math
from typing import Any, Dict, NamedTuple, Optional, Union

import numpy as np

from config import Settings, get_settings
from errors import InvalidSpecError
from gqd_measures import bures_maximand
from linalg_core import (
    IDENTITY_2,
    PAULIS,
    trace_norms,
)
from models.density import DensityMatrix
from models.states import BlochMeasurement, CQState
from search import compass_search, compass_search_sphere, halton_directions, level_grid

logger = logging.getLogger(__name__)

_PAULI_STACK = np.stack(PAULIS)
_BLOCH_TOLERANCE = 1e-12
_BURES_CHUNK = 8192

AxisLike = Union[BlochMeasurement, np.ndarray]


class OracleResult(NamedTuple):
    value: float
    diagnostics: Dict[str, Any]


def _axis(measurement: AxisLike) -> np.ndarray:
    if isinstance(measurement, BlochMeasurement):
        return measurement.vector
    u = np.asarray(measurement, dtype=float)
    return u / np.linalg.norm(u)


def _local_projectors(axes: np.ndarray) -> np.ndarray:
    """(Pi_+ (x) I, Pi_- (x) I) for a batch of axes, shape (k, 2, 4, 4)."""
    ops = np.einsum("ki,iab->kab", axes.astype(complex), _PAULI_STACK)
    plus = 0.5 * (IDENTITY_2 + ops)
    minus = 0.5 * (IDENTITY_2 - ops)
    halves = np.stack([plus, minus], axis=1)
    return np.einsum("kmab,cd->kmacbd", halves, IDENTITY_2).reshape(axes.shape[0], 2, 4, 4)


def _dephase_batch(matrix: np.ndarray, axes: np.ndarray) -> np.ndarray:
    """sum_+- (Pi_+- (x) I) M (Pi_+- (x) I) for every axis, shape (k, 4, 4)."""
    projectors = _local_projectors(axes)
    return np.einsum("kmab,bc,kmcd->kad", projectors, matrix, projectors)


def projective_measure_A(matrix: np.ndarray, measurement: AxisLike) -> np.ndarray:
    """Non-selective measurement of qubit A along ``measurement`` applied to a 4x4 operator."""
    return _dephase_batch(np.asarray(matrix, dtype=complex), _axis(measurement)[None, :])[0]


def _bloch_states(vectors: np.ndarray) -> np.ndarray:
    """(I + b.sigma)/2 for a batch of Bloch vectors (k, 3)."""
    return 0.5 * (IDENTITY_2 + np.einsum("ki,iab->kab", vectors.astype(complex), _PAULI_STACK))


def _cq_matrices(x: np.ndarray) -> np.ndarray:
    """
    CQ states from rows x = (phi, lam, p, b1, b2) of shape (k, 9).

    Rows must already be feasible (p in [0, 1], |b| <= 1).
    """
    phi, lam, p = x[:, 0], x[:, 1], x[:, 2]
    axes = np.stack([np.sin(phi) * np.cos(lam), np.sin(phi) * np.sin(lam), np.cos(phi)], axis=-1)
    ops = np.einsum("ki,iab->kab", axes.astype(complex), _PAULI_STACK)
    plus = 0.5 * (IDENTITY_2 + ops)
    minus = 0.5 * (IDENTITY_2 - ops)
    rho1 = _bloch_states(x[:, 3:6])
    rho2 = _bloch_states(x[:, 6:9])
    first = np.einsum("kab,kcd->kacbd", plus, rho1).reshape(-1, 4, 4)
    second = np.einsum("kab,kcd->kacbd", minus, rho2).reshape(-1, 4, 4)
    return p[:, None, None] * first + (1.0 - p)[:, None, None] * second


def _project_cq(x: np.ndarray) -> np.ndarray:
    x = np.array(x, dtype=float)
    x[:, 2] = np.clip(x[:, 2], 0.0, 1.0)
    for block in (slice(3, 6), slice(6, 9)):
        norms = np.linalg.norm(x[:, block], axis=1, keepdims=True)
        x[:, block] /= np.maximum(norms, 1.0)
    return x


def cq_assemble(state: CQState) -> DensityMatrix:
    """
    p Pi_1 (x) rho_1 + (1 - p) Pi_2 (x) rho_2.

    Raises:
        InvalidSpecError: if a Bloch vector lies outside the unit ball
    """
    b1 = np.asarray(state.b1, dtype=float)
    b2 = np.asarray(state.b2, dtype=float)
    for name, b in (("b1", b1), ("b2", b2)):
        if np.linalg.norm(b) > 1.0 + _BLOCH_TOLERANCE:
            raise InvalidSpecError(f"{name} has norm {np.linalg.norm(b):.15g} > 1")
    plus, minus = state.measurement.projectors()
    rho1 = _bloch_states(b1[None, :])[0]
    rho2 = _bloch_states(b2[None, :])[0]
    matrix = state.p * np.kron(plus, rho1) + (1.0 - state.p) * np.kron(minus, rho2)
    return DensityMatrix(matrix)


def cq_decompose(matrix: np.ndarray, measurement: AxisLike) -> np.ndarray:
    """
    Parameters (phi, lam, p, b1, b2) of the CQ state obtained by measuring A
    along ``measurement``; an empty branch gets a zero Bloch vector.
    """
    u = _axis(measurement)
    projectors = _local_projectors(u[None, :])[0]
    params = np.zeros(9)
    params[0] = math.acos(max(-1.0, min(1.0, u[2])))
    params[1] = math.atan2(u[1], u[0])
    weights = []
    for k, block in enumerate((slice(3, 6), slice(6, 9))):
        branch = projectors[k] @ matrix @ projectors[k]
        weight = float(np.real(np.trace(branch)))
        weights.append(weight)
        if weight > _BLOCH_TOLERANCE:
            reduced = np.einsum("ijik->jk", branch.reshape(2, 2, 2, 2)) / weight
            params[block] = np.real(np.einsum("ab,iba->i", reduced, _PAULI_STACK))
    params[2] = weights[0] / max(sum(weights), _BLOCH_TOLERANCE)
    return _project_cq(params[None, :])[0]


def hellinger_gqd_bruteforce(
    rho: DensityMatrix, grid_level: Optional[int] = None, settings: Optional[Settings] = None
) -> OracleResult:
    """
    min_u 2 ||sqrt(rho) - Pi_u(sqrt(rho))||_2^2.

    Dense 2^L x 2^(L+1) angle grid, then compass refinement of the best
    grid point.
    """
    settings = settings or get_settings()
    level = settings.oracle_grid_level if grid_level is None else grid_level
    root = rho.sqrt(settings.tolerances)

    def objective(axes: np.ndarray) -> np.ndarray:
        residual = root - _dephase_batch(root, axes)
        return 2.0 * np.sum(np.abs(residual) ** 2, axis=(-2, -1))

    grid = level_grid(level)
    values = objective(grid)
    best = int(np.argmin(values))
    refined = compass_search_sphere(
        objective, grid[best], math.pi / 2 ** level, 1e-10,
        max_polls=settings.bures_max_polls, value0=float(values[best]),
    )
    return OracleResult(
        value=refined.value,
        diagnostics={
            "grid_level": level,
            "grid_value": float(values[best]),
            "argmin": refined.x.tolist(),
            "polls": refined.polls,
        },
    )


def trace_gqd_bruteforce(
    rho: DensityMatrix,
    starts: Optional[int] = None,
    iterations: Optional[int] = None,
    seed: Optional[int] = None,
    scramble: Optional[bool] = None,
    settings: Optional[Settings] = None,
) -> OracleResult:
    """
    min over CQ states chi of ||rho - chi||_1.

    Starts are the z, x and y axes followed by Halton directions, the plain
    sequence unless a seed is given (argument or ``oracle_seed``), which
    scrambles it. Each start first minimises the distance to the dephased
    state Pi_u(rho) over the axis, then polishes all nine CQ parameters
    from the decomposition of that dephased state. The result is an upper bound on the true minimum.
    """
    settings = settings or get_settings()
    starts = settings.oracle_starts if starts is None else starts
    iterations = settings.oracle_iterations if iterations is None else iterations
    seed = settings.oracle_seed if seed is None else seed
    scramble = seed is not None if scramble is None else scramble
    tol = settings.tolerances
    matrix = rho.matrix

    axes = np.vstack([np.eye(3)[[2, 0, 1]], halton_directions(max(0, starts - 3), seed, scramble)])[:starts]

    def dephasing_distance(batch: np.ndarray) -> np.ndarray:
        return trace_norms(matrix - _dephase_batch(matrix, batch), tol)

    def cq_distance(batch: np.ndarray) -> np.ndarray:
        return trace_norms(matrix - _cq_matrices(batch), tol)

    start_values = []
    best = None
    for index, axis in enumerate(axes):
        stage_a = compass_search_sphere(dephasing_distance, axis, math.pi / 8, 1e-9, max_polls=iterations)
        x0 = cq_decompose(matrix, stage_a.x)
        stage_b = compass_search(cq_distance, x0, 0.05, 1e-9, iterations, project=_project_cq)
        value = min(stage_a.value, stage_b.value)
        start_values.append(value)
        logger.debug(f"Trace oracle start {index}: dephasing {stage_a.value:.3e}, polished {stage_b.value:.3e}")
        if best is None or value < best[0]:
            best = (value, index, stage_b.step)

    return OracleResult(
        value=best[0],
        diagnostics={
            "best_start": best[1],
            "final_step": best[2],
            "start_values": start_values,
            "seed": seed,
            "scrambled": scramble,
        },
    )


def bures_maxfid_grid(
    rho: DensityMatrix, grid_level: Optional[int] = None, settings: Optional[Settings] = None
) -> OracleResult:
    """Largest value of the Bures maximand on the plain 2^L x 2^(L+1) grid, no refinement."""
    settings = settings or get_settings()
    level = settings.oracle_bures_grid_level if grid_level is None else grid_level
    root = rho.sqrt(settings.tolerances)
    grid = level_grid(level)

    best_value, best_index = -math.inf, 0
    for offset in range(0, grid.shape[0], _BURES_CHUNK):
        values = bures_maximand(root, grid[offset:offset + _BURES_CHUNK], settings.tolerances)
        k = int(np.argmax(values))
        if values[k] > best_value:
            best_value, best_index = float(values[k]), offset + k

    return OracleResult(
        value=best_value,
        diagnostics={"grid_level": level, "points": int(grid.shape[0]), "argmax": grid[best_index].tolist()},
    )
