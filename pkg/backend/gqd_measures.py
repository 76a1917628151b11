"""
Geometric quantum discords of two-qubit states: trace, Hellinger and Bures.

General-state paths take a DensityMatrix; closed-form paths take
ModelParams of the XX + DM chain. All values land in [0, 1]: anything
outside by more than ``clamp_violation`` raises RangeViolationError,
smaller excursions are clamped.
"""

import logging
import math
from typing import Any, Dict, Iterable, Optional

import numpy as np

from config import Settings, Tolerances, get_settings, get_tolerances
from errors import NotXStateError, RangeViolationError
from linalg_core import (
    dagger,
    hermitian_eig,
    eigvalsh,
    matrix_sqrt_psd,
    pauli_on_a,
)
from models.density import DensityMatrix
from models.params import ModelParams
from models.results import Measure, MeasureResult, Method, XStateParams
from search import compass_search_sphere, sphere_grid
from spin_model import ground_state, scaled_partition_function, sqrt_thermal_state

logger = logging.getLogger(__name__)

BURES_NORMALIZATION = 2.0 + math.sqrt(2.0)
POLAR_THRESHOLD = 1.0 / math.sqrt(2.0)

_PAULIS_ON_A = np.stack([pauli_on_a(i) for i in range(3)])


def finalize_result(
    value: float,
    measure: Measure,
    method: Method,
    diagnostics: Optional[Dict[str, Any]] = None,
    tolerances: Optional[Tolerances] = None,
    paper_verbatim: bool = False,
) -> MeasureResult:
    """Range-check and clamp a raw value into a MeasureResult; paper-verbatim values pass through untouched."""
    tol = tolerances or get_tolerances()
    diagnostics = dict(diagnostics or {})
    if not paper_verbatim:
        if value < -tol.clamp_violation or value > 1.0 + tol.clamp_violation or math.isnan(value):
            raise RangeViolationError(
                f"{measure.value} discord {value!r} outside [0, 1] beyond {tol.clamp_violation:.0e}"
            )
        clamped = min(1.0, max(0.0, value))
        if abs(clamped - value) > 1e-10:
            logger.warning(f"Clamped {measure.value} discord {value:.3e} -> {clamped}")
        value = clamped
    return MeasureResult(
        value=float(value),
        measure=measure,
        method=method,
        paper_verbatim=paper_verbatim,
        diagnostics=diagnostics,
    )


# --- trace distance -------------------------------------------------------


def x_state_params(rho: DensityMatrix, tolerances: Optional[Tolerances] = None) -> XStateParams:
    """
    Extract (gamma1, gamma2, gamma3, x3) of an X state.

    Raises:
        NotXStateError: if an entry outside the diagonal and anti-diagonal exceeds eps_xform
    """
    tol = tolerances or get_tolerances()
    deviation = rho.x_form_deviation()
    if deviation > tol.eps_xform:
        raise NotXStateError(
            f"State is not of X form (largest forbidden entry {deviation:.3e}); use the oracle path"
        )
    m = rho.matrix
    r23 = abs(m[1, 2])
    r14 = abs(m[0, 3])
    return XStateParams(
        gamma1=2.0 * (r23 + r14),
        gamma2=abs(2.0 * (r23 - r14)),
        gamma3=float(1.0 - 2.0 * (m[1, 1].real + m[2, 2].real)),
        x3=float(2.0 * (m[0, 0].real + m[1, 1].real) - 1.0),
    )


def trace_gqd_xstate(rho: DensityMatrix, tolerances: Optional[Tolerances] = None) -> MeasureResult:
    """
    Trace-distance discord of an X state.

    Q_T^2 = (g1^2 a - g2^2 b) / (a - b + g1^2 - g2^2) with
    a = max(g3^2, g2^2 + x3^2) and b = min(g1^2, g3^2), evaluated in the
    cancellation-free form g2^2 + (g1^2 - g2^2)(a - g2^2) / (a - b + g1^2 - g2^2).
    A vanishing denominator forces g1 = g2 and the value is g1.
    """
    tol = tolerances or get_tolerances()
    x = x_state_params(rho, tol)
    g1, g2, g3, x3 = x.gamma1 ** 2, x.gamma2 ** 2, x.gamma3 ** 2, x.x3 ** 2
    upper = max(g3, g2 + x3)
    lower = min(g1, g3)
    denominator = upper - lower + g1 - g2

    if denominator > 0.0:
        value = math.sqrt(max(0.0, g2 + (g1 - g2) * (upper - g2) / denominator))
    else:
        value = x.gamma1
    degenerate = denominator < tol.eps_den

    return finalize_result(
        value,
        Measure.TRACE,
        Method.DEFINITIONAL,
        {"x_state": x.model_dump(), "degenerate_denominator": degenerate},
        tol,
    )


def trace_gqd_model(params: ModelParams, tolerances: Optional[Tolerances] = None) -> MeasureResult:
    """Q_T = 2 sinh(2 beta delta)/Z; T = 0 is answered from the ground state."""
    if params.is_zero_temperature:
        return zero_temperature_measures(params, tolerances, measures=[Measure.TRACE])[Measure.TRACE]
    z_scaled, e = scaled_partition_function(params)
    bd = 2.0 * params.beta * params.delta
    value = (math.exp(bd - e) - math.exp(-bd - e)) / z_scaled
    return finalize_result(value, Measure.TRACE, Method.CLOSED_FORM, {}, tolerances)


def trace_gqd_derivative(params: ModelParams) -> float:
    """
    dQ_T/d delta = (8 beta / Z^2)(1 + cosh 2 beta delta cosh 2 beta B).

    Always positive for T > 0: the trace discord grows with the effective coupling.
    """
    z_scaled, e = scaled_partition_function(params)
    beta = params.beta
    bd = 2.0 * beta * params.delta
    bb = 2.0 * beta * params.B
    cosh_d = 0.5 * (math.exp(bd - e) + math.exp(-bd - e))
    cosh_b = 0.5 * (math.exp(bb - e) + math.exp(-bb - e))
    return 8.0 * beta * (math.exp(-2.0 * e) + cosh_d * cosh_b) / (z_scaled * z_scaled)


# --- Hellinger distance ---------------------------------------------------


def _correlation_from_root(root: np.ndarray) -> np.ndarray:
    sandwiched = root @ _PAULIS_ON_A @ root
    w = np.real(np.einsum("iab,jba->ij", sandwiched, _PAULIS_ON_A))
    return 0.5 * (w + w.T)


def correlation_matrix_w(rho: DensityMatrix, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """W_ij = Tr[sqrt(rho) (s_i (x) I) sqrt(rho) (s_j (x) I)], a real symmetric 3x3 matrix."""
    return _correlation_from_root(rho.sqrt(tolerances))


def _hellinger_branch(w: np.ndarray, tol: Tolerances) -> str:
    transverse = float(eigvalsh(w[:2, :2].astype(complex), tol)[0])
    return "lambda1" if transverse >= w[2, 2] - tol.eps_recon else "lambda2"


def _hellinger_from_w(w: np.ndarray, tol: Tolerances, paper_verbatim: bool = False) -> MeasureResult:
    eigenvalues = hermitian_eig(w.astype(complex), tol).eigenvalues
    lambda_max = float(eigenvalues[0])
    return finalize_result(
        1.0 - lambda_max,
        Measure.HELLINGER,
        Method.DEFINITIONAL,
        {
            "lambda_max": lambda_max,
            "eigenvalues": eigenvalues.tolist(),
            "branch": _hellinger_branch(w, tol),
        },
        tol,
        paper_verbatim=paper_verbatim,
    )


def hellinger_gqd(rho: DensityMatrix, tolerances: Optional[Tolerances] = None) -> MeasureResult:
    """Q_H = 1 - lambda_max(W)."""
    tol = tolerances or get_tolerances()
    return _hellinger_from_w(correlation_matrix_w(rho, tol), tol)


def hellinger_gqd_from_root(
    params: ModelParams,
    paper_verbatim: bool = False,
    tolerances: Optional[Tolerances] = None,
) -> MeasureResult:
    """
    Q_H = 1 - lambda_max(W) with W built from the closed-form square root
    of the Gibbs state; ``paper_verbatim`` uses the printed 2 cosh / 2 sinh
    middle block, whose result is tagged and left unclamped.
    """
    tol = tolerances or get_tolerances()
    root = sqrt_thermal_state(params, paper_verbatim)
    return _hellinger_from_w(_correlation_from_root(root), tol, paper_verbatim)


def hellinger_eigenvalues(params: ModelParams, paper_verbatim: bool = False) -> Dict[str, float]:
    """
    (lambda1, lambda2) of the Gibbs state's W matrix.

    lambda1 = 4 cosh(beta delta) cosh(beta B)/Z is the doubly degenerate
    transverse eigenvalue, lambda2 = (2 + 2 cosh 2 beta B)/Z the z one. The
    ``paper_verbatim`` variant uses 8 and 8 + 2 cosh 2 beta B, which exceed 1
    at high temperature.
    """
    z_scaled, e = scaled_partition_function(params)
    beta = params.beta
    half = 0.5 * e
    bd = beta * params.delta
    bb = beta * params.B
    cosh_d = 0.5 * (math.exp(bd - half) + math.exp(-bd - half))
    cosh_b = 0.5 * (math.exp(bb - half) + math.exp(-bb - half))
    constant = 8.0 if paper_verbatim else 2.0
    lambda1 = (8.0 if paper_verbatim else 4.0) * cosh_d * cosh_b / z_scaled
    lambda2 = (constant * math.exp(-e) + math.exp(2.0 * bb - e) + math.exp(-2.0 * bb - e)) / z_scaled
    return {"lambda1": lambda1, "lambda2": lambda2}


def hellinger_gqd_model(
    params: ModelParams,
    paper_verbatim: bool = False,
    tolerances: Optional[Tolerances] = None,
) -> MeasureResult:
    """Q_H = 1 - max(lambda1, lambda2); T = 0 is answered from the ground state."""
    if params.is_zero_temperature:
        return zero_temperature_measures(params, tolerances, measures=[Measure.HELLINGER])[Measure.HELLINGER]
    lambdas = hellinger_eigenvalues(params, paper_verbatim)
    branch = "lambda1" if lambdas["lambda1"] >= lambdas["lambda2"] else "lambda2"
    return finalize_result(
        1.0 - max(lambdas.values()),
        Measure.HELLINGER,
        Method.CLOSED_FORM,
        {**lambdas, "branch": branch},
        tolerances,
        paper_verbatim=paper_verbatim,
    )


# --- Bures distance -------------------------------------------------------


def bures_maximand(root: np.ndarray, axes: np.ndarray, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    f(u) = (1 - Tr L + 2 (l1 + l2)) / 2 with L = sqrt(rho) (u.s (x) I) sqrt(rho)
    and l1 >= l2 its two largest eigenvalues, for a batch of axes (k, 3).
    """
    axes = np.atleast_2d(np.asarray(axes, dtype=float))
    operators = np.einsum("ki,iab->kab", axes.astype(complex), _PAULIS_ON_A)
    lam = root @ operators @ root
    lam = 0.5 * (lam + dagger(lam))
    eigenvalues = eigvalsh(lam, tolerances)
    trace = np.real(np.trace(lam, axis1=-2, axis2=-1))
    return 0.5 * (1.0 - trace + 2.0 * (eigenvalues[:, 0] + eigenvalues[:, 1]))


def _angular_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.arccos(np.clip(np.dot(a, b), -1.0, 1.0))


def _grid_candidates(grid: np.ndarray, values: np.ndarray, separation: float, count: int = 2) -> list:
    """Indices of the best grid points, pairwise more than ``separation`` apart (antipodes included)."""
    chosen = []
    for index in np.argsort(-values, kind="stable"):
        u = grid[index]
        if all(
            _angular_distance(u, grid[j]) > separation and _angular_distance(-u, grid[j]) > separation
            for j in chosen
        ):
            chosen.append(int(index))
        if len(chosen) == count:
            break
    return chosen


def bures_maximize(rho: DensityMatrix, settings: Optional[Settings] = None) -> Dict[str, Any]:
    """
    max_u f(u) over the unit sphere.

    Coarse latitude-longitude grid, then the two best well-separated grid
    points are refined by compass search in rounds that stop at the step
    sizes of ``bures_refine_steps``.
    """
    settings = settings or get_settings()
    tol = settings.tolerances
    root = rho.sqrt(tol)

    def objective(axes: np.ndarray) -> np.ndarray:
        return bures_maximand(root, axes, tol)

    grid = sphere_grid(settings.bures_grid_lat, settings.bures_grid_lon)
    grid_values = objective(grid)
    spacing = math.pi / (settings.bures_grid_lat - 1)
    grid_best = float(np.max(grid_values))

    best = None
    for index in _grid_candidates(grid, grid_values, 2.0 * spacing):
        u, value, step = grid[index], float(grid_values[index]), spacing
        rounds = []
        improved = False
        polls = 0
        for min_step in settings.bures_refine_steps:
            result = compass_search_sphere(
                objective, u, step, min_step,
                maximize=True, max_polls=settings.bures_max_polls, value0=value,
            )
            u, value, step = result.x, result.value, result.step
            improved = improved or result.improved
            polls += result.polls
            rounds.append(value)
        if best is None or value > best["max_fidelity"]:
            best = {"max_fidelity": value, "argmax": u, "rounds": rounds, "improved": improved, "polls": polls}

    if not best["improved"]:
        logger.debug(f"Bures refinement did not improve on the grid maximum {grid_best:.15g}")

    u = best["argmax"]
    return {
        "max_fidelity": best["max_fidelity"],
        "argmax": u.tolist(),
        "grid_value": grid_best,
        "round_values": best["rounds"],
        "polls": best["polls"],
        "grid": [settings.bures_grid_lat, settings.bures_grid_lon],
        "refinement_stalled": not best["improved"],
        "branch": "polar" if abs(u[2]) > POLAR_THRESHOLD else "equatorial",
    }


def bures_from_fidelity(max_fidelity: float, tolerances: Optional[Tolerances] = None) -> float:
    """sqrt((2 + sqrt 2)(1 - sqrt F)) after checking F against [0, 1]."""
    tol = tolerances or get_tolerances()
    if max_fidelity > 1.0 + tol.clamp_violation or max_fidelity < -tol.clamp_violation:
        raise RangeViolationError(f"maximal fidelity {max_fidelity!r} outside [0, 1]")
    fidelity = min(1.0, max(0.0, max_fidelity))
    return math.sqrt(BURES_NORMALIZATION * (1.0 - math.sqrt(fidelity)))


def bures_gqd(rho: DensityMatrix, settings: Optional[Settings] = None) -> MeasureResult:
    """Q_B = sqrt((2 + sqrt 2)(1 - sqrt(max_u f(u))))."""
    settings = settings or get_settings()
    diagnostics = bures_maximize(rho, settings)
    value = bures_from_fidelity(diagnostics["max_fidelity"], settings.tolerances)
    return finalize_result(value, Measure.BURES, Method.DEFINITIONAL, diagnostics, settings.tolerances)


def uhlmann_fidelity(rho: DensityMatrix, chi: DensityMatrix, tolerances: Optional[Tolerances] = None) -> float:
    """F = (Tr sqrt(sqrt(rho) chi sqrt(rho)))^2."""
    root = rho.sqrt(tolerances)
    inner = matrix_sqrt_psd(root @ chi.matrix @ root, tolerances)
    fidelity = float(np.real(np.trace(inner))) ** 2
    return min(1.0, max(0.0, fidelity))


# --- zero temperature -----------------------------------------------------


def zero_temperature_measures(
    params: ModelParams,
    tolerances: Optional[Tolerances] = None,
    settings: Optional[Settings] = None,
    measures: Optional[Iterable[Measure]] = None,
) -> Dict[Measure, MeasureResult]:
    """
    Discords of the ground state: 1 when delta > |B|, 0 when delta < |B| and
    1/2 (trace, Hellinger) or about 0.5098 (Bures) on the degenerate line.
    """
    settings = settings or get_settings()
    tol = tolerances or settings.tolerances
    rho = ground_state(params, tol)
    evaluators = {
        Measure.TRACE: lambda: trace_gqd_xstate(rho, tol),
        Measure.HELLINGER: lambda: hellinger_gqd(rho, tol),
        Measure.BURES: lambda: bures_gqd(rho, settings),
    }
    results = {}
    for measure in measures or list(Measure):
        result = evaluators[Measure(measure)]()
        results[Measure(measure)] = result.model_copy(
            update={"diagnostics": {**result.diagnostics, "zero_temperature": True}}
        )
    return results
