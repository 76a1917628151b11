"""
Measure service: one entry point that evaluates any subset of the three
discords for a model point or a bare density matrix, by the requested
computation path.
"""

import logging
from typing import Dict, Iterable, Optional, Union

from config import Settings, get_settings
from gqd_measures import (
    bures_from_fidelity,
    bures_gqd,
    finalize_result,
    hellinger_gqd,
    hellinger_gqd_from_root,
    hellinger_gqd_model,
    trace_gqd_model,
    trace_gqd_xstate,
    zero_temperature_measures,
)
from models.density import DensityMatrix
from models.params import ModelParams
from models.results import Measure, MeasureResult, Method
from oracles import bures_maxfid_grid, hellinger_gqd_bruteforce, trace_gqd_bruteforce
from spin_model import state_for

logger = logging.getLogger(__name__)

DEFAULT_METHODS = {
    Measure.TRACE: Method.CLOSED_FORM,
    Measure.HELLINGER: Method.CLOSED_FORM,
    Measure.BURES: Method.DEFINITIONAL,
}

Target = Union[ModelParams, DensityMatrix]


def resolve_method(measure: Measure, method: Optional[Method], target: Target) -> Method:
    """
    Method actually used for ``measure``.

    Bures has no closed form and a bare density matrix has no model
    parameters, so both fall back to the definitional path.
    """
    chosen = DEFAULT_METHODS[measure] if method is None else Method(method)
    if chosen is Method.CLOSED_FORM:
        if measure is Measure.BURES:
            logger.warning("No closed form for the Bures discord; using the definitional path")
            return Method.DEFINITIONAL
        if isinstance(target, DensityMatrix) and measure is Measure.HELLINGER:
            return Method.DEFINITIONAL
    return chosen


def _oracle(measure: Measure, rho: DensityMatrix, settings: Settings) -> MeasureResult:
    tol = settings.tolerances
    if measure is Measure.TRACE:
        value, diagnostics = trace_gqd_bruteforce(rho, settings=settings)
    elif measure is Measure.HELLINGER:
        value, diagnostics = hellinger_gqd_bruteforce(rho, settings=settings)
    else:
        fidelity, diagnostics = bures_maxfid_grid(rho, settings=settings)
        value = bures_from_fidelity(fidelity, tol)
        diagnostics = {**diagnostics, "max_fidelity": fidelity}
    return finalize_result(value, measure, Method.ORACLE, diagnostics, tol)


def measure_all(
    target: Target,
    measures: Optional[Iterable[Measure]] = None,
    method: Optional[Method] = None,
    paper_verbatim: bool = False,
    settings: Optional[Settings] = None,
) -> Dict[Measure, MeasureResult]:
    """
    Evaluate the requested discords.

    Args:
        target: Model point (closed forms available) or density matrix
        measures: Subset of measures, all three by default
        method: Computation path; None picks closed_form for trace and
            Hellinger and definitional for Bures
        paper_verbatim: Use the uncorrected Hellinger constants on the
            closed-form path and the uncorrected square root of the Gibbs
            state on the definitional one
        settings: Settings override

    Returns:
        Results keyed by measure, in request order
    """
    settings = settings or get_settings()
    tol = settings.tolerances
    requested = [Measure(m) for m in (measures or list(Measure))]

    rho = None
    if isinstance(target, DensityMatrix):
        rho = target
    elif target.is_zero_temperature and method is not Method.ORACLE:
        return zero_temperature_measures(target, tol, settings, requested)

    results: Dict[Measure, MeasureResult] = {}
    for measure in requested:
        chosen = resolve_method(measure, method, target)
        if chosen is not Method.CLOSED_FORM and rho is None:
            rho = state_for(target, tol)

        if chosen is Method.ORACLE:
            results[measure] = _oracle(measure, rho, settings)
        elif measure is Measure.TRACE:
            if chosen is Method.CLOSED_FORM and isinstance(target, ModelParams):
                results[measure] = trace_gqd_model(target, tol)
            else:
                rho = rho if rho is not None else state_for(target, tol)
                results[measure] = trace_gqd_xstate(rho, tol)
        elif measure is Measure.HELLINGER:
            if chosen is Method.CLOSED_FORM:
                results[measure] = hellinger_gqd_model(target, paper_verbatim, tol)
            elif paper_verbatim and isinstance(target, ModelParams):
                results[measure] = hellinger_gqd_from_root(target, True, tol)
            else:
                results[measure] = hellinger_gqd(rho, tol)
        else:
            results[measure] = bures_gqd(rho, settings)

    logger.debug(
        "Measured " + ", ".join(f"{m.value}={r.value:.6g} ({r.method_label})" for m, r in results.items())
    )
    return results
