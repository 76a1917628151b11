"""Tests for the trace, Hellinger and Bures discords."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings as hypothesis_settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from errors import NotXStateError, RangeViolationError
from gqd_measures import (
    BURES_NORMALIZATION,
    bures_from_fidelity,
    bures_gqd,
    bures_maximize,
    correlation_matrix_w,
    finalize_result,
    hellinger_eigenvalues,
    hellinger_gqd,
    hellinger_gqd_from_root,
    hellinger_gqd_model,
    trace_gqd_derivative,
    trace_gqd_model,
    trace_gqd_xstate,
    uhlmann_fidelity,
    x_state_params,
    zero_temperature_measures,
)
from models.density import DensityMatrix
from models.params import ModelParams
from models.results import Measure, Method
from spin_model import KET_11, thermal_state

couplings = st.floats(min_value=-4.0, max_value=4.0, allow_nan=False)
temperatures = st.floats(min_value=0.1, max_value=5.0, allow_nan=False)
DEGENERATE = ModelParams(J=1.0, B=1.5, D=math.sqrt(5.0) / 2.0, T=0.0)


# --- trace distance -------------------------------------------------------


def test_reference_trace_discord(reference_params):
    result = trace_gqd_model(reference_params)
    assert result.value == pytest.approx(math.tanh(1.0), abs=1e-12)
    assert result.value == pytest.approx(0.76160, abs=1e-5)
    assert result.method is Method.CLOSED_FORM


def test_reference_trace_discord_from_state(reference_params):
    result = trace_gqd_xstate(thermal_state(reference_params))
    assert result.value == pytest.approx(0.76160, abs=1e-5)
    assert result.method is Method.DEFINITIONAL


@hypothesis_settings(max_examples=50, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_trace_closed_form_matches_x_state_formula(j, b, d, t):
    params = ModelParams(J=j, B=b, D=d, T=t)
    assert trace_gqd_model(params).value == pytest.approx(trace_gqd_xstate(thermal_state(params)).value, abs=1e-10)


def test_trace_formula_is_stable_at_low_temperature():
    params = ModelParams(J=2.187, B=1.480, D=2.423, T=0.1817)
    result = trace_gqd_xstate(thermal_state(params))
    assert result.value == pytest.approx(trace_gqd_model(params).value, abs=1e-10)


@hypothesis_settings(max_examples=30, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_trace_discord_invariant_under_sign_flips(j, b, d, t):
    value = trace_gqd_model(ModelParams(J=j, B=b, D=d, T=t)).value
    assert trace_gqd_model(ModelParams(J=-j, B=-b, D=-d, T=t)).value == pytest.approx(value, abs=1e-12)


def test_x_state_params_of_thermal_state(reference_params):
    x = x_state_params(thermal_state(reference_params))
    assert x.gamma1 == pytest.approx(x.gamma2)
    assert x.gamma1 == pytest.approx(math.tanh(1.0))
    assert x.x3 == pytest.approx(0.0, abs=1e-14)


def test_trace_formula_refuses_non_x_states(bell_state):
    plus = np.array([1.0, 1.0, 0.0, 0.0]) / math.sqrt(2.0)
    with pytest.raises(NotXStateError):
        trace_gqd_xstate(DensityMatrix.from_ket(plus))
    assert trace_gqd_xstate(bell_state).value == pytest.approx(1.0)


def test_trace_discord_of_product_state():
    result = trace_gqd_xstate(DensityMatrix.from_ket(KET_11))
    assert result.value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("params", [
    ModelParams(J=1.0, B=0.0, D=0.0, T=1.0),
    ModelParams(J=0.5, B=1.2, D=0.0, T=0.7),
    ModelParams(J=2.0, B=-0.4, D=0.0, T=2.5),
])
def test_trace_derivative_matches_finite_difference(params):
    h = 1e-6
    upper = trace_gqd_model(params.replace(J=params.J + h)).value
    lower = trace_gqd_model(params.replace(J=params.J - h)).value
    assert trace_gqd_derivative(params) == pytest.approx((upper - lower) / (2.0 * h), rel=1e-6)
    assert trace_gqd_derivative(params) > 0.0


def test_trace_discord_grows_with_dm_strength():
    values = [trace_gqd_model(ModelParams(J=1.0, B=1.0, D=d, T=0.5)).value for d in np.linspace(0.0, 6.0, 61)]
    assert np.all(np.diff(values) > 0.0)


# --- Hellinger distance ---------------------------------------------------


def test_reference_hellinger_discord(reference_params):
    result = hellinger_gqd_model(reference_params)
    assert result.value == pytest.approx(1.0 - 4.0 * math.cosh(1.0) / (2.0 * math.cosh(2.0) + 2.0), abs=1e-12)
    assert result.value == pytest.approx(0.35194, abs=1e-5)
    assert result.branch == "lambda1"


@hypothesis_settings(max_examples=30, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_hellinger_closed_form_matches_definition(j, b, d, t):
    params = ModelParams(J=j, B=b, D=d, T=t)
    assert hellinger_gqd_model(params).value == pytest.approx(hellinger_gqd(thermal_state(params)).value, abs=1e-10)


def test_hellinger_definition_keeps_tiny_gibbs_weights():
    params = ModelParams(J=1.434, B=2.341, D=2.163, T=0.2533)
    assert hellinger_gqd(thermal_state(params)).value == pytest.approx(hellinger_gqd_model(params).value, abs=1e-10)


@hypothesis_settings(max_examples=30, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_hellinger_from_closed_square_root(j, b, d, t):
    params = ModelParams(J=j, B=b, D=d, T=t)
    result = hellinger_gqd_from_root(params)
    assert result.value == pytest.approx(hellinger_gqd(thermal_state(params)).value, abs=1e-12)
    assert result.method is Method.DEFINITIONAL
    assert not result.paper_verbatim


def test_verbatim_square_root_path_is_tagged(reference_params):
    result = hellinger_gqd_from_root(reference_params, paper_verbatim=True)
    assert result.method_label == "definitional+paper_verbatim"
    assert result.value < 0.0


@hypothesis_settings(max_examples=60, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_hellinger_branch_follows_coupling_against_field(j, b, d, t):
    params = ModelParams(J=j, B=b, D=d, T=t)
    assume(abs(params.delta - abs(b)) > 1e-3)
    lambdas = hellinger_eigenvalues(params)
    assert np.sign(lambdas["lambda1"] - lambdas["lambda2"]) == np.sign(params.delta - abs(b))
    expected = "lambda1" if params.delta > abs(b) else "lambda2"
    assert hellinger_gqd_model(params).branch == expected


@hypothesis_settings(max_examples=30, deadline=None)
@given(couplings, couplings, couplings, temperatures)
def test_correlation_matrix_is_bounded(j, b, d, t):
    w = correlation_matrix_w(thermal_state(ModelParams(J=j, B=b, D=d, T=t)))
    eigenvalues = np.linalg.eigvalsh(w)
    assert_allclose(w, w.T)
    assert eigenvalues.min() >= -1e-10
    assert eigenvalues.max() <= 1.0 + 1e-10


def test_correlation_matrix_matches_closed_eigenvalues():
    params = ModelParams(J=1.0, B=0.8, D=0.6, T=0.9)
    w = correlation_matrix_w(thermal_state(params))
    lambdas = hellinger_eigenvalues(params)
    assert_allclose(np.diag(w), [lambdas["lambda1"], lambdas["lambda1"], lambdas["lambda2"]], atol=1e-10)


def test_hellinger_branch_switches_where_coupling_meets_field():
    below = hellinger_gqd_model(ModelParams(J=1.0, B=1.5, D=1.0, T=0.5))
    above = hellinger_gqd_model(ModelParams(J=1.0, B=1.5, D=1.3, T=0.5))
    assert below.branch == "lambda2"
    assert above.branch == "lambda1"


def test_hellinger_of_maximally_entangled_state(bell_state):
    assert hellinger_gqd(bell_state).value == pytest.approx(1.0, abs=1e-10)


def test_verbatim_constants_leave_the_unit_interval():
    result = hellinger_gqd_model(ModelParams(J=1.0, B=0.0, D=0.0, T=1e4), paper_verbatim=True)
    assert result.value == pytest.approx(-1.5, abs=1e-3)
    assert result.paper_verbatim
    assert result.method_label == "closed_form+paper_verbatim"


def test_corrected_constants_vanish_at_infinite_temperature():
    assert hellinger_gqd_model(ModelParams(J=1.0, B=0.5, D=2.0, T=1e6)).value == pytest.approx(0.0, abs=1e-6)


# --- Bures distance -------------------------------------------------------


def test_bures_normalization_maps_zero_fidelity_to_one():
    assert bures_from_fidelity(0.5) == pytest.approx(math.sqrt(BURES_NORMALIZATION * (1.0 - math.sqrt(0.5))))
    assert bures_from_fidelity(1.0) == 0.0
    with pytest.raises(RangeViolationError):
        bures_from_fidelity(1.1)


def test_bures_of_product_state_is_zero(fast_settings):
    result = bures_gqd(DensityMatrix.from_ket(KET_11), fast_settings)
    assert result.value == pytest.approx(0.0, abs=1e-7)


def test_bures_of_maximally_entangled_state(bell_state, fast_settings):
    result = bures_gqd(bell_state, fast_settings)
    assert result.value == pytest.approx(1.0, abs=1e-6)


def test_bures_at_degenerate_ground_level(fast_settings):
    results = zero_temperature_measures(DEGENERATE, settings=fast_settings)
    assert results[Measure.TRACE].value == pytest.approx(0.5, abs=1e-10)
    assert results[Measure.HELLINGER].value == pytest.approx(0.5, abs=1e-10)
    assert results[Measure.BURES].value == pytest.approx(0.5098, abs=1e-4)
    assert results[Measure.BURES].diagnostics["max_fidelity"] == pytest.approx((2.0 + math.sqrt(2.0)) / 4.0, abs=1e-4)
    assert all(r.diagnostics["zero_temperature"] for r in results.values())


@pytest.mark.parametrize("params, expected", [
    (ModelParams(J=1.0, B=0.5, D=0.0, T=0.0), 1.0),
    (ModelParams(J=1.0, B=3.0, D=0.0, T=0.0), 0.0),
    (ModelParams(J=1.0, B=-3.0, D=1.0, T=0.0), 0.0),
])
def test_zero_temperature_values(params, expected, fast_settings):
    for result in zero_temperature_measures(params, settings=fast_settings).values():
        assert result.value == pytest.approx(expected, abs=1e-7)


def test_bures_diagnostics(reference_params, fast_settings):
    diagnostics = bures_maximize(thermal_state(reference_params), fast_settings)
    assert diagnostics["max_fidelity"] >= diagnostics["grid_value"] - 1e-15
    assert diagnostics["grid"] == [17, 32]
    assert len(diagnostics["round_values"]) == len(fast_settings.bures_refine_steps)
    assert np.linalg.norm(diagnostics["argmax"]) == pytest.approx(1.0)
    assert diagnostics["branch"] in ("polar", "equatorial")


@pytest.mark.slow
def test_bures_lies_between_zero_and_one(rng, fast_settings):
    for _ in range(5):
        j, b, d = rng.uniform(-4.0, 4.0, size=3)
        params = ModelParams(J=j, B=b, D=d, T=rng.uniform(0.1, 5.0))
        result = bures_gqd(thermal_state(params), fast_settings)
        assert 0.0 <= result.value <= 1.0


def test_uhlmann_fidelity_of_identical_and_orthogonal_states(bell_state):
    assert uhlmann_fidelity(bell_state, bell_state) == pytest.approx(1.0, abs=1e-10)
    assert uhlmann_fidelity(bell_state, DensityMatrix.from_ket(KET_11)) == pytest.approx(0.0, abs=1e-10)


# --- range handling -------------------------------------------------------


def test_finalize_clamps_rounding_noise():
    result = finalize_result(1.0 + 1e-9, Measure.TRACE, Method.CLOSED_FORM)
    assert result.value == 1.0


def test_finalize_rejects_out_of_range_values():
    with pytest.raises(RangeViolationError):
        finalize_result(1.1, Measure.TRACE, Method.CLOSED_FORM)
    with pytest.raises(RangeViolationError):
        finalize_result(float("nan"), Measure.HELLINGER, Method.DEFINITIONAL)


def test_finalize_leaves_verbatim_values_alone():
    result = finalize_result(-1.2, Measure.HELLINGER, Method.CLOSED_FORM, paper_verbatim=True)
    assert result.value == -1.2
