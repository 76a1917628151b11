"""Tests for method resolution and the measure_all entry point."""

import math

import pytest

from measure_service import measure_all, resolve_method
from models.params import ModelParams
from models.results import Measure, Method
from spin_model import thermal_state


def test_default_methods(reference_params):
    assert resolve_method(Measure.TRACE, None, reference_params) is Method.CLOSED_FORM
    assert resolve_method(Measure.HELLINGER, None, reference_params) is Method.CLOSED_FORM
    assert resolve_method(Measure.BURES, None, reference_params) is Method.DEFINITIONAL


def test_closed_form_bures_falls_back(reference_params, caplog):
    assert resolve_method(Measure.BURES, Method.CLOSED_FORM, reference_params) is Method.DEFINITIONAL
    assert "Bures" in caplog.text


def test_closed_form_hellinger_needs_model_parameters(reference_params):
    rho = thermal_state(reference_params)
    assert resolve_method(Measure.HELLINGER, Method.CLOSED_FORM, rho) is Method.DEFINITIONAL
    assert resolve_method(Measure.TRACE, Method.CLOSED_FORM, rho) is Method.CLOSED_FORM


def test_measure_all_reference_point(reference_params, fast_settings):
    results = measure_all(reference_params, settings=fast_settings)
    assert list(results) == [Measure.TRACE, Measure.HELLINGER, Measure.BURES]
    assert results[Measure.TRACE].value == pytest.approx(0.76160, abs=1e-5)
    assert results[Measure.HELLINGER].value == pytest.approx(0.35194, abs=1e-5)
    assert 0.0 < results[Measure.BURES].value < 1.0
    assert results[Measure.BURES].method is Method.DEFINITIONAL


def test_measure_all_definitional_path_agrees(reference_params, fast_settings):
    closed = measure_all(reference_params, [Measure.TRACE, Measure.HELLINGER], settings=fast_settings)
    definitional = measure_all(
        reference_params, [Measure.TRACE, Measure.HELLINGER], Method.DEFINITIONAL, settings=fast_settings
    )
    for measure in closed:
        assert definitional[measure].method is Method.DEFINITIONAL
        assert definitional[measure].value == pytest.approx(closed[measure].value, abs=1e-10)


def test_measure_all_oracle_path(reference_params, fast_settings):
    results = measure_all(reference_params, [Measure.HELLINGER, Measure.BURES], Method.ORACLE, settings=fast_settings)
    assert results[Measure.HELLINGER].value == pytest.approx(0.35194, abs=1e-5)
    assert results[Measure.HELLINGER].method_label == "oracle"
    assert "max_fidelity" in results[Measure.BURES].diagnostics


def test_measure_all_accepts_density_matrix(bell_state, fast_settings):
    results = measure_all(bell_state, settings=fast_settings)
    assert all(r.value == pytest.approx(1.0, abs=1e-6) for r in results.values())
    assert results[Measure.HELLINGER].method is Method.DEFINITIONAL


def test_measure_all_zero_temperature(fast_settings):
    params = ModelParams(J=1.0, B=1.5, D=math.sqrt(5.0) / 2.0, T=0.0)
    results = measure_all(params, settings=fast_settings)
    assert results[Measure.TRACE].value == pytest.approx(0.5)
    assert results[Measure.BURES].value == pytest.approx(0.5098, abs=1e-4)


def test_measure_all_paper_verbatim_tag(reference_params):
    results = measure_all(reference_params, [Measure.HELLINGER], paper_verbatim=True)
    assert results[Measure.HELLINGER].method_label == "closed_form+paper_verbatim"
