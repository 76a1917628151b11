"""Tests for the brute-force oracles and the classical-quantum state helpers."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_density_matrix
from errors import InvalidSpecError
from gqd_measures import bures_maximize, correlation_matrix_w, hellinger_gqd
from linalg_core import matrix_sqrt_psd
from models.density import DensityMatrix
from models.params import ModelParams
from models.states import BlochMeasurement, CQState
from oracles import (
    bures_maxfid_grid,
    cq_assemble,
    cq_decompose,
    hellinger_gqd_bruteforce,
    projective_measure_A,
    trace_gqd_bruteforce,
)
from spin_model import ground_state, thermal_state
from verification import random_cq_state


def test_projective_measurement_keeps_diagonal_in_z():
    rho = thermal_state(ModelParams(J=1.0, B=0.3, D=0.7, T=0.8)).matrix
    dephased = projective_measure_A(rho, BlochMeasurement(u=(0.0, 0.0, 1.0)))
    assert_allclose(np.diag(dephased), np.diag(rho), atol=1e-15)
    assert dephased[1, 2] == pytest.approx(0.0)


def test_projective_measurement_is_idempotent(rng):
    rho = random_density_matrix(rng).matrix
    axis = np.array([0.2, -0.5, 0.8])
    once = projective_measure_A(rho, axis)
    assert_allclose(projective_measure_A(once, axis), once, atol=1e-14)
    assert np.trace(once).real == pytest.approx(1.0)


def test_hellinger_identity_links_dephasing_and_w(rng):
    rho = random_density_matrix(rng)
    root = matrix_sqrt_psd(rho.matrix)
    w = correlation_matrix_w(rho)
    for _ in range(5):
        u = rng.normal(size=3)
        u /= np.linalg.norm(u)
        residual = root - projective_measure_A(root, u)
        assert 2.0 * np.sum(np.abs(residual) ** 2) == pytest.approx(1.0 - u @ w @ u, abs=1e-10)


def test_cq_assemble_builds_valid_state(rng):
    state = random_cq_state(rng)
    rho = cq_assemble(state)
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    assert_allclose(projective_measure_A(rho.matrix, state.measurement), rho.matrix, atol=1e-14)


def test_cq_assemble_rejects_vector_outside_ball():
    state = CQState.model_construct(
        p=0.5, measurement=BlochMeasurement(u=(0.0, 0.0, 1.0)), b1=(0.0, 0.0, 1.5), b2=(0.0, 0.0, 0.0)
    )
    with pytest.raises(InvalidSpecError):
        cq_assemble(state)


def test_cq_state_validation():
    with pytest.raises(ValueError):
        CQState(p=1.2, measurement=BlochMeasurement(u=(0.0, 0.0, 1.0)))
    with pytest.raises(ValueError):
        CQState(p=0.5, measurement=BlochMeasurement(u=(0.0, 0.0, 1.0)), b1=(1.0, 1.0, 0.0))
    with pytest.raises(ValueError):
        BlochMeasurement(u=(0.0, 0.0, 2.0))


def test_cq_decompose_recovers_parameters():
    state = CQState(
        p=0.3,
        measurement=BlochMeasurement.from_angles(1.1, 0.4),
        b1=(0.1, -0.2, 0.5),
        b2=(0.0, 0.6, -0.3),
    )
    x = cq_decompose(cq_assemble(state).matrix, state.measurement)
    assert x[0] == pytest.approx(1.1)
    assert x[1] == pytest.approx(0.4)
    assert x[2] == pytest.approx(0.3)
    assert_allclose(x[3:6], state.b1, atol=1e-12)
    assert_allclose(x[6:9], state.b2, atol=1e-12)


def test_hellinger_oracle_reference_value(reference_params):
    result = hellinger_gqd_bruteforce(thermal_state(reference_params))
    assert result.value == pytest.approx(0.35194, abs=1e-5)
    assert result.value == pytest.approx(hellinger_gqd(thermal_state(reference_params)).value, abs=1e-6)
    assert result.diagnostics["grid_level"] == 3


def test_hellinger_oracle_matches_definition_on_random_state(rng):
    rho = random_density_matrix(rng)
    assert hellinger_gqd_bruteforce(rho).value == pytest.approx(hellinger_gqd(rho).value, abs=1e-6)


def test_hellinger_oracle_vanishes_on_cq_states(rng):
    for _ in range(3):
        rho = cq_assemble(random_cq_state(rng))
        assert hellinger_gqd_bruteforce(rho).value == pytest.approx(0.0, abs=1e-6)


@pytest.mark.slow
def test_trace_oracle_reference_value(reference_params):
    result = trace_gqd_bruteforce(thermal_state(reference_params))
    assert result.value == pytest.approx(0.76160, abs=2e-4)
    assert len(result.diagnostics["start_values"]) == 5


@pytest.mark.slow
def test_trace_oracle_vanishes_on_cq_states(rng, fast_settings):
    rho = cq_assemble(random_cq_state(rng))
    assert trace_gqd_bruteforce(rho, settings=fast_settings).value < 2e-4


def test_trace_oracle_is_deterministic(bell_state, fast_settings):
    first = trace_gqd_bruteforce(bell_state, starts=3, iterations=50, settings=fast_settings)
    second = trace_gqd_bruteforce(bell_state, starts=3, iterations=50, settings=fast_settings)
    assert first.value == second.value
    assert first.value >= 1.0 - 1e-9
    assert not first.diagnostics["scrambled"]


def test_trace_oracle_seed_scrambles_the_starts(reference_params, fast_settings):
    rho = thermal_state(reference_params)
    seeded = trace_gqd_bruteforce(rho, starts=5, iterations=30, seed=11, settings=fast_settings)
    again = trace_gqd_bruteforce(rho, starts=5, iterations=30, seed=11, settings=fast_settings)
    assert seeded.diagnostics["scrambled"] and seeded.diagnostics["seed"] == 11
    assert seeded.diagnostics["start_values"] == again.diagnostics["start_values"]
    plain = trace_gqd_bruteforce(rho, starts=5, iterations=30, settings=fast_settings)
    assert seeded.diagnostics["start_values"][:3] == plain.diagnostics["start_values"][:3]


def test_bures_grid_agrees_with_refined_optimizer(reference_params, fast_settings):
    rho = thermal_state(reference_params)
    grid = bures_maxfid_grid(rho, grid_level=5, settings=fast_settings)
    refined = bures_maximize(rho, fast_settings)
    assert grid.value == pytest.approx(refined["max_fidelity"], abs=1e-5)
    assert grid.diagnostics["points"] == 31 * 64 + 2


def test_bures_grid_refines_towards_the_optimizer(rng, fast_settings):
    rho = random_density_matrix(rng)
    values = [bures_maxfid_grid(rho, grid_level=level, settings=fast_settings).value for level in range(2, 8)]
    refined = bures_maximize(rho, fast_settings)["max_fidelity"]
    # level grids nest, so the maximum never drops
    assert all(finer >= coarser - 1e-12 for coarser, finer in zip(values, values[1:]))
    gaps = [refined - value for value in values]
    assert min(gaps) >= -1e-9
    assert gaps[-1] <= gaps[0] + 1e-12
    assert gaps[-1] < 1e-3


def test_bures_grid_at_degenerate_ground_level(fast_settings):
    rho = ground_state(ModelParams(J=1.0, B=1.5, D=math.sqrt(5.0) / 2.0, T=0.0))
    grid = bures_maxfid_grid(rho, grid_level=4, settings=fast_settings)
    assert grid.value == pytest.approx((2.0 + math.sqrt(2.0)) / 4.0, abs=1e-4)


def test_oracles_accept_mixed_state():
    rho = DensityMatrix.maximally_mixed()
    assert hellinger_gqd_bruteforce(rho).value == pytest.approx(0.0, abs=1e-12)
    assert bures_maxfid_grid(rho, grid_level=2).value == pytest.approx(1.0, abs=1e-12)
