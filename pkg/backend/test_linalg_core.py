"""Tests for the Jacobi eigensolver and the spectral helpers."""

import numpy as np
import pytest
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from config import Tolerances
from conftest import random_density_matrix
from errors import ConvergenceError, NotPSDError
from linalg_core import (
    IDENTITY_4,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    bloch_operator,
    dagger,
    eigvalsh,
    hermitian_eig,
    hs_norm,
    is_hermitian,
    kron,
    matrix_exp_hermitian,
    matrix_sqrt_psd,
    pauli_on_a,
    trace_norm,
    trace_norms,
)

entries = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


def _hermitian(values):
    m = np.array(values[:16]).reshape(4, 4) + 1j * np.array(values[16:]).reshape(4, 4)
    return 0.5 * (m + m.conj().T)


@hypothesis_settings(max_examples=50, deadline=None)
@given(st.lists(entries, min_size=32, max_size=32))
def test_hermitian_eig_reconstructs(values):
    h = _hermitian(values)
    system = hermitian_eig(h)
    v = system.eigenvectors
    reconstructed = (v * system.eigenvalues) @ dagger(v)
    assert_allclose(reconstructed, h, atol=1e-10 * max(1.0, np.linalg.norm(h)))
    assert_allclose(dagger(v) @ v, IDENTITY_4, atol=1e-10)
    assert np.all(np.diff(system.eigenvalues) <= 1e-12)


@hypothesis_settings(max_examples=50, deadline=None)
@given(st.lists(entries, min_size=32, max_size=32))
def test_eigenvalues_agree_with_lapack(values):
    h = _hermitian(values)
    assert_allclose(eigvalsh(h), np.linalg.eigvalsh(h)[::-1], atol=1e-10 * max(1.0, np.linalg.norm(h)))


def test_batched_eig_matches_single(rng):
    stack = np.stack([random_density_matrix(rng).matrix for _ in range(5)])
    batched = eigvalsh(stack)
    assert batched.shape == (5, 4)
    for i in range(5):
        assert_allclose(batched[i], eigvalsh(stack[i]), atol=1e-13)


def test_diagonal_input_needs_no_sweep():
    h = np.diag([1.0, 3.0, -2.0, 0.5]).astype(complex)
    system = hermitian_eig(h)
    assert_allclose(system.eigenvalues, [3.0, 1.0, 0.5, -2.0])


def test_convergence_error_when_budget_is_zero():
    h = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    with pytest.raises(ConvergenceError):
        hermitian_eig(h, Tolerances(jacobi_max_sweeps=0))


def test_small_eigenvalues_keep_relative_accuracy():
    h = np.array([[1.0, 1e-12], [1e-12, 1e-20]], dtype=complex)
    values = eigvalsh(h)
    assert values[0] == pytest.approx(1.0, abs=1e-15)
    assert values[1] == pytest.approx(1e-20 - 1e-24, rel=1e-8)


def test_non_square_input_rejected():
    with pytest.raises(ValueError):
        hermitian_eig(np.zeros((3, 4)))


def test_matrix_sqrt_squares_back(rng):
    rho = random_density_matrix(rng).matrix
    root = matrix_sqrt_psd(rho)
    assert is_hermitian(root, 1e-12)
    assert_allclose(root @ root, rho, atol=1e-10)
    assert np.min(np.linalg.eigvalsh(root)) >= -1e-12


def test_matrix_sqrt_of_rank_one_state():
    psi = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2.0)
    projector = np.outer(psi, psi).astype(complex)
    assert_allclose(matrix_sqrt_psd(projector), projector, atol=1e-12)


def test_matrix_sqrt_rejects_negative_spectrum():
    with pytest.raises(NotPSDError):
        matrix_sqrt_psd(np.diag([1.0, -0.1, 0.0, 0.1]).astype(complex))


def test_matrix_exp_of_pauli():
    expected = np.cosh(0.7) * np.eye(2) - np.sinh(0.7) * SIGMA_Z
    assert_allclose(matrix_exp_hermitian(SIGMA_Z, -0.7), expected, atol=1e-12)


def test_trace_norm_of_pauli_and_difference():
    assert trace_norm(SIGMA_X) == pytest.approx(2.0)
    diff = np.diag([0.5, -0.25, -0.25, 0.0]).astype(complex)
    assert trace_norm(diff) == pytest.approx(1.0)
    assert_allclose(trace_norms(np.stack([SIGMA_X, SIGMA_Y])), [2.0, 2.0])


def test_hs_norm():
    assert hs_norm(IDENTITY_4) == pytest.approx(2.0)


def test_kron_ordering_puts_qubit_a_first():
    # sigma_z on A flips the sign of |10> and |11>
    assert_allclose(np.diag(pauli_on_a(2)).real, [1.0, 1.0, -1.0, -1.0])
    assert_allclose(kron(SIGMA_X, np.eye(2))[0, 2], 1.0)


def test_kron_rejects_wrong_shape():
    with pytest.raises(ValueError):
        kron(np.eye(3), np.eye(2))


def test_bloch_operator_squares_to_identity():
    u = np.array([1.0, 2.0, -2.0]) / 3.0
    op = bloch_operator(u)
    assert_allclose(op @ op, np.eye(2), atol=1e-14)


@hypothesis_settings(max_examples=40, deadline=None)
@given(st.lists(entries, min_size=32, max_size=32), st.lists(entries, min_size=32, max_size=32))
def test_trace_norm_is_unitarily_invariant_and_subadditive(first, second):
    a, b = _hermitian(first), _hermitian(second)
    u = hermitian_eig(b).eigenvectors
    scale = 1e-9 * max(1.0, np.linalg.norm(a), np.linalg.norm(b))

    assert trace_norm(u @ a @ dagger(u)) == pytest.approx(trace_norm(a), abs=scale)
    # via M^dagger M: small singular values keep about half their digits
    assert trace_norm(u @ a) == pytest.approx(trace_norm(a), abs=1e3 * scale)
    assert trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + scale


def test_kron_is_bilinear():
    x, y = 0.3 - 1.2j, 2.0 + 0.5j
    for left, right in ((SIGMA_X, SIGMA_Y), (SIGMA_Z, np.eye(2))):
        assert_allclose(kron(x * left + y * right, SIGMA_Y), x * kron(left, SIGMA_Y) + y * kron(right, SIGMA_Y))
        assert_allclose(kron(SIGMA_X, x * left + y * right), x * kron(SIGMA_X, left) + y * kron(SIGMA_X, right))
