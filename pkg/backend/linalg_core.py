"""
Small complex matrix kernel for two-qubit states.

Everything the discord measures need lives here: a cyclic Jacobi eigensolver
for Hermitian matrices (vectorised over stacks of matrices), the PSD square
root, the trace and Hilbert-Schmidt norms, Kronecker products and the
exponential of a Hermitian matrix.

Basis convention: product basis ordered |00>, |01>, |10>, |11>, qubit A is the
left tensor factor and sigma_z|0> = +|0>.
"""

import logging
from typing import NamedTuple, Optional

import numpy as np

from config import Tolerances, get_tolerances
from errors import ConvergenceError, NotPSDError

# Configure logging
logger = logging.getLogger(__name__)

IDENTITY_2 = np.eye(2, dtype=complex)
IDENTITY_4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class EigenSystem(NamedTuple):
    """Eigenvalues sorted non-increasing, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def dagger(matrix: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(matrix, -1, -2))


def symmetrize(matrix: np.ndarray) -> np.ndarray:
    """Hermitian part (H + H^dagger) / 2."""
    return 0.5 * (matrix + dagger(matrix))


def is_hermitian(matrix: np.ndarray, eps: Optional[float] = None) -> bool:
    """Entrywise check that ``matrix`` equals its conjugate transpose."""
    eps = get_tolerances().eps_eq if eps is None else eps
    return bool(np.max(np.abs(matrix - dagger(matrix)), initial=0.0) <= eps)


def _off_diagonal_norm(stack: np.ndarray) -> np.ndarray:
    n = stack.shape[-1]
    off = stack * (1.0 - np.eye(n))
    return np.sqrt(np.sum(np.abs(off) ** 2, axis=(-2, -1)))


def _jacobi_rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, active: np.ndarray) -> None:
    """Annihilate a[:, p, q] with a complex 2x2 rotation, in place."""
    apq = a[:, p, q]
    r = np.abs(apq)
    rotate = active & (r > 0.0)
    if not rotate.any():
        return

    safe_r = np.where(rotate, r, 1.0)
    phase = np.where(rotate, apq / safe_r, 1.0)
    theta = np.where(rotate, (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe_r), 0.0)
    sign = np.where(theta >= 0.0, 1.0, -1.0)
    t = sign / (np.abs(theta) + np.hypot(theta, 1.0))
    t = np.where(rotate, t, 0.0)
    c = (1.0 / np.sqrt(t * t + 1.0))[:, None]
    s = t[:, None] * c
    phase = phase[:, None]

    # G = [[c, s], [-s conj(phase), c conj(phase)]] on the (p, q) plane: A <- G^H A G, V <- V G
    for m in (a, v):
        col_p = m[:, :, p].copy()
        col_q = m[:, :, q]
        m[:, :, p] = c * col_p - s * np.conj(phase) * col_q
        m[:, :, q] = s * col_p + c * np.conj(phase) * col_q
    row_p = a[:, p, :].copy()
    row_q = a[:, q, :]
    a[:, p, :] = c * row_p - s * phase * row_q
    a[:, q, :] = s * row_p + c * phase * row_q

    a[rotate, p, q] = 0.0
    a[rotate, q, p] = 0.0


def _negligible(a: np.ndarray, p: int, q: int, floor: np.ndarray, relative: float) -> np.ndarray:
    """True where |a_pq| <= max(relative * sqrt(|a_pp a_qq|), floor)."""
    scale = np.sqrt(np.abs(a[:, p, p].real * a[:, q, q].real))
    return np.abs(a[:, p, q]) <= np.maximum(relative * scale, floor)


def hermitian_eig(matrix: np.ndarray, tolerances: Optional[Tolerances] = None) -> EigenSystem:
    """
    Eigendecomposition of a Hermitian matrix (or a stack of them) by cyclic Jacobi.

    The input is symmetrized as (H + H^dagger)/2 first. A pair (p, q) is
    rotated while |a_pq| > jacobi_tol * sqrt(|a_pp a_qq|) and above
    ``jacobi_floor * max(1, ||H||_HS)``, so the small eigenvalues of a PSD
    matrix keep their relative accuracy.

    Args:
        matrix: Array of shape (..., n, n)
        tolerances: Tolerance record, defaults to the configured one

    Returns:
        EigenSystem with eigenvalues (..., n) sorted non-increasing and
        eigenvectors (..., n, n) holding the matching columns

    Raises:
        ConvergenceError: if the sweep budget is exhausted
    """
    tol = tolerances or get_tolerances()
    h = np.asarray(matrix, dtype=complex)
    if h.ndim < 2 or h.shape[-1] != h.shape[-2]:
        raise ValueError(f"Expected square matrices, got shape {h.shape}")

    batch_shape = h.shape[:-2]
    n = h.shape[-1]
    a = symmetrize(h).reshape((-1, n, n)).copy()
    v = np.broadcast_to(np.eye(n, dtype=complex), a.shape).copy()

    floor = tol.jacobi_floor * np.maximum(1.0, np.linalg.norm(a, axis=(-2, -1)))
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    sweeps = 0
    while True:
        pending = np.zeros(a.shape[0], dtype=bool)
        for p, q in pairs:
            pending |= ~_negligible(a, p, q, floor, tol.jacobi_tol)
        if not pending.any():
            break
        if sweeps >= tol.jacobi_max_sweeps:
            raise ConvergenceError(sweeps, float(_off_diagonal_norm(a).max()))
        for p, q in pairs:
            _jacobi_rotate(a, v, p, q, ~_negligible(a, p, q, floor, tol.jacobi_tol))
        a = symmetrize(a)
        sweeps += 1

    logger.debug(f"Jacobi converged in {sweeps} sweeps for {a.shape[0]} matrices")

    eigenvalues = np.real(np.diagonal(a, axis1=-2, axis2=-1))
    order = np.argsort(-eigenvalues, axis=-1, kind="stable")
    eigenvalues = np.take_along_axis(eigenvalues, order, axis=-1)
    eigenvectors = np.take_along_axis(v, order[:, None, :], axis=-1)

    return EigenSystem(
        eigenvalues=eigenvalues.reshape(batch_shape + (n,)),
        eigenvectors=eigenvectors.reshape(batch_shape + (n, n)),
    )


def eigvalsh(matrix: np.ndarray, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """Eigenvalues only, sorted non-increasing."""
    return hermitian_eig(matrix, tolerances).eigenvalues


def spectral_apply(system: EigenSystem, values: np.ndarray) -> np.ndarray:
    """V f(Lambda) V^dagger for the eigenvalue images ``values``."""
    vectors = system.eigenvectors
    return symmetrize((vectors * values[..., None, :]) @ dagger(vectors))


def matrix_sqrt_psd(matrix: np.ndarray, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """
    Unique PSD square root of a Hermitian PSD matrix.

    Eigenvalues in [-eps_psd, 0) are clamped to zero.

    Raises:
        NotPSDError: if an eigenvalue is below -eps_psd
    """
    tol = tolerances or get_tolerances()
    system = hermitian_eig(matrix, tol)
    smallest = float(np.min(system.eigenvalues))
    if smallest < -tol.eps_psd:
        raise NotPSDError(smallest, tol.eps_psd)
    return spectral_apply(system, np.sqrt(np.clip(system.eigenvalues, 0.0, None)))


def matrix_exp_hermitian(
    matrix: np.ndarray, s: float, tolerances: Optional[Tolerances] = None
) -> np.ndarray:
    """exp(s * H) for Hermitian H, computed as V exp(s Lambda) V^dagger."""
    system = hermitian_eig(matrix, tolerances)
    return spectral_apply(system, np.exp(s * system.eigenvalues))


def trace_norm(matrix: np.ndarray, tolerances: Optional[Tolerances] = None) -> float:
    """
    Trace norm ||M||_1 = Tr sqrt(M^dagger M), the sum of singular values.

    Hermitian input is handled as the sum of absolute eigenvalues.
    """
    tol = tolerances or get_tolerances()
    m = np.asarray(matrix, dtype=complex)
    if is_hermitian(m, tol.eps_eq):
        return float(np.sum(np.abs(eigvalsh(m, tol))))
    gram = eigvalsh(dagger(m) @ m, tol)
    return float(np.sum(np.sqrt(np.clip(gram, 0.0, None))))


def trace_norms(stack: np.ndarray, tolerances: Optional[Tolerances] = None) -> np.ndarray:
    """Trace norms of a stack (..., n, n) of Hermitian matrices."""
    return np.sum(np.abs(eigvalsh(stack, tolerances)), axis=-1)


def hs_norm(matrix: np.ndarray) -> float:
    """Hilbert-Schmidt (Frobenius) norm sqrt(Tr M^dagger M)."""
    return float(np.linalg.norm(np.asarray(matrix, dtype=complex)))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two 2x2 operators, A acting on the left qubit."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != (2, 2) or b.shape != (2, 2):
        raise ValueError(f"kron expects 2x2 operands, got {a.shape} and {b.shape}")
    return np.kron(a, b)


def pauli_on_a(index: int) -> np.ndarray:
    """sigma_index (x=0, y=1, z=2) acting on qubit A, identity on B."""
    return kron(PAULIS[index], IDENTITY_2)


def bloch_operator(vector: np.ndarray) -> np.ndarray:
    """u . sigma for a real 3-vector u (2x2)."""
    x, y, z = np.asarray(vector, dtype=float)
    return x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z
