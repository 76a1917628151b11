"""
Derivative-free search helpers shared by the Bures optimizer and the
brute-force oracles.

Objectives are batched: they take an array of candidate points of shape
(k, n) and return k values, so every poll of a compass search costs one
vectorised call.
"""

import logging
import math
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.stats import qmc

logger = logging.getLogger(__name__)

BatchObjective = Callable[[np.ndarray], np.ndarray]


class SearchResult(NamedTuple):
    """Outcome of one compass search."""

    x: np.ndarray
    value: float
    step: float
    polls: int
    improved: bool


def sphere_grid(n_lat: int, n_lon: int) -> np.ndarray:
    """
    Latitude-longitude grid of unit vectors with each pole listed once.

    Interior polar angles are pi i/(n_lat - 1) for i = 1..n_lat-2, azimuths
    2 pi j/n_lon; returns ((n_lat - 2) n_lon + 2, 3).
    """
    phi = np.pi * np.arange(1, n_lat - 1) / (n_lat - 1)
    lam = 2.0 * np.pi * np.arange(n_lon) / n_lon
    pp, ll = np.meshgrid(phi, lam, indexing="ij")
    interior = np.stack(
        [np.sin(pp) * np.cos(ll), np.sin(pp) * np.sin(ll), np.cos(pp)], axis=-1
    ).reshape(-1, 3)
    poles = np.array([[0.0, 0.0, 1.0], [0.0, 0.0, -1.0]])
    return np.vstack([poles[:1], interior, poles[1:]])


def level_grid(level: int) -> np.ndarray:
    """
    Angle grid of resolution 2^level x 2^(level+1).

    phi_i = pi i/2^level (i = 0..2^level), lam_j = 2 pi j/2^(level+1); the
    poles are not duplicated.
    """
    return sphere_grid(2 ** level + 1, 2 ** (level + 1))


def tangent_basis(u: np.ndarray) -> np.ndarray:
    """Two orthonormal vectors spanning the tangent plane of the sphere at u, as rows."""
    u = np.asarray(u, dtype=float)
    seed = np.eye(3)[int(np.argmin(np.abs(u)))]
    e1 = seed - np.dot(seed, u) * u
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(u, e1)
    return np.vstack([e1, e2])


def _sphere_polls(u: np.ndarray, step: float) -> np.ndarray:
    basis = tangent_basis(u)
    directions = np.vstack([basis, -basis])
    # great-circle moves of arc length ``step``
    return math.cos(step) * u + math.sin(step) * directions


def compass_search_sphere(
    objective: BatchObjective,
    u0: np.ndarray,
    step: float,
    min_step: float,
    maximize: bool = False,
    max_polls: int = 2000,
    value0: Optional[float] = None,
) -> SearchResult:
    """
    Compass search on the unit sphere.

    Each poll evaluates the four great-circle neighbours at arc ``step`` in
    the tangent frame of the incumbent; the best strict improvement is
    taken, otherwise the step is halved. Stops once the step falls below
    ``min_step`` or after ``max_polls`` polls.
    """
    sign = -1.0 if maximize else 1.0
    u = np.asarray(u0, dtype=float)
    u = u / np.linalg.norm(u)
    best = float(objective(u[None, :])[0]) if value0 is None else float(value0)
    start = best
    polls = 0

    while step >= min_step and polls < max_polls:
        candidates = _sphere_polls(u, step)
        candidates /= np.linalg.norm(candidates, axis=1, keepdims=True)
        values = np.asarray(objective(candidates), dtype=float)
        polls += 1
        k = int(np.argmin(sign * values))
        if sign * values[k] < sign * best:
            u, best = candidates[k], float(values[k])
        else:
            step *= 0.5

    improved = sign * best < sign * start
    logger.debug(f"Sphere compass search: {polls} polls, final step {step:.2e}, value {best:.15g}")
    return SearchResult(x=u, value=best, step=step, polls=polls, improved=improved)


def compass_search(
    objective: BatchObjective,
    x0: np.ndarray,
    step: float,
    min_step: float,
    max_polls: int,
    project: Optional[Callable[[np.ndarray], np.ndarray]] = None,
) -> SearchResult:
    """
    Compass (coordinate pattern) search minimising ``objective`` in R^n.

    ``project`` maps a batch of candidates back into the feasible set.
    """
    x = np.asarray(x0, dtype=float).copy()
    if project is not None:
        x = project(x[None, :])[0]
    n = x.size
    moves = np.vstack([np.eye(n), -np.eye(n)])
    best = float(objective(x[None, :])[0])
    start = best
    polls = 0

    while step >= min_step and polls < max_polls:
        candidates = x + step * moves
        if project is not None:
            candidates = project(candidates)
        values = np.asarray(objective(candidates), dtype=float)
        polls += 1
        k = int(np.argmin(values))
        if values[k] < best:
            x, best = candidates[k], float(values[k])
        else:
            step *= 0.5

    return SearchResult(x=x, value=best, step=step, polls=polls, improved=best < start)


def halton_points(count: int, dimension: int, seed: Optional[int] = None, scramble: bool = False) -> np.ndarray:
    """
    ``count`` Halton points in [0, 1)^dimension, deterministic unless scrambled.

    The unscrambled sequence starts at the origin; that point is skipped.
    """
    if count <= 0:
        return np.zeros((0, dimension))
    sampler = qmc.Halton(d=dimension, scramble=scramble, seed=seed)
    if not scramble:
        sampler.fast_forward(1)
    return sampler.random(count)


def halton_directions(count: int, seed: Optional[int] = None, scramble: bool = False) -> np.ndarray:
    """Unit vectors from 2-d Halton points through the equal-area map z = 1 - 2a, lam = 2 pi b."""
    points = halton_points(count, 2, seed, scramble)
    z = 1.0 - 2.0 * points[:, 0]
    lam = 2.0 * np.pi * points[:, 1]
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    return np.stack([r * np.cos(lam), r * np.sin(lam), z], axis=-1)
