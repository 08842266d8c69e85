"""Shared test oracles, independent of the library's own solvers."""
from __future__ import annotations

import numpy as np

from sentiscore.boxlsq import ConstrainedLsqProblem, objective


def ls_center(problem: ConstrainedLsqProblem) -> np.ndarray:
    """Unconstrained ridge solution via the normal equations."""
    X = problem.design
    d = problem.n_coords
    gram = X.T @ X + problem.lam * np.eye(d)
    rhs = X.T @ (problem.targets - problem.bias)
    solution, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    return solution


def grid_oracle(
    problem: ConstrainedLsqProblem,
    final_step: float = 1e-3,
    points: int = 11,
) -> tuple[np.ndarray, float]:
    """Best feasible point by staged grid refinement.

    Evaluates the objective on a coarse feasible grid around the
    unconstrained ridge solution, then repeatedly re-grids around the
    winner with shrinking spacing until the spacing is at most
    ``final_step`` in every dimension. On a convex objective this
    reaches the same neighborhood as a dense grid at the final spacing
    while staying tractable in three dimensions.
    """
    d = problem.n_coords
    center = ls_center(problem)
    radius = np.maximum(2.0, 2.0 * np.abs(center))
    lo = np.clip(center - radius, problem.lower, problem.upper)
    hi = np.clip(center + radius, problem.lower, problem.upper)

    best = None
    best_val = np.inf
    # The floor in the shrink step can leave the spacing a rounding error
    # above final_step, so the stop check needs slack and a stage cap.
    for _ in range(64):
        axes = [np.linspace(lo[j], hi[j], points) for j in range(d)]
        mesh = np.meshgrid(*axes, indexing="ij")
        grid = np.stack([m.reshape(-1) for m in mesh], axis=1)
        residual = grid @ problem.design.T + problem.bias - problem.targets
        values = np.einsum("nd,nd->n", residual, residual)
        values = values + problem.lam * np.einsum("nd,nd->n", grid, grid)
        winner = int(np.argmin(values))
        if values[winner] < best_val:
            best_val = float(values[winner])
            best = grid[winner].copy()
        spacing = (hi - lo) / (points - 1)
        if np.all(spacing <= final_step * (1.0 + 1e-9)):
            break
        half = np.maximum(spacing, final_step * (points - 1) / 2.0)
        lo = np.clip(best - half, problem.lower, problem.upper)
        hi = np.clip(best + half, problem.lower, problem.upper)
    else:
        raise AssertionError("grid oracle failed to reach final spacing")
    assert best is not None
    # Exact recompute guards against accumulated vectorization error.
    return best, objective(problem, best)
