"""Quadratic optimal quantizers of the standard normal distribution.

A level-N quantizer is a grid x_1 < ... < x_N together with the
probabilities of its Voronoi cells under N(0,1).  The quadratic optimal
grid satisfies the stationarity (centroid) condition

    x_i = E[X | X in cell_i],

which for the normal law is a fixed point of the Lloyd map with all cell
statistics available in closed form from the normal cdf/pdf.  We iterate
the Lloyd map and polish with a damped Newton step on the distortion
gradient, so grids are deterministic and reproducible to full double
precision without any sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.linalg import solve_banded
from scipy.special import ndtr, ndtri

from .errors import ConvergenceError, GridFileError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _pdf(x):
    return np.exp(-0.5 * np.square(x)) / _SQRT_2PI


@dataclass(frozen=True)
class Quantizer1D:
    """Optimal N-point grid, cell weights and distortion for N(0,1)."""

    level: int
    grid: np.ndarray
    weights: np.ndarray
    distortion: float

    def __post_init__(self):
        object.__setattr__(self, "grid", np.asarray(self.grid, dtype=float))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        if self.grid.shape != (self.level,) or self.weights.shape != (self.level,):
            raise ValueError("grid/weights must have exactly `level` entries")
        if self.level > 1 and not np.all(np.diff(self.grid) > 0):
            raise ValueError("grid must be strictly increasing")


def _cell_edges(grid: np.ndarray):
    mid = 0.5 * (grid[:-1] + grid[1:])
    lo = np.concatenate(([-np.inf], mid))
    hi = np.concatenate((mid, [np.inf]))
    return lo, hi


def _cell_stats(grid: np.ndarray):
    """Cell probabilities P_i and first moments M_i = int_cell x phi(x) dx."""
    lo, hi = _cell_edges(grid)
    prob = ndtr(hi) - ndtr(lo)
    mom = _pdf(lo) - _pdf(hi)
    return prob, mom


def distortion(grid: np.ndarray) -> float:
    """Quadratic distortion E min_i (X - x_i)^2 in closed form.

    Expanding the cellwise integrals, the boundary terms telescope and

        D = 1 + sum_i x_i (x_i P_i - 2 M_i).
    """
    grid = np.asarray(grid, dtype=float)
    prob, mom = _cell_stats(grid)
    return 1.0 + float(np.sum(grid * (grid * prob - 2.0 * mom)))


def cell_weights(grid: np.ndarray) -> np.ndarray:
    """Voronoi cell probabilities (normal cdf differences at midpoints)."""
    prob, _ = _cell_stats(np.asarray(grid, dtype=float))
    return prob


def _lloyd_residual(grid: np.ndarray) -> float:
    prob, mom = _cell_stats(grid)
    return float(np.max(np.abs(grid - mom / prob)))


def _newton_step(grid: np.ndarray) -> np.ndarray:
    """One Newton step on the distortion gradient (tridiagonal Hessian)."""
    n = len(grid)
    prob, mom = _cell_stats(grid)
    g = 2.0 * (grid * prob - mom)
    mid = 0.5 * (grid[:-1] + grid[1:])
    pb = _pdf(mid)
    diag = 2.0 * prob
    diag[:-1] += (grid[:-1] - mid) * pb
    diag[1:] -= (grid[1:] - mid) * pb
    off = (grid[:-1] - mid) * pb
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[1, :] = diag
    ab[2, :-1] = off
    return grid + solve_banded((1, 1), ab, -g)


def optimize(level: int, tolerance: float = 1e-10, max_iterations: int = 500,
             initial_grid=None) -> Quantizer1D:
    """Compute the optimal level-N quantizer of N(0,1).

    Parameters
    ----------
    level : int
        Number of codepoints, >= 1.
    tolerance : float
        Bound on the stationarity residual max_i |x_i - E[X | cell_i]|.
    max_iterations : int
        Iteration budget; exceeded -> ConvergenceError.
    initial_grid : array_like, optional
        Starting grid (ascending).  Defaults to the quantiles at levels
        (i - 1/2)/N, which converge for the log-concave normal density.
    """
    if level < 1:
        raise ValueError("level must be >= 1")
    if tolerance <= 0:
        raise ValueError("tolerance must be > 0")
    if level == 1:
        return Quantizer1D(1, np.zeros(1), np.ones(1), 1.0)

    if initial_grid is None:
        x = ndtri((np.arange(level) + 0.5) / level)
    else:
        x = np.sort(np.asarray(initial_grid, dtype=float))
    # converge past the requested tolerance so the final symmetrization
    # cannot push the residual back above it
    target = 0.25 * tolerance
    res = _lloyd_residual(x)
    for _ in range(max_iterations):
        if res < target:
            break
        prob, mom = _cell_stats(x)
        x_lloyd = mom / prob
        if res < 1e-2:
            x_newton = _newton_step(x)
            if np.all(np.diff(x_newton) > 0):
                res_newton = _lloyd_residual(x_newton)
                if res_newton < res:
                    x, res = x_newton, res_newton
                    continue
        x = x_lloyd
        res = _lloyd_residual(x)
    if res >= tolerance:
        raise ConvergenceError(
            f"Lloyd/Newton did not reach tolerance {tolerance:g} for level {level}",
            res,
        )
    # kill accumulated asymmetry drift; the optimal grid is odd-symmetric
    x = 0.5 * (x - x[::-1])
    return Quantizer1D(level, x, cell_weights(x), distortion(x))


def stationarity_residual(q: Quantizer1D) -> float:
    """max_i |x_i - conditional cell mean|; zero at the optimum."""
    if q.level == 1:
        return abs(float(q.grid[0]))
    return _lloyd_residual(q.grid)


def save_grid(q: Quantizer1D, path) -> None:
    """Write a grid file: header plus `x_i pi_i` lines, 17 significant digits."""
    path = Path(path)
    lines = [f"# quantizer1d level={q.level} distortion={q.distortion:.17g}"]
    for x, w in zip(q.grid, q.weights):
        lines.append(f"{x:.17g} {w:.17g}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_grid(path) -> Quantizer1D:
    """Read a grid file written by save_grid; validates all invariants."""
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines:
        raise GridFileError(path, 1, "empty file")
    header = lines[0]
    if not header.startswith("# quantizer1d "):
        raise GridFileError(path, 1, "missing '# quantizer1d' header")
    fields = dict(
        item.split("=", 1) for item in header[len("# quantizer1d "):].split()
        if "=" in item
    )
    try:
        level = int(fields["level"])
        dist = float(fields["distortion"])
    except (KeyError, ValueError) as exc:
        raise GridFileError(path, 1, f"bad header: {exc}") from None
    if len(lines) - 1 != level:
        raise GridFileError(path, len(lines), f"expected {level} grid lines, "
                                              f"found {len(lines) - 1}")
    grid = np.empty(level)
    weights = np.empty(level)
    for i, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if len(parts) != 2:
            raise GridFileError(path, i, "expected '<x_i> <pi_i>'")
        try:
            grid[i - 2] = float(parts[0])
            weights[i - 2] = float(parts[1])
        except ValueError:
            raise GridFileError(path, i, f"non-numeric entry {parts!r}") from None
        if i > 2 and grid[i - 2] <= grid[i - 3]:
            raise GridFileError(path, i, "grid not strictly ascending")
        if weights[i - 2] <= 0:
            raise GridFileError(path, i, "weight not positive")
    if abs(weights.sum() - 1.0) > 1e-12:
        raise GridFileError(path, len(lines),
                            f"weights sum to {weights.sum():.17g}, expected 1")
    return Quantizer1D(level, grid, weights, dist)
