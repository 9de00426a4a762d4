"""Collocation solution of the boundary-layer profile at the lock.

The minimiser of the limit boundary-layer energy satisfies the first-kind
integral equation

    (V conv nu)(x) = g(x)   on (0, inf),

with g the normalised tail of V.  Following the step-function ansatz, nu is
approximated on a geometric grid whose cells grow like C*b^i, the equation
is enforced at the cell midpoints, and the resulting dense linear system is
solved by LU factorisation.  The solved profile exhibits an excess of
density at the lock, a shallow negative dip where the layer matches the
bulk, and yields the matched density rho_*(x) + nu(gamma*x) that corrects
the bulk profile near the obstacle.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import potential
from .continuum import PiecewiseConstantDensity, convolve_V, rho_star
from .errors import GridError, SolverError

_COND_LIMIT = 1e14
_RESIDUAL_FACTOR = 1e-10


@dataclass
class CollocationGrid:
    """Geometric collocation grid: cell i has width C*b^i, so the
    breakpoints are a_i = C*b*(b^i - 1)/(b - 1); unknowns are tested at the
    cell midpoints."""

    C: float
    b: float
    N: int
    breakpoints: np.ndarray
    midpoints: np.ndarray

    def __post_init__(self):
        self.breakpoints = np.asarray(self.breakpoints, dtype=float)
        self.midpoints = np.asarray(self.midpoints, dtype=float)
        if self.breakpoints.shape != (self.N + 1,) or self.midpoints.shape != (self.N,):
            raise ValueError("inconsistent grid arrays")
        if self.breakpoints[0] != 0.0:
            raise ValueError("grid must start at 0")
        if np.any(np.diff(self.breakpoints) <= 0.0):
            raise ValueError("breakpoints must increase")


def build_grid(
    a1: float = 3e-5, width_at_one: float = 0.1, reach: float = 200.0
) -> CollocationGrid:
    """Construct the geometric grid from its three tuning targets.

    The first breakpoint is pinned to ``a1``; since cell widths grow by the
    factor b per cell, the width of the cell near x = 1 is about (b - 1), so
    the width target fixes b = 1 + width_at_one and then C = a1/b; N is the
    smallest cell count whose last cell covers ``reach``.  With the default
    targets this gives (C, b, N) = (2.727e-5, 1.1, 141).
    """
    if a1 <= 0 or width_at_one <= 0 or reach <= 0:
        raise GridError("targets must be positive")
    if width_at_one >= reach:
        raise GridError("the width target must be smaller than the reach")

    b = 1.0 + width_at_one
    c = a1 / b
    # smallest N with a_N >= reach, a_N = C*b*(b^N - 1)/(b - 1)
    n_cells = math.ceil(math.log1p(reach * (b - 1.0) / (c * b)) / math.log(b))
    if n_cells < 1:
        raise GridError("targets produce an empty grid")

    i = np.arange(n_cells + 1, dtype=float)
    breakpoints = c * b * (b**i - 1.0) / (b - 1.0)
    breakpoints[0] = 0.0
    midpoints = 0.5 * (breakpoints[:-1] + breakpoints[1:])

    if breakpoints[-1] < 1.0:
        raise GridError("grid does not reach the width-target point x = 1")
    j_one = int(np.searchsorted(breakpoints, 1.0, side="left"))
    width_one = breakpoints[j_one] - breakpoints[j_one - 1]
    if abs(width_one - width_at_one) > 0.02 * width_at_one:
        raise GridError(
            f"cell containing 1 has width {width_one:.4g}, more than 2% away "
            f"from the target {width_at_one:.4g}"
        )
    if not (breakpoints[-2] < reach <= breakpoints[-1]):
        raise GridError("reach target not contained in the last cell")

    return CollocationGrid(
        C=c, b=b, N=n_cells, breakpoints=breakpoints, midpoints=midpoints
    )


@dataclass
class BoundaryLayerSolution:
    """Solved step-function profile on a collocation grid, together with the
    midpoint residuals of the linear solve."""

    grid: CollocationGrid
    nu_star: PiecewiseConstantDensity
    residual_report: np.ndarray  # rows (midpoint, residual)


def assemble_system(grid: CollocationGrid) -> tuple[np.ndarray, np.ndarray]:
    """Dense collocation system: M[j, i] = integral over cell i of
    V(y_j - .) (exact, via the antiderivative) and rhs[j] = g(y_j)."""
    phi = potential.cumulative(grid.midpoints[:, None] - grid.breakpoints[None, :])
    matrix = -np.diff(phi, axis=1)
    rhs = potential.normalized_tail(grid.midpoints)
    return matrix, rhs


def solve_nu_star(grid: CollocationGrid) -> BoundaryLayerSolution:
    """Solve the collocation system for the boundary-layer profile.

    LU factorisation with partial pivoting plus one step of iterative
    refinement; fails if the matrix is numerically singular (condition
    estimate above 1e14) or the midpoint residuals exceed the backward-error
    bound 1e-10 * ||rhs||_inf.  The lower bound nu > -rho_*(0) is not
    imposed; it is checked a posteriori and reported as a warning when
    violated.
    """
    matrix, rhs = assemble_system(grid)
    cond = np.linalg.cond(matrix)
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise SolverError(
            f"collocation matrix numerically singular (condition estimate {cond:.3e})"
        )
    lu, piv = lu_factor(matrix)
    lam = lu_solve((lu, piv), rhs)
    lam = lam + lu_solve((lu, piv), rhs - matrix @ lam)

    residuals = matrix @ lam - rhs
    bound = _RESIDUAL_FACTOR * float(np.max(np.abs(rhs)))
    if float(np.max(np.abs(residuals))) > bound:
        raise SolverError(
            f"midpoint residuals {np.max(np.abs(residuals)):.3e} above the "
            f"backward-error bound {bound:.3e}"
        )

    if float(lam.min()) <= -rho_star(0.0):
        warnings.warn(
            "solved boundary-layer profile violates the strict lower bound "
            "-rho_*(0); the step ansatz is not admissible on this grid",
            stacklevel=2,
        )

    nu = PiecewiseConstantDensity(breakpoints=grid.breakpoints, values=lam)
    report = np.column_stack([grid.midpoints, residuals])
    return BoundaryLayerSolution(grid=grid, nu_star=nu, residual_report=report)


def el_residual(sol: BoundaryLayerSolution, points) -> np.ndarray:
    """Residual (V conv nu)(x) - g(x) of the solved profile at arbitrary
    evaluation points inside the grid; reported, not thresholded."""
    pts = np.atleast_1d(np.asarray(points, dtype=float))
    if np.any((pts <= 0.0) | (pts >= sol.grid.breakpoints[-1])):
        raise ValueError("evaluation points must lie inside (0, a_N)")
    return convolve_V(sol.nu_star, pts) - potential.normalized_tail(pts)


def matched_density(sol: BoundaryLayerSolution, gamma: float, x):
    """Matched approximation rho_*(x) + nu(gamma*x) of the pile-up density;
    the boundary-layer profile is truncated to zero beyond its grid."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0.0):
        raise ValueError("positions must be non-negative")
    out = rho_star(x_arr) + sol.nu_star(gamma * x_arr)
    if x_arr.ndim == 0:
        return float(out)
    return out


def dip_metrics(sol: BoundaryLayerSolution) -> dict:
    """Diagnostics of the negative dip of the solved profile: the minimum
    cell value, the midpoint of the minimising cell, and the number of sign
    changes along the grid."""
    lam = sol.nu_star.values
    i_min = int(np.argmin(lam))
    signs = np.sign(lam)
    changes = int(np.sum(signs[1:] * signs[:-1] < 0))
    return {
        "min_value": float(lam[i_min]),
        "min_location": float(sol.grid.midpoints[i_min]),
        "sign_changes": changes,
    }
