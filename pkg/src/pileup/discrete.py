"""Discrete pile-up of dislocation walls and its Newton minimiser.

The n + 1 walls sit at dimensionless positions 0 = x_0 < x_1 < ... < x_n,
with the wall at the origin locked.  The (rescaled) energy of the system is

    E_n(x) = (gamma/n^2) * sum_{pairs j<k} V(gamma*(x_k - x_j))
             + (1/n) * sum_{i>=1} x_i,

where gamma = sqrt(n*K/(sigma*h)) collects the physical parameters.  This
module provides the energy with its exact gradient and Hessian, a damped
Newton minimiser started from the bulk profile, and the discrete density
constructions used to compare against the continuum limits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve as dense_solve

from . import continuum, potential
from .errors import ConvergenceError, SingularEnergyError, StructuralError


@dataclass
class PhysicalParameters:
    """Dimensional inputs: elastic scale K, in-wall spacing h, applied shear
    sigma, and the number of free walls n."""

    K: float
    h: float
    sigma: float
    n: int


def gamma_from_physical(p: PhysicalParameters) -> float:
    """Dimensionless pile-up length gamma = sqrt(n*K/(sigma*h))."""
    if p.K <= 0 or p.h <= 0 or p.sigma <= 0 or p.n <= 0:
        raise ValueError("all physical parameters must be positive")
    return math.sqrt(p.n * p.K / (p.sigma * p.h))


@dataclass
class WallConfiguration:
    """Positions of n + 1 walls with the lock pinned at the origin."""

    n: int
    gamma: float
    positions: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=float)
        if self.n < 1:
            raise ValueError("need at least one free wall")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.positions.shape != (self.n + 1,):
            raise ValueError(
                f"expected {self.n + 1} positions, got {self.positions.shape}"
            )
        if self.positions[0] != 0.0:
            raise ValueError("the lock wall must sit exactly at 0")
        if np.any(np.diff(self.positions) <= 0.0):
            raise ValueError("positions must be strictly increasing")


@dataclass
class DensitySamples:
    """Point samples (location, value) of a discrete density, increasing in
    location."""

    locations: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.locations = np.asarray(self.locations, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.locations.shape != self.values.shape:
            raise ValueError("locations and values must have matching shapes")
        if np.any(np.diff(self.locations) <= 0.0):
            raise ValueError("sample locations must be strictly increasing")


def _pair_separations(x: np.ndarray) -> np.ndarray:
    diffs = x[None, :] - x[:, None]
    iu = np.triu_indices(x.size, k=1)
    return diffs[iu]


def energy(c: WallConfiguration) -> float:
    """Total energy E_n of a configuration (interaction plus loading)."""
    sep = _pair_separations(c.positions)
    if np.any(sep <= 0.0):
        raise SingularEnergyError("coincident or disordered walls")
    interaction_sum = potential.interaction(c.gamma * sep).sum()
    return (
        c.gamma / c.n**2 * interaction_sum + c.positions[1:].sum() / c.n
    )


def _energy_raw(x: np.ndarray, n: int, gamma: float) -> float:
    sep = _pair_separations(x)
    return gamma / n**2 * potential.interaction(gamma * sep).sum() + x[1:].sum() / n


def _offdiag_interaction(x: np.ndarray, gamma: float, order: int) -> np.ndarray:
    """Matrix V^(order)(gamma*(x_i - x_j)) with a zeroed diagonal."""
    diffs = x[:, None] - x[None, :]
    np.fill_diagonal(diffs, 1.0)  # dummy, removed below
    vals = potential.interaction(gamma * diffs, order)
    np.fill_diagonal(vals, 0.0)
    return vals


def gradient(c: WallConfiguration) -> np.ndarray:
    """Exact gradient of E_n with respect to the n free positions.

    Component i is (gamma^2/n^2) * sum_{j != i} V'(gamma*(x_i - x_j)) + 1/n,
    the j = 0 lock term included.
    """
    vp = _offdiag_interaction(c.positions, c.gamma, order=1)
    return c.gamma**2 / c.n**2 * vp.sum(axis=1)[1:] + 1.0 / c.n


def hessian(c: WallConfiguration) -> np.ndarray:
    """Exact symmetric n x n Hessian of E_n.

    Off-diagonal (i, j) entries are -(gamma^3/n^2) V''(gamma*(x_i - x_j));
    the diagonal sums V'' over all other walls including the lock, which
    makes the matrix strictly diagonally dominant (V'' > 0 away from 0).
    """
    vpp = _offdiag_interaction(c.positions, c.gamma, order=2)
    coeff = c.gamma**3 / c.n**2
    h = -coeff * vpp[1:, 1:]
    np.fill_diagonal(h, coeff * vpp.sum(axis=1)[1:])
    return h


def bulk_positions(n: int, gamma: float = 1.0) -> WallConfiguration:
    """Wall positions generated by the bulk density: the i-th wall sits at
    the i/n quantile of the affine profile, y_i = 2*sqrt(a)*(1 - sqrt(1 - i/n))."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    i = np.arange(n + 1, dtype=float)
    y = 2.0 * potential.SQRT_HALF_MASS * (1.0 - np.sqrt(1.0 - i / n))
    return WallConfiguration(n=n, gamma=gamma, positions=y)


def newton_minimize(
    n: int,
    gamma: float,
    init: WallConfiguration | None = None,
    tol: float = 1e-10,
    max_iter: int = 200,
    trace: list | None = None,
) -> WallConfiguration:
    """Minimise E_n by damped Newton iteration.

    Starts from the bulk profile unless an initial configuration is given.
    Each Newton step is backtracked (halving) until the wall ordering is
    preserved and the energy does not increase; convergence is declared when
    the sup-norm of the gradient drops below ``tol``.  If ``trace`` is a
    list, (residual, energy) is appended for every accepted step.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if init is None:
        init = bulk_positions(n, gamma)
    cfg = WallConfiguration(n=n, gamma=gamma, positions=init.positions.copy())

    x = cfg.positions
    e_current = _energy_raw(x, n, gamma)
    for _ in range(max_iter):
        g = gradient(WallConfiguration(n=n, gamma=gamma, positions=x))
        residual = float(np.max(np.abs(g)))
        if residual <= tol:
            return WallConfiguration(n=n, gamma=gamma, positions=x)
        h = hessian(WallConfiguration(n=n, gamma=gamma, positions=x))
        try:
            step = dense_solve(h, -g, assume_a="pos")
        except np.linalg.LinAlgError:
            step = dense_solve(h, -g)

        t = 1.0
        accepted = False
        ordering_seen = False
        while t >= 1e-20:
            x_new = x.copy()
            x_new[1:] += t * step
            if np.all(np.diff(x_new) > 0.0):
                ordering_seen = True
                e_new = _energy_raw(x_new, n, gamma)
                if e_new <= e_current:
                    x, e_current = x_new, e_new
                    accepted = True
                    if trace is not None:
                        trace.append((residual, e_current))
                    break
            t *= 0.5
        if not accepted:
            if not ordering_seen:
                raise StructuralError(
                    "damping could not restore a strictly increasing configuration"
                )
            raise ConvergenceError(
                f"line search stalled at residual {residual:.3e}",
                iterate=WallConfiguration(n=n, gamma=gamma, positions=x),
                residual=residual,
            )

    g = gradient(WallConfiguration(n=n, gamma=gamma, positions=x))
    residual = float(np.max(np.abs(g)))
    if residual <= tol:
        return WallConfiguration(n=n, gamma=gamma, positions=x)
    raise ConvergenceError(
        f"no convergence in {max_iter} iterations (residual {residual:.3e})",
        iterate=WallConfiguration(n=n, gamma=gamma, positions=x),
        residual=residual,
    )


def discrete_density(c: WallConfiguration) -> DensitySamples:
    """Central-difference density rho_n(x_i) = (2/n)/(x_{i+1} - x_{i-1}) at
    the n - 1 interior walls."""
    if c.n < 2:
        raise ValueError("discrete density needs at least two free walls")
    x = c.positions
    values = (2.0 / c.n) / (x[2:] - x[:-2])
    return DensitySamples(locations=x[1:-1], values=values)


def rescaled_nu_samples(c: WallConfiguration) -> DensitySamples:
    """Blow-up samples of the density mismatch at the lock.

    Locations are gamma*x_i; values are rho_n(x_i) minus the rescaled bulk
    density at the same blown-up location, so a configuration that follows
    the bulk profile gives values near zero and the boundary layer shows up
    as an O(1) signal on an O(1) region.
    """
    rho = discrete_density(c)
    locs = c.gamma * rho.locations
    bulk = continuum.rho_star(locs, gamma=c.gamma)
    return DensitySamples(locations=locs, values=rho.values - bulk)
