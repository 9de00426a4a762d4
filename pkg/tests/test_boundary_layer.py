"""Collocation grid, linear system, solved layer profile, matched density."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import pileup as pk
from pileup.errors import GridError

SA = pk.SQRT_HALF_MASS

# regression values recorded from the first verified build (default grid)
NU_AT_FIRST_CELL = 156.1956735073089
DIP_MIN = -7.786115877177512e-4
DIP_LOCATION = 2.024758568505983
MASS = 0.3509468441574714
RESIDUAL_A40 = -1.9037713161473846e-06
RESIDUAL_A86 = 7.4148655812289466e-06


def test_grid_constants_from_targets():
    grid = pk.build_grid()
    assert grid.b == pytest.approx(1.1, abs=1e-15)
    assert grid.C == pytest.approx(2.727e-5, abs=5e-9)  # printed to 4 digits
    assert grid.C == pytest.approx(3e-5 / 1.1, abs=1e-20)
    assert grid.N == 141
    assert grid.breakpoints[1] == pytest.approx(3e-5, abs=1e-19)


def test_grid_geometry():
    grid = pk.build_grid()
    # the cell containing 1 is index 86 with width close to the 0.1 target
    j = int(np.searchsorted(grid.breakpoints, 1.0))
    assert j == 86
    width = grid.breakpoints[j] - grid.breakpoints[j - 1]
    assert width == pytest.approx(0.099, abs=5e-4)
    assert abs(width - 0.1) <= 0.02 * 0.1
    # reach: 200 lies in the last cell
    assert grid.breakpoints[-2] < 200.0 <= grid.breakpoints[-1]
    # cumulative widths reproduce the closed-form breakpoints
    widths = grid.C * grid.b ** np.arange(1, grid.N + 1)
    assert np.max(np.abs(np.cumsum(widths) - grid.breakpoints[1:])) <= 1e-12 * grid.breakpoints[-1]
    assert np.allclose(grid.midpoints, 0.5 * (grid.breakpoints[:-1] + grid.breakpoints[1:]))


def test_grid_infeasible_targets():
    with pytest.raises(GridError):
        pk.build_grid(a1=0.3, width_at_one=0.5, reach=200.0)
    with pytest.raises(GridError):
        pk.build_grid(a1=-1e-5)
    with pytest.raises(GridError):
        pk.build_grid(width_at_one=300.0, reach=200.0)


def test_assembled_system():
    grid = pk.build_grid()
    matrix, rhs = pk.assemble_system(grid)
    assert matrix.shape == (grid.N, grid.N)
    # entries are integrals of V > 0, but V(d)*width drops below the
    # roundoff of the antiderivative scale for distant narrow cells, where
    # the closed form rounds to exactly zero
    assert np.all(matrix >= 0.0)
    centers = 0.5 * (grid.breakpoints[:-1] + grid.breakpoints[1:])
    representable = np.abs(grid.midpoints[:, None] - centers[None, :]) < 8.0
    assert np.all(matrix[representable] > 0.0)
    assert np.allclose(rhs, pk.normalized_tail(grid.midpoints))
    # row entries decay with distance from the collocation point
    j = 100
    distances = np.abs(grid.midpoints[j] - grid.midpoints)
    order = np.argsort(distances)
    far = matrix[j, order[-20:]]
    near = matrix[j, j]
    assert np.all(far < 1e-6 * near)


def test_matrix_entries_against_quadrature():
    grid = pk.build_grid()
    matrix, _ = pk.assemble_system(grid)
    rng = np.random.default_rng(2024)
    for _ in range(20):
        i = int(rng.integers(0, grid.N))
        j = int(rng.integers(0, grid.N))
        y = grid.midpoints[j]
        lo, hi = grid.breakpoints[i], grid.breakpoints[i + 1]
        inside = [y] if lo < y < hi else None
        ref, _ = quad(
            lambda t: pk.interaction(y - t),
            lo,
            hi,
            points=inside,
            epsabs=1e-13,
            epsrel=1e-13,
            limit=200,
        )
        assert matrix[j, i] == pytest.approx(ref, abs=1e-10)


def test_solution_profile(bl_solution):
    lam = bl_solution.nu_star.values
    assert np.max(np.abs(bl_solution.residual_report[:, 1])) <= 1e-10
    assert lam[0] == pytest.approx(NU_AT_FIRST_CELL, rel=1e-6)
    assert lam[0] > 0.0
    assert lam.min() < 0.0
    assert lam.min() > -pk.rho_star(0.0)
    assert bl_solution.nu_star.mass() == pytest.approx(MASS, rel=1e-6)


def test_dip_metrics(bl_solution):
    dip = pk.dip_metrics(bl_solution)
    assert dip["min_value"] < 0.0
    assert dip["min_value"] == pytest.approx(DIP_MIN, rel=1e-4)
    assert dip["min_location"] == pytest.approx(DIP_LOCATION, rel=1e-9)
    # the dip sits in the matching region: beyond the positive layer at the
    # lock, well before the far tail
    assert 0.5 < dip["min_location"] < 20.0
    # positive at the lock, negative dip, then noise-level tail wiggles
    assert 2 <= dip["sign_changes"] <= 60  # 31 on the recorded build


def test_el_residual(bl_solution):
    grid = bl_solution.grid
    mids = pk.el_residual(bl_solution, grid.midpoints[5:10])
    assert np.max(np.abs(mids)) <= 1e-10
    r40, r86, r120 = pk.el_residual(
        bl_solution,
        [grid.breakpoints[40], grid.breakpoints[86], grid.breakpoints[120]],
    )
    assert r40 == pytest.approx(RESIDUAL_A40, rel=1e-3)
    assert r86 == pytest.approx(RESIDUAL_A86, rel=1e-3)
    # discretization-limited but small relative to the forcing there
    assert abs(r40) <= 1e-4 * pk.normalized_tail(grid.breakpoints[40])
    assert abs(r86) <= 1e-3 * pk.normalized_tail(grid.breakpoints[86])
    assert abs(r120) <= 1e-12  # the forcing itself is below double precision
    with pytest.raises(ValueError):
        pk.el_residual(bl_solution, [0.0])
    with pytest.raises(ValueError):
        pk.el_residual(bl_solution, [grid.breakpoints[-1] + 1.0])


def test_residual_of_zero_density():
    # dropping the layer correction leaves exactly -g as the defect
    assert -pk.normalized_tail(1.0) == pytest.approx(-0.2227017095497177, abs=1e-13)


def test_matched_density(bl_solution):
    grid = bl_solution.grid
    gamma = 100.0
    x_past = (grid.breakpoints[-1] + 1.0) / gamma
    assert pk.matched_density(bl_solution, gamma, x_past) == pk.rho_star(x_past)
    assert pk.matched_density(bl_solution, gamma, 1e-9) > pk.rho_star(0.0)
    # pointwise approach to the bulk profile on compacts as gamma grows
    xs = np.linspace(0.1, 2 * SA, 60)
    gaps = [
        np.max(np.abs(pk.matched_density(bl_solution, g, xs) - pk.rho_star(xs)))
        for g in (1e2, 1e3)
    ]
    assert gaps[1] <= gaps[0]
    assert gaps[1] <= 1e-6


def test_matched_density_vs_discrete(bl_solution, minimiser_128):
    # near the lock the matched density tracks the discrete profile far
    # better than the bulk density alone
    gamma = minimiser_128.gamma
    rho = pk.discrete_density(minimiser_128)
    left = rho.locations <= 2 * SA / 5
    locs = rho.locations[left]
    gap_matched = np.max(
        np.abs(rho.values[left] - pk.matched_density(bl_solution, gamma, locs))
    )
    gap_bulk = np.max(np.abs(rho.values[left] - pk.rho_star(locs)))
    assert gap_bulk >= 2.0 * gap_matched


def test_grid_refinement_stability(bl_solution):
    fine = pk.solve_nu_star(pk.build_grid(width_at_one=math.sqrt(1.1) - 1.0))
    pts = bl_solution.grid.midpoints
    window = (pts >= bl_solution.grid.breakpoints[1]) & (pts <= 10.0)
    coarse_vals = bl_solution.nu_star.values[window]
    fine_vals = np.interp(pts[window], fine.grid.midpoints, fine.nu_star.values)
    rel = np.max(np.abs(fine_vals - coarse_vals)) / np.max(np.abs(coarse_vals))
    assert rel <= 0.02
    mass_change = abs(fine.nu_star.mass() - bl_solution.nu_star.mass())
    assert mass_change <= 0.05 * abs(bl_solution.nu_star.mass())
