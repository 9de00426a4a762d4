"""Shared fixtures: the expensive minimisers and solves are session-scoped."""

import math

import pytest

import pileup as pk


@pytest.fixture(scope="session")
def bl_solution():
    """Boundary-layer profile on the default collocation grid."""
    return pk.solve_nu_star(pk.build_grid())


@pytest.fixture(scope="session")
def minimiser_128():
    """Discrete minimiser for n = 2^7, gamma = sqrt(n)."""
    return pk.newton_minimize(128, math.sqrt(128.0))


@pytest.fixture(scope="session")
def nu_runs():
    """Blow-up density runs keyed by (n, gamma rule)."""
    runs = {}
    for n, rule in [
        (64, "1/2"),
        (256, "1/2"),
        (256, "3/4"),
        (64, "1/4"),
        (256, "1/4"),
    ]:
        gamma = pk.gamma_for(rule, n)
        runs[(n, rule)] = pk.rescaled_nu_samples(pk.newton_minimize(n, gamma))
    return runs


@pytest.fixture(scope="session")
def desk_scale_report():
    """Exponent table for the desk-scale wall counts and both tested rules."""
    return pk.exponent_table([2**k for k in range(3, 9)], ["1/2", "1/4"])
