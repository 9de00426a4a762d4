"""Continuum energies: bulk profile, boundary-layer functionals, spectral form."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

import pileup as pk
from pileup.errors import AdmissibilityError

A = pk.HALF_MASS
SA = pk.SQRT_HALF_MASS

# 40-digit oracle values for nu0 = chi_[0,1] - chi_[1,2]:
#   quadratic  integral (V conv nu0) nu0 = 2*I0 - 2*I1 with
#   I0 = 2*int_0^1 V(u)(1-u) du (squares) and I1 = int_0^2 V(u)(1-|u-1|) du
#   (cross term), both reduced from the 2D integral by exactness of the
#   overlap weight; linear  integral g nu0 by direct quadrature of g.
QUAD_NU0 = 2.4933265183463284
LIN_NU0 = 0.4576160374798582
# admissible rescaling 0.7*nu0 (the unit-height version violates the lower
# bound -rho_*(0) = -0.7797): F scales as c^2/2 * QUAD - c * LIN
F_NU07 = 0.49 * QUAD_NU0 / 2.0 - 0.7 * LIN_NU0


def _step(breaks, values):
    return pk.PiecewiseConstantDensity(np.asarray(breaks), np.asarray(values))


def _random_signed(rng, lo=-0.7, hi=1.3, span=5.0, max_cells=6):
    ncells = int(rng.integers(2, max_cells + 1))
    bp = np.concatenate([[0.0], np.sort(rng.uniform(0.05, span, ncells))])
    return _step(bp, rng.uniform(lo, hi, ncells))


def test_density_validation():
    with pytest.raises(ValueError):
        _step([0.0, 0.5, 0.5], [1.0, 2.0])
    with pytest.raises(ValueError):
        _step([-0.5, 0.5], [1.0])
    nu = _step([0.0, 0.5, 2.0], [2.0, -1.0])
    assert nu.mass() == pytest.approx(2.0 * 0.5 - 1.5)
    assert nu.total_variation() == pytest.approx(2.0 * 0.5 + 1.5)
    assert nu(0.25) == 2.0 and nu(1.0) == -1.0 and nu(3.0) == 0.0


def test_rho_star():
    assert pk.rho_star(0.0) == pytest.approx(1.0 / SA, abs=1e-14)
    assert pk.rho_star(2 * SA) == 0.0
    assert pk.rho_star(3 * SA) == 0.0
    for gamma in (1.0, 7.0, 150.0):
        assert pk.rho_star(gamma * SA, gamma) == pytest.approx(0.5 / SA, abs=1e-13)
        assert pk.rho_star(2 * gamma * SA, gamma) == 0.0
    # infinity sentinel selects the unrescaled profile = gamma = 1 formula
    x = np.linspace(0, 3, 20)
    assert np.array_equal(pk.rho_star(x), pk.rho_star(x, gamma=1.0))


def test_zero_order_energy():
    assert pk.zero_order_energy(_step([0.0, 1.0], [1.0])) == pytest.approx(
        A + 0.5, abs=1e-14
    )
    with pytest.raises(AdmissibilityError):
        pk.zero_order_energy(_step([0.0, 1.0], [2.0]))  # mass 2
    with pytest.raises(AdmissibilityError):
        pk.zero_order_energy(_step([0.0, 0.5, 1.0], [3.0, -1.0]))  # negative cell


def _discretized_bulk(n_cells):
    bp = np.linspace(0.0, 2 * SA, n_cells + 1)
    cdf = bp / SA - bp**2 / (4 * A)
    return _step(bp, np.diff(cdf) / np.diff(bp))


def test_zero_order_energy_of_bulk_profile():
    approx = _discretized_bulk(10**4)
    e = pk.zero_order_energy(approx)
    assert e == pytest.approx(4.0 / 3.0 * SA, abs=1e-4)
    assert abs(e - 4.0 / 3.0 * SA) <= 1e-7  # exact-average discretisation is O(h^2)


def test_bulk_profile_minimises():
    rng = np.random.default_rng(3)
    e_star = pk.zero_order_energy(_discretized_bulk(2000))
    for _ in range(5):
        edges = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 4.0, 5))])
        vals = rng.uniform(0.0, 1.0, 5)
        vals /= np.dot(vals, np.diff(edges))
        assert pk.zero_order_energy(_step(edges, vals)) >= e_star


def test_h_gamma():
    gamma = 50.0
    span = 2 * gamma * SA
    assert pk.h_gamma(gamma * SA, gamma) == 0.0
    h0 = pk.h_gamma(0.0, gamma)
    bound = pk.first_moment() / (2 * A * gamma)
    assert h0 < 0 and abs(h0) <= bound
    # oracle for h(0): [W2(span) - W2(0)] / (2 a gamma) by direct quadrature
    w2_span, _ = quad(lambda y: y * pk.interaction(y + span), 0, 40, epsabs=1e-13)
    assert h0 == pytest.approx((w2_span - pk.first_moment()) / (2 * A * gamma), abs=1e-12)
    xs = np.linspace(0.0, span, 40)
    vals = [pk.h_gamma(x, gamma) for x in xs]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))
    anti = max(abs(pk.h_gamma(x, gamma) + pk.h_gamma(span - x, gamma)) for x in xs)
    assert anti <= 1e-12
    decay = [g * abs(pk.h_gamma(math.sqrt(g), g)) for g in (1e2, 1e3, 1e4)]
    assert decay[0] > decay[1] > decay[2]
    with pytest.raises(ValueError):
        pk.h_gamma(-1.0, gamma)
    with pytest.raises(ValueError):
        pk.h_gamma(span + 1.0, gamma)


def test_convolve_examples():
    nu = _step([0.0, 1.0], [1.0])
    assert pk.convolve_V(nu, 0.5) == pytest.approx(2 * pk.cumulative(0.5), abs=1e-14)
    # zero-mass density: convolution decays exponentially
    nu0 = _step([0.0, 1.0, 2.0], [1.0, -1.0])
    far = pk.convolve_V(nu0, np.array([8.0, 12.0]))
    assert abs(far[0]) < 1e-4 and abs(far[1]) < abs(far[0]) * 1e-3
    # random 3-cell density against direct quadrature of the convolution
    rng = np.random.default_rng(7)
    nu3 = _step([0.0, 0.5, 1.1, 2.0], rng.uniform(-0.5, 1.0, 3))
    ref, _ = quad(
        lambda y: pk.interaction(0.7 - y) * nu3(y),
        0.0,
        2.0,
        points=[0.5, 0.7, 1.1],
        epsabs=1e-12,
        limit=200,
    )
    assert pk.convolve_V(nu3, 0.7) == pytest.approx(ref, abs=1e-9)


def test_first_order_energy():
    zero = _step([0.0, 1.0], [0.0])
    assert pk.first_order_energy(zero) == 0.0
    nu07 = _step([0.0, 1.0, 2.0], [0.7, -0.7])
    assert pk.first_order_energy(nu07) == pytest.approx(F_NU07, abs=1e-8)
    # the quadratic term alone matches the 2D oracle
    nu0 = _step([0.0, 1.0, 2.0], [1.0, -1.0])
    assert pk.convolution_quadratic_form(nu0) == pytest.approx(QUAD_NU0, abs=1e-9)
    # unit-height version violates the class-A lower bound
    with pytest.raises(AdmissibilityError):
        pk.first_order_energy(nu0)


def test_quadratic_term_nonnegative():
    rng = np.random.default_rng(29)
    for _ in range(10):
        nu = _random_signed(rng)
        assert pk.convolution_quadratic_form(nu) >= -1e-10


def test_first_order_energy_gamma():
    zero = _step([0.0, 1.0], [0.0])
    assert pk.first_order_energy_gamma(zero, 10.0) == 0.0
    nu07 = _step([0.0, 1.0, 2.0], [0.7, -0.7])
    f_limit = pk.first_order_energy(nu07)
    bound_const = pk.first_moment() / (2 * A)
    gaps = []
    for gamma in (1e2, 1e3, 1e4):
        fg = pk.first_order_energy_gamma(nu07, gamma)
        gap = abs(fg - f_limit)
        assert gap <= bound_const * nu07.total_variation() / gamma
        gaps.append(gap)
    assert gaps[0] > gaps[1] > gaps[2]  # convergence to the limit energy


def test_first_order_energy_gamma_rejects():
    nu_mass = _step([0.0, 1.0], [0.5])
    with pytest.raises(AdmissibilityError):
        pk.first_order_energy_gamma(nu_mass, 10.0)


def test_spectral_form_examples():
    assert pk.spectral_quadratic_form(_step([0.0, 1.0], [0.0])) == 0.0
    nu0 = _step([0.0, 1.0, 2.0], [1.0, -1.0])
    spec = pk.spectral_quadratic_form(nu0)
    assert abs(spec - QUAD_NU0) <= 1e-6 * (1 + QUAD_NU0)
    # dilation continuity
    base = pk.spectral_quadratic_form(_step([0.0, 1.0, 2.0], [1.0, -1.0]))
    for c in (0.95, 1.05):
        scaled = pk.spectral_quadratic_form(_step([0.0, c, 2 * c], [1.0, -1.0]))
        assert abs(scaled - base) <= 0.15 * base
    for c in (0.5, 2.0):
        val = pk.spectral_quadratic_form(_step([0.0, c, 2 * c], [1.0, -1.0]))
        assert np.isfinite(val) and val > 0


def test_spectral_identity_random():
    rng = np.random.default_rng(123)
    for _ in range(20):
        nu = _random_signed(rng)
        conv = pk.convolution_quadratic_form(nu)
        spec = pk.spectral_quadratic_form(nu)
        assert spec >= 0.0
        assert abs(spec - conv) <= 1e-6 * (1 + abs(conv))


def test_strict_convexity():
    rng = np.random.default_rng(31)
    bp = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 4.0, 4))])
    nu1 = _step(bp, rng.uniform(-0.5, 1.0, 4))
    nu2 = _step(bp, rng.uniform(-0.5, 1.0, 4))
    mid = _step(bp, 0.5 * (nu1.values + nu2.values))
    assert pk.first_order_energy(mid) < 0.5 * (
        pk.first_order_energy(nu1) + pk.first_order_energy(nu2)
    )


def test_check_admissible():
    zero = _step([0.0, 1.0], [0.0])
    for gamma in (1.0, 25.0, math.inf):
        assert pk.check_admissible(zero, gamma)
    mass = _step([0.0, 1.0], [1.0])
    report = pk.check_admissible(mass, gamma=5.0)
    assert not report and report.violations == ["zero mass"]
    assert pk.check_admissible(mass)  # the limit class drops the mass constraint
    low = _step([0.0, 1.0], [-2.0])
    report = pk.check_admissible(low, gamma=5.0)
    assert not report and "lower bound" in report.violations
    assert "lower bound" in pk.check_admissible(low).violations
    # negative part must live inside the bulk support
    gamma = 2.0
    span = 2 * gamma * SA
    outside = _step([0.0, span + 1.0, span + 2.0], [0.25 / (span + 1.0) * 1.0, -0.25])
    report = pk.check_admissible(
        _step(
            [0.0, 1.0, span + 2.0],
            [(span + 1.0) * 0.1, -0.1],
        ),
        gamma=gamma,
    )
    assert not report
    assert "negative part outside bulk support" in report.violations
    # total variation cap for finite gamma
    big = _step([0.0, 1.0, 2.0], [30.0, -30.0])
    assert "total variation" in pk.check_admissible(big, gamma=5.0).violations
    del outside
