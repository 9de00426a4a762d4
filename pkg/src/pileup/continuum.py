"""Continuum energies of the pile-up: bulk profile and boundary-layer terms.

The zero-order limit of the discrete energy is

    E(rho) = a * integral rho^2 + integral x rho(x) dx,      a = pi^2/6,

minimised over probability densities by the affine profile rho_*.  The
next order in 1/gamma acts on the blow-up nu of the density mismatch at
the lock and reads

    F_gamma(nu) = 1/2 integral (V conv nu) nu - integral g nu + integral h_gamma nu,

with g the normalised tail of V and h_gamma a finite-size correction that
vanishes like 1/gamma.  Its limit F drops the h term.  Everything here is
evaluated on piecewise-constant densities, for which the convolution with
V reduces to differences of the antiderivative Phi and the quadratic term
can be cross-checked in Fourier variables, where it equals the integral of
V^ |nu^|^2 (the quadratic form of the convolutional square root of V).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from . import potential
from .errors import AdmissibilityError


@dataclass
class PiecewiseConstantDensity:
    """Step density on [0, inf): value ``values[i]`` on
    (breakpoints[i], breakpoints[i+1]).  Values may be signed."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.breakpoints = np.asarray(self.breakpoints, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.breakpoints.ndim != 1 or self.breakpoints.size < 2:
            raise ValueError("need at least one cell")
        if self.values.shape != (self.breakpoints.size - 1,):
            raise ValueError("values must have one entry per cell")
        if self.breakpoints[0] < 0.0:
            raise ValueError("support must lie in [0, inf)")
        if np.any(np.diff(self.breakpoints) <= 0.0):
            raise ValueError("breakpoints must be strictly increasing")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("cell values must be finite")

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def mass(self) -> float:
        return float(np.dot(self.values, self.widths))

    def total_variation(self) -> float:
        return float(np.dot(np.abs(self.values), self.widths))

    def __call__(self, x):
        """Pointwise evaluation, zero outside the support."""
        x_arr = np.asarray(x, dtype=float)
        idx = np.searchsorted(self.breakpoints, x_arr, side="right") - 1
        inside = (idx >= 0) & (idx < self.values.size)
        out = np.where(inside, self.values[np.clip(idx, 0, self.values.size - 1)], 0.0)
        if x_arr.ndim == 0:
            return float(out)
        return out


@dataclass
class AdmissibilityReport:
    admissible: bool
    violations: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.admissible


def rho_star(x, gamma: float = math.inf):
    """Bulk density profile.

    For finite gamma this is the blown-up profile
    (1/sqrt(a) - x/(2*a*gamma))^+ with support [0, 2*gamma*sqrt(a)]; the
    default gamma = inf selects the unrescaled minimiser of the zero-order
    energy, (1/sqrt(a) - x/(2a))^+.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    slope_scale = 1.0 if math.isinf(gamma) else gamma
    x_arr = np.asarray(x, dtype=float)
    # factored so the value vanishes exactly at the support endpoint
    val = (
        1.0 - x_arr / (2.0 * slope_scale * potential.SQRT_HALF_MASS)
    ) / potential.SQRT_HALF_MASS
    out = np.maximum(val, 0.0)
    if x_arr.ndim == 0:
        return float(out)
    return out


def zero_order_energy(rho: PiecewiseConstantDensity) -> float:
    """Zero-order energy E(rho) = a * integral rho^2 + integral x rho of a
    probability step density, in exact cell-wise closed form."""
    if np.any(rho.values < -1e-12):
        raise AdmissibilityError(
            "zero-order energy needs a non-negative density",
            violations=["non-negative"],
        )
    if abs(rho.mass() - 1.0) > 1e-8:
        raise AdmissibilityError(
            f"density mass {rho.mass():.12f} is not 1", violations=["unit mass"]
        )
    bp = rho.breakpoints
    quadratic = potential.HALF_MASS * float(np.dot(rho.values**2, rho.widths))
    loading = 0.5 * float(np.dot(rho.values, bp[1:] ** 2 - bp[:-1] ** 2))
    return quadratic + loading


def h_gamma(x, gamma: float) -> float:
    """Finite-size correction h_gamma(x) of the first-order energy.

    Equal to [W2(2*gamma*sqrt(a) - x) - W2(x)] / (2*a*gamma) in terms of the
    second tail moment W2; non-decreasing, antisymmetric about
    gamma*sqrt(a), and bounded by W2(0)/(2*a*gamma) in absolute value.
    """
    if gamma <= 0 or math.isinf(gamma):
        raise ValueError("h_gamma needs a finite positive gamma")
    span = 2.0 * gamma * potential.SQRT_HALF_MASS
    x = float(x)
    if x < -1e-12 or x > span * (1.0 + 1e-12) + 1e-12:
        raise ValueError(f"x = {x} outside [0, {span}]")
    x = min(max(x, 0.0), span)
    w2 = potential.second_tail_moment
    return (w2(span - x) - w2(x)) / (2.0 * potential.HALF_MASS * gamma)


def convolve_V(nu: PiecewiseConstantDensity, x):
    """Convolution (V conv nu)(x), exact per cell via the antiderivative:
    each cell I_i contributes values[i] * (Phi(x - a_{i-1}) - Phi(x - a_i))."""
    x_arr = np.asarray(x, dtype=float)
    pts = np.atleast_1d(x_arr)
    phi = potential.cumulative(pts[:, None] - nu.breakpoints[None, :])
    out = -np.diff(phi, axis=1) @ nu.values
    if x_arr.ndim == 0:
        return float(out[0])
    return out


def check_admissible(
    nu: PiecewiseConstantDensity, gamma: float = math.inf
) -> AdmissibilityReport:
    """Check membership in the admissible class of the first-order energy.

    Finite gamma: total variation at most 2*gamma, zero mass (within 1e-10),
    and the pointwise lower bound nu >= -rho_star(.; gamma), which also
    confines the negative part to the bulk support [0, 2*gamma*sqrt(a)].
    gamma = inf (the limit class): only the lower bound -rho_star(0) and a
    finite local mass bound are required; zero mass is dropped.
    Never raises; the report lists each violated clause.
    """
    violations: list[str] = []
    if gamma <= 0:
        raise ValueError("gamma must be positive")

    if math.isinf(gamma):
        floor = -rho_star(0.0)
        if np.any(nu.values < floor - 1e-12):
            violations.append("lower bound")
    else:
        if nu.total_variation() > 2.0 * gamma + 1e-10:
            violations.append("total variation")
        if abs(nu.mass()) > 1e-10:
            violations.append("zero mass")
        # the bulk profile decreases, so the binding value in each cell is at
        # the right endpoint
        floor = -rho_star(nu.breakpoints[1:], gamma=gamma)
        if np.any(nu.values < floor - 1e-12):
            violations.append("lower bound")
        span = 2.0 * gamma * potential.SQRT_HALF_MASS
        negative = nu.values < -1e-12
        if np.any(nu.breakpoints[1:][negative] > span * (1.0 + 1e-12)):
            violations.append("negative part outside bulk support")

    return AdmissibilityReport(admissible=not violations, violations=violations)


def convolution_quadratic_form(nu: PiecewiseConstantDensity, epsabs: float = 1e-9) -> float:
    """Interaction term integral (V conv nu) nu: the inner integral is exact
    (antiderivative differences) and the outer integral over each cell uses
    adaptive quadrature."""
    total = 0.0
    bp = nu.breakpoints
    for i, lam in enumerate(nu.values):
        if lam == 0.0:
            continue
        cell_integral, _ = quad(
            lambda x: convolve_V(nu, x),
            bp[i],
            bp[i + 1],
            epsabs=epsabs,
            epsrel=1e-10,
            limit=200,
        )
        total += lam * cell_integral
    return total


def _linear_tail_term(nu: PiecewiseConstantDensity) -> float:
    """integral g nu by cell-wise quadrature of the normalised tail."""
    total = 0.0
    bp = nu.breakpoints
    for i, lam in enumerate(nu.values):
        if lam == 0.0:
            continue
        cell_integral, _ = quad(
            potential.normalized_tail,
            bp[i],
            bp[i + 1],
            epsabs=1e-12,
            epsrel=1e-12,
            limit=200,
        )
        total += lam * cell_integral
    return total


def first_order_energy(nu: PiecewiseConstantDensity) -> float:
    """Limit boundary-layer energy F(nu) = 1/2 integral (V conv nu) nu
    - integral g nu on the limit admissible class."""
    report = check_admissible(nu, gamma=math.inf)
    if not report:
        raise AdmissibilityError(
            "density outside the limit admissible class: "
            + ", ".join(report.violations),
            violations=report.violations,
        )
    return 0.5 * convolution_quadratic_form(nu) - _linear_tail_term(nu)


def first_order_energy_gamma(nu: PiecewiseConstantDensity, gamma: float) -> float:
    """Finite-gamma boundary-layer energy F_gamma(nu) = F(nu) + integral h_gamma nu."""
    if gamma <= 0 or math.isinf(gamma):
        raise ValueError("gamma must be finite and positive")
    report = check_admissible(nu, gamma=gamma)
    if not report:
        raise AdmissibilityError(
            "density outside the finite-gamma admissible class: "
            + ", ".join(report.violations),
            violations=report.violations,
        )
    base = 0.5 * convolution_quadratic_form(nu) - _linear_tail_term(nu)
    correction = 0.0
    bp = nu.breakpoints
    for i, lam in enumerate(nu.values):
        if lam == 0.0:
            continue
        cell_integral, _ = quad(
            lambda x: h_gamma(x, gamma),
            bp[i],
            bp[i + 1],
            epsabs=1e-12,
            epsrel=1e-10,
            limit=200,
        )
        correction += lam * cell_integral
    return base + correction


def _step_fourier_sq(nu: PiecewiseConstantDensity, w: np.ndarray) -> np.ndarray:
    """|nu^(w)|^2 for a step density, via the closed-form cell transforms."""
    bp = nu.breakpoints
    widths = np.diff(bp)
    centers = 0.5 * (bp[:-1] + bp[1:])
    hat = np.zeros_like(w, dtype=complex)
    for lam, width, center in zip(nu.values, widths, centers):
        if lam == 0.0:
            continue
        hat += lam * width * np.sinc(w * width) * np.exp(-2j * math.pi * w * center)
    return np.abs(hat) ** 2


def spectral_quadratic_form(nu: PiecewiseConstantDensity, tail_tol: float = 1e-7) -> float:
    """Interaction term computed on the Fourier side: integral V^ |nu^|^2.

    The integrand is even, positive, and decays like 1/w^3 (the 1/w decay of
    V^ times the 1/w cell transforms), so it is integrated by composite
    Gauss-Legendre panels up to a cutoff chosen from that decay to keep the
    truncated tail below ``tail_tol``.
    """
    strength = float(np.sum(np.abs(nu.values)))
    if strength == 0.0:
        return 0.0
    # tail bound: int_W^inf (1/(2w)) (S/(pi w))^2 dw * 2 (both signs)
    cutoff = max(64.0, strength * math.sqrt(0.051 / tail_tol))
    a_max = float(nu.breakpoints[-1])
    panel = min(0.5, 0.5 / max(a_max, 1.0))
    n_panels = int(math.ceil(cutoff / panel))
    nodes, weights = leggauss(16)
    starts = panel * np.arange(n_panels)
    pts = (starts[:, None] + 0.5 * panel * (nodes[None, :] + 1.0)).ravel()
    vals = potential.fourier(pts) * _step_fourier_sq(nu, pts)
    integral_half = 0.5 * panel * float((vals.reshape(n_panels, nodes.size) @ weights).sum())
    return 2.0 * integral_half
