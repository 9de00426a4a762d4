"""Self-verification suite covering the invariants of every module.

Each check is a small deterministic experiment; a check passes when its
assertions hold and reports a one-line detail string.  ``run_all`` executes
the whole battery and is what the command-line ``verify`` command wraps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import boundary_layer, continuum, discrete, potential, scaling

_SEED = 1904


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _random_step_density(rng, max_cells=6, span=5.0, lo=-0.7, hi=1.3):
    ncells = int(rng.integers(2, max_cells + 1))
    bp = np.concatenate([[0.0], np.sort(rng.uniform(0.05, span, ncells))])
    vals = rng.uniform(lo, hi, ncells)
    return continuum.PiecewiseConstantDensity(bp, vals)


def _random_configuration(rng, n, gamma):
    # spacings bounded away from 0 keep the FD oracle's truncation error
    # (V''' grows like s^-4 at contact) below the comparison tolerances
    gaps = rng.uniform(0.04, 0.3, n)
    positions = np.concatenate([[0.0], np.cumsum(gaps)])
    return discrete.WallConfiguration(n=n, gamma=gamma, positions=positions)


# --------------------------------------------------------------------------
# potential


def check_potential_evenness():
    rng = np.random.default_rng(_SEED)
    s = rng.uniform(-10.0, 10.0, 1000)
    s = s[s != 0.0]
    left, right = potential.interaction(s), potential.interaction(-s)
    assert np.all(left == right), "V(s) != V(-s)"
    return f"exact evenness on {s.size} samples"


def check_potential_monotone():
    rng = np.random.default_rng(_SEED + 1)
    s1 = rng.uniform(1e-3, 10.0, 500)
    s2 = s1 + rng.uniform(1e-3, 5.0, 500)
    assert np.all(potential.interaction(s1) > potential.interaction(s2))
    return "V strictly decreasing on 500 random ordered pairs"


def check_potential_derivative():
    s = np.linspace(0.1, 10.0, 40)
    h = 1e-6
    fd = (potential.interaction(s + h) - potential.interaction(s - h)) / (2 * h)
    err = np.max(np.abs(potential.interaction(s, 1) - fd))
    assert err <= 1e-5, f"derivative mismatch {err:.3e}"
    return f"max |V' - FD| = {err:.2e}"


def check_potential_antiderivative():
    worst = 0.0
    for y in (0.01, 0.5, 3.0):
        ref, _ = quad(potential.interaction, y, np.inf, epsabs=1e-12, epsrel=1e-12)
        worst = max(worst, abs(potential.tail_integral(y) - ref))
    assert worst <= 1e-9, f"tail integral off by {worst:.3e}"
    return f"max closed-form vs quadrature gap = {worst:.2e}"


def check_potential_mass():
    val, _ = quad(potential.interaction, 0.0, np.inf, epsabs=1e-12, epsrel=1e-12)
    err = abs(val - potential.HALF_MASS)
    assert err <= 1e-8, f"integral of V off pi^2/6 by {err:.3e}"
    return f"quadrature of V matches pi^2/6 to {err:.2e}"


def check_fourier_positive():
    w = np.logspace(-3, 3, 200)
    vals = potential.fourier(w)
    assert np.all(vals > 0.0)
    return "Fourier transform positive on log grid [1e-3, 1e3]"


def cosine_transform(w: float) -> float:
    """Numerical 2*integral(0,inf) V(x) cos(2 pi w x) dx, split so the
    log-singular endpoint is never evaluated."""
    head, _ = quad(
        lambda x: potential.interaction(x) * math.cos(2.0 * math.pi * w * x),
        0.0,
        1.0,
        epsabs=1e-13,
        epsrel=1e-13,
        limit=400,
    )
    tail, _ = quad(
        potential.interaction,
        1.0,
        np.inf,
        weight="cos",
        wvar=2.0 * math.pi * w,
        epsabs=1e-13,
        limit=400,
    )
    return 2.0 * (head + tail)


def check_fourier_plancherel():
    worst = 0.0
    for w in (0.1, 1.0, 10.0):
        worst = max(worst, abs(cosine_transform(w) - potential.fourier(w)))
    assert worst <= 1e-6, f"cosine transform gap {worst:.3e}"
    return f"max closed form vs cosine transform gap = {worst:.2e}"


def check_small_s_asymptote():
    limit = 1.0 - math.log(2.0)
    worst = max(
        abs(potential.interaction(s) + math.log(abs(s)) - limit) for s in (1e-4, 1e-6)
    )
    assert worst <= 1e-3
    return f"V(s) + log|s| -> 1 - log 2 (gap {worst:.1e})"


def check_dilog():
    assert potential.dilog(0.0) == 0.0
    assert abs(potential.dilog(1.0) - potential.HALF_MASS) <= 1e-12
    z = np.linspace(0.01, 0.99, 99)
    gap = np.abs(
        potential.dilog(z)
        + potential.dilog(1.0 - z)
        - (potential.HALF_MASS - np.log(z) * np.log1p(-z))
    )
    assert np.max(gap) <= 1e-10
    return f"reflection identity holds to {np.max(gap):.2e}"


def check_second_tail_moment():
    fm = potential.first_moment()
    assert math.isfinite(fm) and fm > 0
    xs = [0.0, 0.1, 1.0, 10.0]
    vals = [potential.second_tail_moment(x) for x in xs]
    assert all(a >= b for a, b in zip(vals, vals[1:])), "W2 not decreasing"
    assert all(v <= fm for v in vals[1:])
    return f"W2 decreasing from first moment {fm:.6f}"


# --------------------------------------------------------------------------
# discrete pile-up


def check_gradient_hessian_fd():
    rng = np.random.default_rng(_SEED + 2)
    worst_g, worst_h = 0.0, 0.0
    for _ in range(20):
        n = int(rng.integers(2, 17))
        gamma = float(rng.uniform(0.5, 4.0))
        cfg = _random_configuration(rng, n, gamma)
        x = cfg.positions
        h = 1e-6
        g = discrete.gradient(cfg)
        hess = discrete.hessian(cfg)
        for i in range(1, n + 1):
            xp, xm = x.copy(), x.copy()
            xp[i] += h
            xm[i] -= h
            ep = discrete.energy(discrete.WallConfiguration(n, gamma, xp))
            em = discrete.energy(discrete.WallConfiguration(n, gamma, xm))
            worst_g = max(worst_g, abs(g[i - 1] - (ep - em) / (2 * h)))
            gp = discrete.gradient(discrete.WallConfiguration(n, gamma, xp))
            gm = discrete.gradient(discrete.WallConfiguration(n, gamma, xm))
            worst_h = max(worst_h, np.max(np.abs(hess[:, i - 1] - (gp - gm) / (2 * h))))
    assert worst_g <= 1e-6, f"gradient FD gap {worst_g:.3e}"
    assert worst_h <= 1e-4, f"hessian FD gap {worst_h:.3e}"
    return f"20 random configs: grad gap {worst_g:.1e}, hess gap {worst_h:.1e}"


def check_newton_init_independence():
    n, gamma = 16, 4.0
    a_sol = discrete.newton_minimize(n, gamma)
    shifted = discrete.bulk_positions(n, gamma).positions * 1.07
    b_sol = discrete.newton_minimize(
        n, gamma, init=discrete.WallConfiguration(n, gamma, shifted)
    )
    gap = np.max(np.abs(a_sol.positions - b_sol.positions))
    assert gap <= 1e-8, f"minimisers disagree by {gap:.3e}"
    return f"two initialisations agree to {gap:.1e}"


def check_minimiser_ordering():
    sol = discrete.newton_minimize(64, 8.0)
    assert sol.positions[1] > 0.0
    assert np.all(np.diff(sol.positions) > 0.0)
    return "minimiser strictly increasing with x_1 > 0"


def check_newton_energy_monotone():
    trace = []
    discrete.newton_minimize(64, 8.0, trace=trace)
    energies = [e for _, e in trace]
    assert all(a >= b for a, b in zip(energies, energies[1:]))
    return f"energy non-increasing over {len(energies)} accepted steps"


def check_bulk_consistency():
    n = 2**7
    sol = discrete.newton_minimize(n, math.sqrt(n))
    rho = discrete.discrete_density(sol)
    sa = potential.SQRT_HALF_MASS
    window = (rho.locations >= 2 * sa / 3) & (rho.locations <= 4 * sa / 3)
    gap = np.max(np.abs(rho.values[window] - continuum.rho_star(rho.locations[window])))
    bound = 0.1 * continuum.rho_star(sa)
    assert gap <= bound, f"bulk deviation {gap:.3e} > {bound:.3e}"
    return f"middle-third deviation {gap:.3f} <= {bound:.3f}"


def check_bulk_positions_quantiles():
    cfg = discrete.bulk_positions(16)
    y = cfg.positions
    sa = potential.SQRT_HALF_MASS
    cdf = y / sa - y**2 / (4.0 * potential.HALF_MASS)
    gap = np.max(np.abs(cdf - np.arange(17) / 16.0))
    assert gap <= 1e-12
    return f"bulk positions solve the quantile equation to {gap:.1e}"


# --------------------------------------------------------------------------
# continuum


def check_spectral_identity():
    rng = np.random.default_rng(_SEED + 3)
    worst = 0.0
    for _ in range(20):
        nu = _random_step_density(rng)
        conv = continuum.convolution_quadratic_form(nu)
        spec = continuum.spectral_quadratic_form(nu)
        assert spec >= 0.0
        worst = max(worst, abs(spec - conv) / (1.0 + abs(conv)))
    assert worst <= 1e-6, f"spectral identity off by {worst:.3e}"
    return f"20 random densities, worst relative gap {worst:.1e}"


def check_h_gamma_properties():
    gamma = 100.0
    span = 2.0 * gamma * potential.SQRT_HALF_MASS
    xs = np.linspace(0.0, span, 100)
    vals = [continuum.h_gamma(x, gamma) for x in xs]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:])), "h not non-decreasing"
    anti = max(
        abs(continuum.h_gamma(x, gamma) + continuum.h_gamma(span - x, gamma))
        for x in xs[:50]
    )
    assert anti <= 1e-12, f"antisymmetry violated by {anti:.3e}"
    bound = potential.first_moment() / (2.0 * potential.HALF_MASS * gamma)
    assert max(abs(v) for v in vals) <= bound + 1e-15
    decay = [g * abs(continuum.h_gamma(math.sqrt(g), g)) for g in (1e2, 1e3, 1e4)]
    assert decay[0] > decay[1] > decay[2]
    return f"monotone, antisymmetric to {anti:.1e}, bound {bound:.2e} respected"


def check_first_order_convexity():
    rng = np.random.default_rng(_SEED + 4)
    bp = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 4.0, 4))])
    nu1 = continuum.PiecewiseConstantDensity(bp, rng.uniform(-0.5, 1.0, 4))
    nu2 = continuum.PiecewiseConstantDensity(bp, rng.uniform(-0.5, 1.0, 4))
    mid = continuum.PiecewiseConstantDensity(bp, 0.5 * (nu1.values + nu2.values))
    f1, f2, fm = map(continuum.first_order_energy, (nu1, nu2, mid))
    assert fm < 0.5 * (f1 + f2), "strict convexity violated"
    return f"F(midpoint) = {fm:.6f} < {0.5 * (f1 + f2):.6f}"


def check_zero_order_minimiser():
    rng = np.random.default_rng(_SEED + 5)
    sa = potential.SQRT_HALF_MASS
    bp = np.linspace(0.0, 2.0 * sa, 2001)
    cdf = bp / sa - bp**2 / (4.0 * potential.HALF_MASS)
    star = continuum.PiecewiseConstantDensity(bp, np.diff(cdf) / np.diff(bp))
    e_star = continuum.zero_order_energy(star)
    for _ in range(5):
        edges = np.concatenate([[0.0], np.sort(rng.uniform(0.1, 4.0, 5))])
        raw = rng.uniform(0.0, 1.0, 5)
        raw /= np.dot(raw, np.diff(edges))
        rho = continuum.PiecewiseConstantDensity(edges, raw)
        assert continuum.zero_order_energy(rho) >= e_star
    return f"5 random probability densities all above E = {e_star:.6f}"


def check_admissibility_clauses():
    nu_zero = continuum.PiecewiseConstantDensity([0.0, 1.0], [0.0])
    assert continuum.check_admissible(nu_zero, gamma=5.0)
    assert continuum.check_admissible(nu_zero)
    nu_mass = continuum.PiecewiseConstantDensity([0.0, 1.0], [1.0])
    report = continuum.check_admissible(nu_mass, gamma=5.0)
    assert not report and "zero mass" in report.violations
    nu_low = continuum.PiecewiseConstantDensity([0.0, 1.0], [-2.0])
    report = continuum.check_admissible(nu_low, gamma=5.0)
    assert not report and "lower bound" in report.violations
    return "zero density admissible; mass and lower-bound clauses detected"


# --------------------------------------------------------------------------
# boundary layer


def check_grid_geometry():
    grid = boundary_layer.build_grid()
    assert (grid.C, grid.b, grid.N) == (3e-5 / 1.1, 1.1, 141)
    widths = grid.C * grid.b ** np.arange(1, grid.N + 1)
    gap = abs(np.sum(widths) - grid.breakpoints[-1])
    assert gap <= 1e-12 * grid.breakpoints[-1]
    return f"(C, b, N) = (2.727e-5, 1.1, 141); geometric sum gap {gap:.1e}"


def check_collocation_solution():
    sol = boundary_layer.solve_nu_star(boundary_layer.build_grid())
    lam = sol.nu_star.values
    residual = np.max(np.abs(sol.residual_report[:, 1]))
    assert residual <= 1e-10
    assert lam[0] > 0.0, "no density excess at the lock"
    assert lam.min() < 0.0, "no dip"
    assert lam.min() > -continuum.rho_star(0.0), "lower bound violated"
    return f"residual {residual:.1e}; lock excess and dip present"


def check_grid_refinement_stability():
    coarse = boundary_layer.solve_nu_star(boundary_layer.build_grid())
    fine_grid = boundary_layer.build_grid(width_at_one=math.sqrt(1.1) - 1.0)
    fine = boundary_layer.solve_nu_star(fine_grid)
    pts = coarse.grid.midpoints
    window = (pts >= coarse.grid.breakpoints[1]) & (pts <= 10.0)
    # the profile a step solution represents is the affine interpolation of
    # its (midpoint, value) nodes; raw cell averages at different widths
    # differ systematically near the inverse-square-root lock singularity
    coarse_vals = coarse.nu_star.values[window]
    fine_vals = np.interp(pts[window], fine.grid.midpoints, fine.nu_star.values)
    rel = np.max(np.abs(fine_vals - coarse_vals)) / np.max(np.abs(coarse_vals))
    assert rel <= 0.02, f"refinement changes profile by {rel:.3%}"
    mass_change = abs(fine.nu_star.mass() - coarse.nu_star.mass()) / abs(
        coarse.nu_star.mass()
    )
    assert mass_change <= 0.05, f"mass changes by {mass_change:.3%}"
    return f"profile change {rel:.2%}, mass change {mass_change:.2%} under b -> sqrt(b)"


def check_matched_density_limit():
    sol = boundary_layer.solve_nu_star(boundary_layer.build_grid())
    xs = np.linspace(0.1, 2.0 * potential.SQRT_HALF_MASS, 50)
    gaps = []
    for gamma in (1e2, 1e3):
        matched = boundary_layer.matched_density(sol, gamma, xs)
        gaps.append(np.max(np.abs(matched - continuum.rho_star(xs))))
    assert gaps[1] <= gaps[0]
    assert gaps[1] <= 0.05
    return f"sup gap to bulk density: {gaps[0]:.2e} (gamma=1e2) -> {gaps[1]:.2e} (1e3)"


# --------------------------------------------------------------------------
# scaling


def check_alpha_nonnegative():
    rows = scaling.exponent_table([8, 16], ["1/2"]).rows
    assert all(r.alpha >= 0.0 for r in rows)
    return "energy gaps non-negative"


def check_exponent_trend():
    ns = [2**k for k in range(3, 8)]
    report = scaling.exponent_table(ns, ["1/2"])
    ps = [r.p for r in report.rows]
    assert all(a > b for a, b in zip(ps, ps[1:])), "p_n not decreasing"
    assert abs(ps[-1] - 0.5) < 0.05
    return f"p_n decreasing toward 1/2: {[round(p, 3) for p in ps]}"


def check_exponent_reproducibility():
    ns = [8, 16, 32]
    loose = scaling.exponent_table(ns, ["1/2"], tol=1e-10)
    tight = scaling.exponent_table(ns, ["1/2"], tol=1e-11)
    gap = max(abs(a.p - b.p) for a, b in zip(loose.rows, tight.rows))
    assert gap <= 1e-3, f"p_n moves by {gap:.2e} under 10x tighter tolerance"
    return f"p_n stable to {gap:.1e} under 10x tighter Newton tolerance"


def check_collapse_identical():
    run = discrete.rescaled_nu_samples(discrete.newton_minimize(64, 8.0))
    assert scaling.collapse_metric([run, run]) == 0.0
    return "identical runs collapse to 0"


ALL_CHECKS = [
    ("potential: evenness", check_potential_evenness),
    ("potential: monotone decreasing", check_potential_monotone),
    ("potential: derivative vs finite differences", check_potential_derivative),
    ("potential: tail integral vs quadrature", check_potential_antiderivative),
    ("potential: half-line mass pi^2/6", check_potential_mass),
    ("potential: Fourier positivity", check_fourier_positive),
    ("potential: Fourier vs cosine transform", check_fourier_plancherel),
    ("potential: small-s asymptote", check_small_s_asymptote),
    ("potential: dilogarithm identities", check_dilog),
    ("potential: second tail moment", check_second_tail_moment),
    ("discrete: gradient/Hessian finite differences", check_gradient_hessian_fd),
    ("discrete: Newton init independence", check_newton_init_independence),
    ("discrete: minimiser ordering", check_minimiser_ordering),
    ("discrete: energy monotone under damping", check_newton_energy_monotone),
    ("discrete: bulk positions are quantiles", check_bulk_positions_quantiles),
    ("discrete: bulk agreement in the middle third", check_bulk_consistency),
    ("continuum: spectral quadratic identity", check_spectral_identity),
    ("continuum: h_gamma properties", check_h_gamma_properties),
    ("continuum: strict convexity", check_first_order_convexity),
    ("continuum: bulk density minimises E", check_zero_order_minimiser),
    ("continuum: admissibility diagnostics", check_admissibility_clauses),
    ("boundary layer: grid geometry", check_grid_geometry),
    ("boundary layer: collocation solution", check_collocation_solution),
    ("boundary layer: refinement stability", check_grid_refinement_stability),
    ("boundary layer: matched density limit", check_matched_density_limit),
    ("scaling: gaps non-negative", check_alpha_nonnegative),
    ("scaling: exponent trend", check_exponent_trend),
    ("scaling: exponent reproducibility", check_exponent_reproducibility),
    ("scaling: collapse of identical runs", check_collapse_identical),
]


def run_all(echo=print) -> list[CheckResult]:
    """Run every invariant check, printing one line per check."""
    results = []
    for name, fn in ALL_CHECKS:
        try:
            detail = fn()
            results.append(CheckResult(name, True, detail))
            if echo:
                echo(f"ok   {name}: {detail}")
        except AssertionError as exc:
            results.append(CheckResult(name, False, str(exc)))
            if echo:
                echo(f"FAIL {name}: {exc}")
    return results
