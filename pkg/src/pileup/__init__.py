"""Numerical toolkit for dislocation-wall pile-ups at a lock.

Discrete wall energies with an exact Newton minimiser, the continuum bulk
and boundary-layer energies they converge to, a collocation solver for the
boundary-layer profile, and the power-law scaling experiments connecting
the two descriptions.
"""

from .boundary_layer import (
    BoundaryLayerSolution,
    CollocationGrid,
    assemble_system,
    build_grid,
    dip_metrics,
    el_residual,
    matched_density,
    solve_nu_star,
)
from .continuum import (
    AdmissibilityReport,
    PiecewiseConstantDensity,
    check_admissible,
    convolution_quadratic_form,
    convolve_V,
    first_order_energy,
    first_order_energy_gamma,
    h_gamma,
    rho_star,
    spectral_quadratic_form,
    zero_order_energy,
)
from .discrete import (
    DensitySamples,
    PhysicalParameters,
    WallConfiguration,
    bulk_positions,
    discrete_density,
    energy,
    gamma_from_physical,
    gradient,
    hessian,
    newton_minimize,
    rescaled_nu_samples,
)
from .errors import (
    AdmissibilityError,
    ConvergenceError,
    GridError,
    PileupError,
    SingularEnergyError,
    SolverError,
    StructuralError,
)
from .potential import (
    HALF_MASS,
    SQRT_HALF_MASS,
    cumulative,
    dilog,
    first_moment,
    fourier,
    interaction,
    normalized_tail,
    second_tail_moment,
    tail_integral,
)
from .scaling import (
    ScalingReport,
    ScalingRow,
    alpha,
    collapse_metric,
    exponent_table,
    gamma_for,
)

__version__ = "0.1.0"
