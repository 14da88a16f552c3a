"""capspec: spectral and extremal analysis of geodesic caps on the sphere.

Dirichlet eigenvalues and radial eigenfunctions of the Laplace-Beltrami
operator on a polar cap, the cap torsion function by three independent
routes, and the minimal-solution branch of the cap Gelfand problem with
its extremal-parameter bracket.  Built on a radial shooting integrator
(compiled kernel with a pure-Python twin) and an in-house special-function
layer (gamma/digamma with pole bookkeeping, Gauss hypergeometric series
with its logarithmic companion, associated Legendre functions of general
degree and half-integer or integer order).
"""

from .cap import (
    CapDomain,
    RadialFunction,
    RadialGrid,
    cap_area,
    inner_product,
    make_domain,
    make_grid,
    surface_area_sphere,
)
from .eigen import (
    EigenPair,
    decay_exponent_estimate,
    eigen_closed_n3,
    find_eigenvalue,
    fourier_coefficient,
    lambda_from_nu,
    nu_from_lambda,
)
from .errors import (
    BracketInconsistencyError,
    CapspecError,
    GrowthConditionWarning,
    SolverError,
    ValidationError,
)
from .gelfand import (
    LambdaStarEstimate,
    MinimalSolution,
    Nonlinearity,
    exponential,
    lambda_star_bracket,
    minimal_solution,
    nonlinearity_stats,
    poisson_solve,
    power,
    theorem_ratio,
)
from .specfun import (
    digamma,
    gamma,
    gamma_pole_limit,
    hyp2f1,
    hyp2f1_near_one,
    hypU,
    legendre_definite_integral,
    legendre_p,
)
from .torsion import (
    TorsionResult,
    sharpness_gap,
    torsion_closed_form,
    torsion_greens,
    torsion_spectral,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # domains and grids
    "CapDomain", "RadialGrid", "RadialFunction", "make_domain", "make_grid",
    "cap_area", "surface_area_sphere", "inner_product",
    # spectra
    "EigenPair", "find_eigenvalue", "eigen_closed_n3", "fourier_coefficient",
    "decay_exponent_estimate", "lambda_from_nu", "nu_from_lambda",
    # torsion
    "TorsionResult", "torsion_closed_form", "torsion_greens",
    "torsion_spectral", "sharpness_gap",
    # gelfand branch
    "Nonlinearity", "MinimalSolution", "LambdaStarEstimate", "exponential",
    "power", "nonlinearity_stats", "poisson_solve", "minimal_solution",
    "lambda_star_bracket", "theorem_ratio",
    # special functions
    "gamma", "digamma", "gamma_pole_limit", "hyp2f1", "hyp2f1_near_one",
    "hypU", "legendre_p", "legendre_definite_integral",
    # errors
    "CapspecError", "ValidationError", "SolverError",
    "BracketInconsistencyError", "GrowthConditionWarning",
]
