"""Chernoff approximations of the translation and heat semigroups on the real line.

Chernoff functions are represented exactly as finite shift mixtures, their
n-th powers are computed by convolution, and errors against exact
semigroup oracles are measured in the sup norm.
"""

from .chernoff import (
    ChernoffFamily,
    RateFunction,
    generator_action,
    heat_G,
    heat_S,
    inverse_log_rate,
    moment_match_order,
    norm_growth_check,
    parse_family,
    parse_rate,
    perturbed_shift,
    power_rate,
    quadratic_shift,
    tangency_check,
    translation_exact,
    zero_rate,
)
from .errors import (
    ConfigurationError,
    ConstructionError,
    DegenerateFitError,
    DomainError,
    EvaluationError,
    ResourceError,
)
from .experiments import (
    ErrorCurve,
    RateFit,
    SamplingDomain,
    default_domain,
    error_curve,
    fit_rate,
    linearity_check,
    slow_convergence_experiment,
    subspace_probe,
    sup_error,
)
from .mixture import ShiftMixture, apply, charfn, convolve, make, moment, operator_norm, power
from .semigroups import SemigroupOracle, heat_oracle, heat_quadrature, heat_spectral, translate, translation_oracle
from .testfns import TestFunction, const, gaussian, holder_sine, parse_function, sine

__version__ = "0.1.0"
