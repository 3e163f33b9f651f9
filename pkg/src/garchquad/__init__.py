"""GARCH(p,q) quasi-likelihood estimation by derivative-sign localization and
per-coordinate quadratic response-surface fits, with baseline optimizers and a
Monte Carlo RMSE benchmark."""

from .baselines import (
    OptimizerConfig,
    bfgs,
    default_start,
    estimate_with,
    from_unconstrained,
    nelder_mead,
    to_unconstrained,
)
from .bench import (
    METHODS,
    RmseReport,
    Scenario,
    replication_seed,
    rmse,
    run_estimator,
    run_rmse_study,
    write_reports_csv,
)
from .errors import EstimationError, LineSearchError
from .likelihood import (
    InitPolicy,
    Objective,
    conditional_variances,
    numeric_hessian,
    quasi_nll,
    quasi_nll_gradient,
)
from .localization import (
    LocalizationConfig,
    LocalizationWarning,
    SearchBox,
    find_omega_bar,
    localize,
    scan_omega,
)
from .model import (
    GarchOrder,
    ParamVector,
    TimeSeries,
    coordinate_names,
    in_stationarity_set,
    is_stationary,
    simulate,
    unconditional_variance,
)
from .quadfit import (
    EstimationResult,
    QuadraticFit,
    diagonal_cut,
    estimate,
    fit_quadratic,
    vertex,
)

__version__ = "0.1.0"

__all__ = [
    "EstimationError",
    "EstimationResult",
    "GarchOrder",
    "InitPolicy",
    "LineSearchError",
    "LocalizationConfig",
    "LocalizationWarning",
    "METHODS",
    "Objective",
    "OptimizerConfig",
    "ParamVector",
    "QuadraticFit",
    "RmseReport",
    "Scenario",
    "SearchBox",
    "TimeSeries",
    "bfgs",
    "conditional_variances",
    "coordinate_names",
    "default_start",
    "diagonal_cut",
    "estimate",
    "estimate_with",
    "find_omega_bar",
    "fit_quadratic",
    "from_unconstrained",
    "in_stationarity_set",
    "is_stationary",
    "localize",
    "nelder_mead",
    "numeric_hessian",
    "quasi_nll",
    "quasi_nll_gradient",
    "replication_seed",
    "rmse",
    "run_estimator",
    "run_rmse_study",
    "scan_omega",
    "simulate",
    "to_unconstrained",
    "unconditional_variance",
    "vertex",
    "write_reports_csv",
]
