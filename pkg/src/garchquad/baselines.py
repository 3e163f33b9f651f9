"""Reference optimizers minimizing the same objective: Nelder-Mead simplex
and BFGS quasi-Newton with backtracking line search.

Constraint handling mirrors common practice per method: the simplex gets a
+inf penalty outside {omega > 0, coefficients >= 0}; BFGS runs in an
unconstrained reparameterization omega = exp(u0), coefficient_i =
0.9999 * logistic(u_i), mapped back for the result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError, LineSearchError
from .likelihood import InitPolicy, quasi_nll, quasi_nll_gradient
from .model import GarchOrder, ParamVector, TimeSeries, coordinate_names
from .quadfit import EstimationResult

COEF_CEILING = 0.9999


@dataclass(frozen=True)
class OptimizerConfig:
    max_evals: int = 5000
    f_tol: float = 1e-8
    x_tol: float = 1e-8
    g_tol: float = 1e-6
    initial_point: ParamVector | None = None

    def __post_init__(self):
        if min(self.f_tol, self.x_tol, self.g_tol) <= 0.0:
            raise ValueError("tolerances must be positive")


def default_start(series: TimeSeries, order: GarchOrder) -> ParamVector:
    """Seed-independent heuristic: omega at half the sample variance (floored
    away from zero for degenerate series), each coefficient at 0.1/(p+q)."""
    coef = 0.1 / (order.p + order.q)
    return ParamVector(
        omega=max(0.5 * float(np.var(series.values)), 1e-4),
        alphas=(coef,) * order.p,
        betas=(coef,) * order.q,
    )


def nelder_mead(objective, start, config: OptimizerConfig = OptimizerConfig()) -> np.ndarray:
    """Simplex minimization with reflection/expansion/contraction/shrink
    coefficients 1, 2, 0.5, 0.5. Stops when the simplex diameter falls below
    x_tol, the value spread below f_tol, or max_evals is reached."""
    x0 = np.asarray(start, dtype=float)
    f0 = objective(x0)
    if not math.isfinite(f0):
        raise ValueError("objective is not finite at the start point")
    d = len(x0)

    simplex = [x0]
    for i in range(d):
        p = x0.copy()
        p[i] += 0.05 * abs(p[i]) if p[i] != 0.0 else 0.00025
        simplex.append(p)
    simplex = np.array(simplex)
    fvals = np.array([f0] + [objective(p) for p in simplex[1:]])
    evals = d + 1

    while evals < config.max_evals:
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        if (
            np.abs(simplex[1:] - simplex[0]).max() < config.x_tol
            or fvals[-1] - fvals[0] < config.f_tol
        ):
            break
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + (centroid - simplex[-1])
        fr = objective(xr)
        evals += 1
        if fvals[0] <= fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[0]:
            xe = centroid + 2.0 * (centroid - simplex[-1])
            fe = objective(xe)
            evals += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + 0.5 * (xr - centroid)
            else:
                xc = centroid + 0.5 * (simplex[-1] - centroid)
            fc = objective(xc)
            evals += 1
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                for i in range(1, d + 1):
                    simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0])
                    fvals[i] = objective(simplex[i])
                evals += d

    best = int(np.argmin(fvals))
    return simplex[best]


def _line_search(objective, x, direction, fx, slope, c1=1e-4, max_halvings=60):
    """Backtracking Armijo search, halving from step 1.

    An accepted step gets one quadratic-interpolation polish through
    (phi(0), phi'(0), phi(step)), kept only when it improves; on an exactly
    quadratic objective the polished step is the exact line minimizer.
    """
    step = 1.0
    for _ in range(max_halvings):
        f_new = objective(x + step * direction)
        if math.isfinite(f_new) and f_new <= fx + c1 * step * slope:
            denom = f_new - fx - slope * step
            if denom > 0.0:
                refined = -slope * step * step / (2.0 * denom)
                if refined > 0.0:
                    f_ref = objective(x + refined * direction)
                    if f_ref < f_new:
                        return refined, f_ref
            return step, f_new
        step *= 0.5
    raise LineSearchError(f"no Armijo decrease within {max_halvings} halvings")


def bfgs(objective, gradient, start, config: OptimizerConfig = OptimizerConfig()) -> np.ndarray:
    """Inverse-Hessian BFGS. Stops when the gradient sup-norm drops below
    g_tol or max_evals line searches have run. Updates with s'y <= 1e-10
    are skipped (curvature safeguard)."""
    x = np.asarray(start, dtype=float)
    d = len(x)
    fx = objective(x)
    if not math.isfinite(fx):
        raise ValueError("objective is not finite at the start point")
    g = np.asarray(gradient(x), dtype=float)
    H = np.eye(d)
    identity = np.eye(d)

    searches = 0
    while np.abs(g).max() > config.g_tol and searches < config.max_evals:
        direction = -H @ g
        slope = float(g @ direction)
        if slope >= 0.0:
            H = identity.copy()
            direction = -g
            slope = float(g @ direction)
        step, fx = _line_search(objective, x, direction, fx, slope)
        searches += 1
        s = step * direction
        x = x + s
        g_new = np.asarray(gradient(x), dtype=float)
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-10:
            rho = 1.0 / sy
            H = (identity - rho * np.outer(s, y)) @ H @ (
                identity - rho * np.outer(y, s)
            ) + rho * np.outer(s, s)
        g = g_new
    return x


def to_unconstrained(theta: ParamVector) -> np.ndarray:
    """Bijection onto R^d: u0 = log(omega), u_i = logit(coef_i / ceiling)."""
    arr = theta.to_array()
    out = np.empty_like(arr)
    out[0] = math.log(arr[0])
    for i, c in enumerate(arr[1:], start=1):
        if not 0.0 < c < COEF_CEILING:
            raise ValueError(f"coefficient {c} outside (0, {COEF_CEILING})")
        out[i] = math.log(c / (COEF_CEILING - c))
    return out


def from_unconstrained(u, order: GarchOrder) -> ParamVector:
    u = np.asarray(u, dtype=float)
    arr = np.empty_like(u)
    arr[0] = math.exp(u[0])
    arr[1:] = COEF_CEILING / (1.0 + np.exp(-u[1:]))
    return ParamVector.from_array(arr, order)


def _feasible(arr: np.ndarray) -> bool:
    return arr[0] > 0.0 and np.all(arr[1:] >= 0.0)


def _result_flags(theta: ParamVector) -> list[str]:
    flags = []
    if not (sum(theta.alphas) + sum(theta.betas) < 1.0):
        flags.append("nonstationary")
    if theta.omega <= 2e-4:
        flags.append("boundary:omega")
    names = coordinate_names(theta.order)
    for name, c in zip(names[1:], theta.alphas + theta.betas):
        if c <= 1e-8 or c >= COEF_CEILING - 1e-6:
            flags.append(f"boundary:{name}")
    return flags


def estimate_with(
    method: str,
    series: TimeSeries,
    order: GarchOrder,
    config: OptimizerConfig = OptimizerConfig(),
    policy: InitPolicy = InitPolicy(),
) -> EstimationResult:
    """Minimize the objective with a baseline optimizer.

    method is "nelder-mead" (penalty for infeasible points) or "bfgs"
    (unconstrained reparameterization). Optimizer failures propagate as
    EstimationError for the caller to record.
    """
    start = config.initial_point or default_start(series, order)

    if method == "nelder-mead":
        def penalized(arr):
            if not _feasible(arr):
                return math.inf
            return quasi_nll(series, ParamVector.from_array(arr, order), policy).value

        best = nelder_mead(penalized, start.to_array(), config)
        theta_hat = ParamVector.from_array(best, order)
    elif method == "bfgs":
        def obj_u(u):
            # exp underflow/overflow maps to an unusable parameter point
            try:
                return quasi_nll(series, from_unconstrained(u, order), policy).value
            except (ValueError, OverflowError):
                return math.inf

        def grad_u(u):
            theta = from_unconstrained(u, order)
            g = quasi_nll_gradient(series, theta, policy)
            arr = theta.to_array()
            jac = np.empty_like(arr)
            jac[0] = arr[0]                                   # d omega / d u0
            jac[1:] = arr[1:] * (1.0 - arr[1:] / COEF_CEILING)  # logistic chain rule
            return g * jac

        u_hat = bfgs(obj_u, grad_u, to_unconstrained(start), config)
        theta_hat = from_unconstrained(u_hat, order)
        if theta_hat.omega <= 0.0:  # exp underflow on a boundary-seeking run
            theta_hat = ParamVector(
                float(np.finfo(float).tiny), theta_hat.alphas, theta_hat.betas
            )
    else:
        raise ValueError(f"unknown method {method!r}; use 'nelder-mead' or 'bfgs'")

    objective = quasi_nll(series, theta_hat, policy).value
    if not math.isfinite(objective):
        raise EstimationError(f"{method} returned a non-finite objective")
    return EstimationResult(
        theta_hat=theta_hat,
        box=None,
        fits=[],
        objective_at_estimate=objective,
        flags=_result_flags(theta_hat),
    )
