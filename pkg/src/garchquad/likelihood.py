"""Quasi-negative-log-likelihood objective, analytic gradient and numeric Hessian.

The objective is

    NLL(theta) = sum_{t=skip+1..n} [ log sigma2_t + x_t^2 / sigma2_t ]

with the conditional variances sigma2_t run forward from fixed pre-sample
values, so the criterion is computable from the data alone. Smaller is
better. Sums use math.fsum, making the value independent of evaluation
order at full double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import GarchOrder, ParamVector, TimeSeries


@dataclass(frozen=True)
class InitPolicy:
    """Pre-sample conventions for the variance recursion.

    presample_x: value standing in for unobserved x_t, t <= 0.
    presample_sigma2: value for unobserved sigma2_t, t <= 0; None means the
        sample variance of the series.
    skip_count: number of leading terms dropped from the objective sum;
        None means max(p, q).
    """

    presample_x: float = 0.0
    presample_sigma2: float | None = None
    skip_count: int | None = None

    def resolve(
        self, series: TimeSeries, order: GarchOrder, check_skip: bool = False
    ) -> tuple[float, float, int]:
        x0sq = float(self.presample_x) ** 2
        s0 = (
            float(np.var(series.values))
            if self.presample_sigma2 is None
            else float(self.presample_sigma2)
        )
        skip = max(order.p, order.q) if self.skip_count is None else int(self.skip_count)
        if check_skip and not 0 <= skip < len(series):
            raise ValueError(f"skip_count {skip} must lie in [0, n)")
        return x0sq, s0, skip


@dataclass(frozen=True)
class Objective:
    """Objective value plus the optional per-t breakdown (terms for t=1..n;
    the value sums terms[skip:])."""

    value: float
    terms: np.ndarray | None = None


def _check_params(theta: ParamVector) -> None:
    if theta.omega <= 0.0:
        raise ValueError("omega must be positive")
    if any(a < 0.0 for a in theta.alphas) or any(b < 0.0 for b in theta.betas):
        raise ValueError("alpha and beta coefficients must be non-negative")


def _lagged_squares(x2: np.ndarray, lag: int, x0sq: float) -> np.ndarray:
    """x_{t-lag}^2 for t=1..n (0-based), pre-sample slots filled with x0sq."""
    n = len(x2)
    if lag >= n:
        return np.full(n, x0sq)
    out = np.empty(n)
    out[:lag] = x0sq
    out[lag:] = x2[: n - lag]
    return out


def conditional_variances(
    series: TimeSeries, theta: ParamVector, policy: InitPolicy = InitPolicy()
) -> np.ndarray:
    """sigma2_t for t=1..n under the recursion with pre-sample substitution."""
    _check_params(theta)
    order = theta.order
    x0sq, s0, _ = policy.resolve(series, order)
    x = series.values
    n = len(x)
    p, q = order.p, order.q
    x2 = x * x

    if q == 0:
        sigma2 = np.full(n, theta.omega)
        for i, a in enumerate(theta.alphas, start=1):
            if a != 0.0:
                sigma2 += a * _lagged_squares(x2, i, x0sq)
        return sigma2

    alphas = np.asarray(theta.alphas)
    betas = np.asarray(theta.betas)
    sigma2 = np.empty(n)
    for t in range(n):
        acc = theta.omega
        for i in range(1, p + 1):
            acc += alphas[i - 1] * (x2[t - i] if t - i >= 0 else x0sq)
        for j in range(1, q + 1):
            acc += betas[j - 1] * (sigma2[t - j] if t - j >= 0 else s0)
        sigma2[t] = acc
    return sigma2


def quasi_nll(
    series: TimeSeries,
    theta: ParamVector,
    policy: InitPolicy = InitPolicy(),
    return_terms: bool = False,
) -> Objective:
    """Minimization objective: sum over t=skip+1..n of log sigma2_t + x_t^2/sigma2_t."""
    order = theta.order
    _, _, skip = policy.resolve(series, order, check_skip=True)
    sigma2 = conditional_variances(series, theta, policy)
    x2 = series.values**2
    terms = np.log(sigma2) + x2 / sigma2
    value = math.fsum(terms[skip:])
    return Objective(value=value, terms=terms if return_terms else None)


def _sensitivities(
    x2: np.ndarray, sigma2: np.ndarray, theta: ParamVector, x0sq: float, s0: float
) -> np.ndarray:
    """d sigma2_t / d theta_i as an (n, d) array.

    Seed row s_{t,i} is 1 for omega, x_{t-i}^2 for alpha_i, sigma2_{t-j} for
    beta_j (pre-sample values per policy); the beta part of the recursion
    propagates, with pre-sample derivative terms equal to zero.
    """
    n = len(x2)
    p, q = theta.order.p, theta.order.q
    d = theta.dim

    if q == 0:
        sens = np.empty((n, d))
        sens[:, 0] = 1.0
        for i in range(1, p + 1):
            sens[:, i] = _lagged_squares(x2, i, x0sq)
        return sens

    betas = np.asarray(theta.betas)
    sens = np.zeros((n, d))
    for t in range(n):
        row = sens[t]
        row[0] = 1.0
        for i in range(1, p + 1):
            row[i] = x2[t - i] if t - i >= 0 else x0sq
        for j in range(1, q + 1):
            row[p + j] = sigma2[t - j] if t - j >= 0 else s0
        for j in range(1, q + 1):
            if t - j >= 0:
                row += betas[j - 1] * sens[t - j]
    return sens


def quasi_nll_gradient(
    series: TimeSeries, theta: ParamVector, policy: InitPolicy = InitPolicy()
) -> np.ndarray:
    """Analytic gradient of quasi_nll, coordinate order (omega, alphas, betas)."""
    order = theta.order
    x0sq, s0, skip = policy.resolve(series, order, check_skip=True)
    sigma2 = conditional_variances(series, theta, policy)
    x2 = series.values**2
    weight = (1.0 / sigma2) * (1.0 - x2 / sigma2)
    sens = _sensitivities(x2, sigma2, theta, x0sq, s0)
    with np.errstate(over="ignore", invalid="ignore"):  # boundary-seeking probes
        contrib = weight[:, None] * sens
    return np.array([math.fsum(contrib[skip:, i]) for i in range(theta.dim)])


def numeric_hessian(
    series: TimeSeries,
    theta: ParamVector,
    policy: InitPolicy = InitPolicy(),
    h: float = 1e-4,
) -> np.ndarray:
    """Symmetrized central finite differences of the analytic gradient.

    Per-coordinate step h * max(1, |theta_i|), clamped to keep theta +- step
    inside the positive orthant.
    """
    arr = theta.to_array()
    order = theta.order
    d = theta.dim
    if np.any(arr <= 0.0):
        raise ValueError("finite-difference step exits the positive orthant")
    H = np.empty((d, d))
    for i in range(d):
        hi = min(h * max(1.0, abs(arr[i])), 0.5 * arr[i])
        plus, minus = arr.copy(), arr.copy()
        plus[i] += hi
        minus[i] -= hi
        g_plus = quasi_nll_gradient(series, ParamVector.from_array(plus, order), policy)
        g_minus = quasi_nll_gradient(series, ParamVector.from_array(minus, order), policy)
        H[:, i] = (g_plus - g_minus) / (2.0 * hi)
    return 0.5 * (H + H.T)
