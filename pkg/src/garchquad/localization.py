"""Derivative-sign localization of the objective minimum.

Two stages: scan omega along the line (omega, 0.5, ..., 0.5) until the
omega-derivative of the objective turns positive, then shrink a box around
the optimum by per-coordinate bisection on gradient signs. Probes for
coordinate i keep every other coordinate at its current lower bound; each
sweep bisects every coordinate once and sweeping repeats until all interval
widths pass the tolerance.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .likelihood import InitPolicy, quasi_nll_gradient
from .model import GarchOrder, ParamVector, TimeSeries


class LocalizationWarning(UserWarning):
    pass


@dataclass(frozen=True)
class LocalizationConfig:
    omega_scan_step: float = 0.2
    width_tol: float = 0.05
    lower_floor: float = 0.0001
    alpha_beta_ceiling: float = 0.9999
    probe_value: float = 0.5
    max_iterations: int = 200

    def __post_init__(self):
        if self.width_tol <= 0.0 or self.omega_scan_step <= 0.0:
            raise ValueError("width_tol and omega_scan_step must be positive")


@dataclass
class SearchBox:
    """Per-coordinate interval product [lower_i, upper_i]."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        self.lower = np.asarray(self.lower, dtype=float)
        self.upper = np.asarray(self.upper, dtype=float)
        if self.lower.shape != self.upper.shape or self.lower.ndim != 1:
            raise ValueError("lower and upper must be 1-d arrays of equal length")
        if not np.all(self.lower < self.upper):
            raise ValueError("need lower_i < upper_i in every coordinate")

    @property
    def widths(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def dim(self) -> int:
        return len(self.lower)

    def contains(self, point) -> bool:
        point = np.asarray(point, dtype=float)
        return bool(np.all(self.lower <= point) and np.all(point <= self.upper))


def _gradient_at(series, order, coords, policy) -> np.ndarray:
    theta = ParamVector.from_array(coords, order)
    return quasi_nll_gradient(series, theta, policy)


def scan_omega(
    series: TimeSeries,
    order: GarchOrder,
    config: LocalizationConfig = LocalizationConfig(),
    policy: InitPolicy = InitPolicy(),
) -> list[tuple[float, float]]:
    """(omega, omega-derivative) pairs along the scan line, stopping at the
    first positive derivative."""
    rows: list[tuple[float, float]] = []
    coords = np.full(order.dim, config.probe_value)
    for k in range(config.max_iterations):
        omega = config.lower_floor + k * config.omega_scan_step
        coords[0] = omega
        g = _gradient_at(series, order, coords, policy)[0]
        rows.append((omega, float(g)))
        if g > 0.0:
            return rows
    raise EstimationError(
        f"omega scan found no positive derivative within {config.max_iterations} steps"
    )


def find_omega_bar(
    series: TimeSeries,
    order: GarchOrder,
    config: LocalizationConfig = LocalizationConfig(),
    policy: InitPolicy = InitPolicy(),
) -> float:
    """First scanned omega with positive objective derivative.

    If the derivative is already positive at the floor (degenerate input,
    e.g. an all-zero series whose objective is minimized as omega -> 0) the
    floor itself is returned with a warning.
    """
    rows = scan_omega(series, order, config, policy)
    omega_bar = rows[-1][0]
    if len(rows) == 1:
        warnings.warn(
            "omega-derivative already positive at the scan floor; "
            "the objective has no interior bracket in omega",
            LocalizationWarning,
        )
    return omega_bar


def localize(
    series: TimeSeries,
    order: GarchOrder,
    omega_bar: float,
    config: LocalizationConfig = LocalizationConfig(),
    policy: InitPolicy = InitPolicy(),
) -> SearchBox:
    """Shrink [floor, omega_bar] x [floor, ceiling]^(d-1) by sign bisection.

    For each coordinate the gradient sign at the all-lower-bounds point is
    compared with the sign at the same point with that coordinate moved to
    the interval midpoint: differing signs move the upper bound to the
    midpoint, agreeing signs move the lower bound. A zero product counts as
    a sign change (the bracket shrinks from above).
    """
    if omega_bar <= config.lower_floor:
        raise ValueError("omega_bar must exceed the lower floor")
    d = order.dim
    lower = np.full(d, config.lower_floor)
    upper = np.concatenate([[omega_bar], np.full(d - 1, config.alpha_beta_ceiling)])

    sweeps = 0
    while np.max(upper - lower) > config.width_tol:
        if sweeps >= config.max_iterations:
            warnings.warn(
                f"bisection stopped after {sweeps} sweeps with widths "
                f"{(upper - lower).tolist()} above tolerance {config.width_tol}",
                LocalizationWarning,
            )
            break
        for i in range(d):
            g_lower = _gradient_at(series, order, lower, policy)[i]
            mid = 0.5 * (lower[i] + upper[i])
            probe = lower.copy()
            probe[i] = mid
            g_mid = _gradient_at(series, order, probe, policy)[i]
            if g_lower * g_mid <= 0.0:
                upper[i] = mid
            else:
                lower[i] = mid
        sweeps += 1
    return SearchBox(lower=lower, upper=upper)
