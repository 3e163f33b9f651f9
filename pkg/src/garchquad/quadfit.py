"""Diagonal-cut sampling and per-coordinate quadratic fits.

The objective is sampled at m points along the main diagonal of the
localization box; for each coordinate the (coordinate, objective) pairs are
fitted with a least-squares parabola whose vertex -a1/(2*a2) is the
coordinate's estimate.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EstimationError
from .likelihood import InitPolicy, quasi_nll
from .localization import (
    LocalizationConfig,
    LocalizationWarning,
    SearchBox,
    find_omega_bar,
    localize,
)
from .model import GarchOrder, ParamVector, TimeSeries, coordinate_names


@dataclass(frozen=True)
class QuadraticFit:
    """Least-squares coefficients of f(x) = a0 + a1*x + a2*x^2."""

    a0: float
    a1: float
    a2: float
    rss: float
    coordinate_index: int | None = None

    @property
    def is_convex(self) -> bool:
        return self.a2 > 0.0

    def predict(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.a0 + self.a1 * x + self.a2 * x * x


@dataclass
class EstimationResult:
    theta_hat: ParamVector
    box: SearchBox | None
    fits: list[QuadraticFit]
    objective_at_estimate: float
    flags: list[str] = field(default_factory=list)


def diagonal_cut(box: SearchBox, m: int) -> np.ndarray:
    """m points (rows) on the box's main diagonal, both corners included,
    each coordinate linearly spaced."""
    if m < 3:
        raise ValueError("need m >= 3 subdivision points")
    if np.any(box.widths <= 0.0):
        raise ValueError("degenerate box: zero width")
    return np.linspace(box.lower, box.upper, m)


def fit_quadratic(xs, ys) -> QuadraticFit:
    """Least-squares parabola through (xs, ys).

    The abscissae are centered and scaled internally for conditioning; the
    coefficients are reported in the original coordinates.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.shape != ys.shape or xs.ndim != 1:
        raise ValueError("xs and ys must be 1-d arrays of equal length")
    if len(xs) < 3:
        raise ValueError("need at least 3 points")
    if np.unique(xs).size < 3:
        raise ValueError("rank-deficient design: need 3 distinct abscissae")

    center = float(xs.mean())
    scale = float(np.abs(xs - center).max())
    u = (xs - center) / scale
    design = np.column_stack([np.ones_like(u), u, u * u])
    coef, *_ = np.linalg.lstsq(design, ys, rcond=None)
    b0, b1, b2 = (float(c) for c in coef)

    a2 = b2 / scale**2
    a1 = b1 / scale - 2.0 * b2 * center / scale**2
    a0 = b0 - b1 * center / scale + b2 * center**2 / scale**2
    residuals = ys - design @ coef
    rss = math.fsum(float(r) * float(r) for r in residuals)
    return QuadraticFit(a0=a0, a1=a1, a2=a2, rss=rss)


def vertex(fit: QuadraticFit) -> float:
    """Stationary point -a1/(2*a2) of a convex fit."""
    if fit.a2 <= 0.0:
        raise ValueError(f"non-convex fit (a2={fit.a2}): no interior minimum")
    return -fit.a1 / (2.0 * fit.a2)


def estimate(
    series: TimeSeries,
    order: GarchOrder,
    config: LocalizationConfig = LocalizationConfig(),
    m: int = 100,
    policy: InitPolicy = InitPolicy(),
) -> EstimationResult:
    """Full pipeline: omega scan, bisection box, diagonal cut, quadratic fits.

    Vertices falling outside the box are clamped to it and flagged; a
    non-convex per-coordinate fit raises EstimationError naming the
    coordinate.
    """
    flags: list[str] = []
    if len(series) <= 10 * order.dim:
        flags.append(f"short-series:n={len(series)}<=10*{order.dim}")

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", LocalizationWarning)
        omega_bar = find_omega_bar(series, order, config, policy)
        if omega_bar <= config.lower_floor:
            raise EstimationError(
                "degenerate omega scan: derivative positive at the floor, "
                "no interior bracket to localize"
            )
        box = localize(series, order, omega_bar, config, policy)
    flags.extend(f"localization:{w.message}" for w in caught)

    cut = diagonal_cut(box, m)
    values = np.array(
        [quasi_nll(series, ParamVector.from_array(row, order), policy).value for row in cut]
    )

    names = coordinate_names(order)
    fits: list[QuadraticFit] = []
    coords = np.empty(order.dim)
    for i in range(order.dim):
        fit = fit_quadratic(cut[:, i], values)
        fit = QuadraticFit(fit.a0, fit.a1, fit.a2, fit.rss, coordinate_index=i)
        fits.append(fit)
        if fit.a2 <= 0.0:
            raise EstimationError(
                f"non-convex projection fit for coordinate {names[i]} (a2={fit.a2})"
            )
        v = vertex(fit)
        clamped = min(max(v, box.lower[i]), box.upper[i])
        if clamped != v:
            flags.append(f"clamped:{names[i]}:vertex={v:.6g}")
        coords[i] = clamped

    theta_hat = ParamVector.from_array(coords, order)
    objective = quasi_nll(series, theta_hat, policy).value
    return EstimationResult(
        theta_hat=theta_hat,
        box=box,
        fits=fits,
        objective_at_estimate=objective,
        flags=flags,
    )
