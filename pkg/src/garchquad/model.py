"""GARCH(p,q) model orders, parameter vectors, stationarity checks and simulation.

The conditional-variance recursion is

    sigma2_t = omega + sum_i alpha_i * x_{t-i}^2 + sum_j beta_j * sigma2_{t-j}
    x_t      = sqrt(sigma2_t) * eps_t,   eps_t iid N(0, 1)

Parameter vectors flatten in the fixed order (omega, alpha_1..alpha_p,
beta_1..beta_q); every module indexes coordinates this way.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class GarchOrder:
    """Lag counts: p squared-observation lags, q conditional-variance lags."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("lag counts must be non-negative")
        if self.p + self.q < 1:
            raise ValueError("need p + q >= 1")

    @property
    def dim(self) -> int:
        return self.p + self.q + 1


@dataclass(frozen=True)
class ParamVector:
    """Parameter vector (omega, alphas, betas).

    Construction only requires finite values and p + q >= 1; sign and
    stationarity conditions are checked by the membership predicates so
    that out-of-domain vectors can still be tested for membership.
    """

    omega: float
    alphas: tuple[float, ...] = ()
    betas: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "betas", tuple(float(b) for b in self.betas))
        object.__setattr__(self, "omega", float(self.omega))
        vals = (self.omega,) + self.alphas + self.betas
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("parameters must be finite")
        if len(self.alphas) + len(self.betas) < 1:
            raise ValueError("need at least one alpha or beta coefficient")

    @property
    def order(self) -> GarchOrder:
        return GarchOrder(p=len(self.alphas), q=len(self.betas))

    @property
    def dim(self) -> int:
        return 1 + len(self.alphas) + len(self.betas)

    def to_array(self) -> np.ndarray:
        return np.array((self.omega,) + self.alphas + self.betas, dtype=float)

    @classmethod
    def from_array(cls, values, order: GarchOrder) -> "ParamVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (order.dim,):
            raise ValueError(f"expected {order.dim} coordinates, got {values.shape}")
        return cls(
            omega=float(values[0]),
            alphas=tuple(values[1 : 1 + order.p]),
            betas=tuple(values[1 + order.p :]),
        )


def coordinate_names(order: GarchOrder) -> list[str]:
    """Names in flattening order: omega, alpha1..alphap, beta1..betaq."""
    return (
        ["omega"]
        + [f"alpha{i}" for i in range(1, order.p + 1)]
        + [f"beta{j}" for j in range(1, order.q + 1)]
    )


@dataclass
class TimeSeries:
    """An observed or simulated realization x_1..x_n."""

    values: np.ndarray
    meta: dict | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 1 or len(self.values) < 1:
            raise ValueError("series must be a non-empty 1-d array")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("series values must be finite")

    def __len__(self) -> int:
        return len(self.values)

    def to_csv(self, path) -> None:
        """Write `t,x` rows, 1-based t, full-precision (round-trip) decimals."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "x"])
            for t, x in enumerate(self.values, start=1):
                writer.writerow([t, repr(float(x))])

    @classmethod
    def from_csv(cls, path) -> "TimeSeries":
        path = Path(path)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [c.strip() for c in header[:2]] != ["t", "x"]:
                raise ValueError(f"{path}: expected header 't,x'")
            values = [float(row[1]) for row in reader if row]
        return cls(values=np.asarray(values), meta={"source": str(path)})


def is_stationary(theta: ParamVector) -> bool:
    """Wide-sense stationarity: sum(alphas) + sum(betas) < 1, strictly."""
    return sum(theta.alphas) + sum(theta.betas) < 1.0


def in_stationarity_set(theta: ParamVector) -> bool:
    """Membership in {omega > 0, coefficients >= 0, sum < 1}."""
    if theta.omega <= 0.0:
        return False
    if any(a < 0.0 for a in theta.alphas) or any(b < 0.0 for b in theta.betas):
        return False
    return is_stationary(theta)


def unconditional_variance(theta: ParamVector) -> float:
    """Stationary variance of x_t: omega / (1 - sum(alphas) - sum(betas))."""
    if not in_stationarity_set(theta):
        raise ValueError("parameters outside the stationarity set")
    return theta.omega / (1.0 - sum(theta.alphas) - sum(theta.betas))


def simulate(theta: ParamVector, n: int, seed: int, burn_in: int = 500) -> TimeSeries:
    """Simulate n observations after discarding burn_in draws.

    Innovations are standard normal from numpy's PCG64 generator seeded with
    `seed`, so output is a deterministic function of (theta, n, seed,
    burn_in). Pre-sample squared observations and variances start at the
    unconditional variance.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not in_stationarity_set(theta):
        raise ValueError("cannot simulate outside the stationarity set")
    p, q = theta.order.p, theta.order.q
    v0 = unconditional_variance(theta)
    alphas = np.asarray(theta.alphas)
    betas = np.asarray(theta.betas)

    rng = np.random.default_rng(seed)
    eps = rng.standard_normal(n + burn_in)

    total = n + burn_in
    x2 = np.full(max(p, 1), v0)      # most recent first
    s2 = np.full(max(q, 1), v0)
    out = np.empty(total)
    for t in range(total):
        sigma2 = theta.omega
        if p:
            sigma2 += float(alphas @ x2[:p])
        if q:
            sigma2 += float(betas @ s2[:q])
        assert sigma2 >= theta.omega > 0.0
        xt = math.sqrt(sigma2) * eps[t]
        out[t] = xt
        if p:
            x2 = np.roll(x2, 1)
            x2[0] = xt * xt
        if q:
            s2 = np.roll(s2, 1)
            s2[0] = sigma2
    meta = {"seed": seed, "burn_in": burn_in, "theta": theta.to_array().tolist()}
    return TimeSeries(values=out[burn_in:], meta=meta)
