"""Reference values and bundled data from the published ARCH(1) example study.

The package ships the study's 100-point series (data/arch1_paper.csv, also
copied at the repository root) and its reported reference numbers: the
omega-derivative scan, the 100-row diagonal-cut table, the per-coordinate
quadratic-fit coefficients and the resulting vertex estimates.

Reproduction caveat: the published series table duplicates observations
21-30 as observations 91-100, and no series with that property reproduces
the published likelihood and derivative tables simultaneously (see the
repository README). The reproduction checklist in the CLI reports each
comparison honestly against the values as published.
"""
from __future__ import annotations

import csv
from importlib import resources

import numpy as np

from .model import TimeSeries

# Scan of the objective's omega-derivative along (omega, 0.5): published pairs.
SCAN_OMEGAS = (0.0001, 0.2001, 0.4001, 0.6001, 0.8001)
SCAN_DERIVATIVES = (-7613853.0, -455.4789, -93.72643, -19.2947, 5.967303)

# Localization box reported for the example run.
REPORTED_BOX_LOWER = (0.7751000, 0.2813219)
REPORTED_BOX_UPPER = (0.8501000, 0.3625687)

# Published least-squares coefficients of the two projected-cut parabolas.
OMEGA_FIT_A1 = -230.1460
OMEGA_FIT_A2 = 143.7092
ALPHA_FIT_A1 = -75.7028
ALPHA_FIT_A2 = 120.8546

# Vertex targets: omega as published; alpha recomputed as -a1/(2*a2) from the
# published coefficients (the published 0.3090923 is inconsistent with them).
OMEGA_VERTEX = 0.8007353
ALPHA_VERTEX = -ALPHA_FIT_A1 / (2.0 * ALPHA_FIT_A2)

# Named likelihood spot rows (omega, alpha1) -> published objective value.
NLL_SPOT_ROWS = (
    ((0.7751, 0.2813), 109.257),
    ((0.8001, 0.3084), 109.152),
)


def _data_path(name: str):
    return resources.files("garchquad").joinpath("data", name)


def load_example_series() -> TimeSeries:
    """The bundled 100-point ARCH(1) example series."""
    ref = _data_path("arch1_paper.csv")
    with resources.as_file(ref) as path:
        series = TimeSeries.from_csv(path)
    series.meta = {"source": "arch1_paper.csv (bundled)"}
    return series


def load_reference_cut() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The published 100-row cut table as (omegas, alpha1s, objective values)."""
    ref = _data_path("arch1_reference_cut.csv")
    rows = []
    with ref.open() as fh:
        reader = csv.reader(fh)
        header = next(reader)
        assert header == ["omega", "alpha1", "nll"]
        for row in reader:
            rows.append([float(v) for v in row])
    arr = np.asarray(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2]
