"""Forecast error measures: MASE, RMSE, MAPE.

All three operate on a single series; dataset-level values are macro
averages (each series weighs equally), computed by the caller. Undefined
cases raise rather than returning NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class UndefinedMetricError(ValueError):
    """A metric's denominator is zero for the given inputs."""


@dataclass(frozen=True)
class ErrorReport:
    mase: float
    rmse: float
    mape: float


def _as_vectors(actual, forecast) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(actual, dtype=float)
    f = np.asarray(forecast, dtype=float)
    if a.shape != f.shape or a.ndim != 1 or len(a) < 1:
        raise ValueError(f"actual/forecast must be equal-length vectors, got {a.shape} vs {f.shape}")
    return a, f


def mase(actual, forecast, insample, season: int = 1) -> float:
    """Mean absolute scaled error for one series.

    Out-of-sample MAE divided by the in-sample MAE of the seasonal-naive
    forecast at lag `season`. A constant in-sample at that lag has no scale
    and raises UndefinedMetricError.
    """
    a, f = _as_vectors(actual, forecast)
    y = np.asarray(insample, dtype=float)
    if season < 1:
        raise ValueError("season must be >= 1")
    if len(y) <= season:
        raise ValueError(f"insample length {len(y)} must exceed season {season}")
    scale = np.mean(np.abs(y[season:] - y[:-season]))
    if scale == 0.0:
        raise UndefinedMetricError("undefined MASE: in-sample is constant at the seasonal lag")
    return float(np.mean(np.abs(a - f)) / scale)


def rmse(actual, forecast) -> float:
    """Root mean squared error for one series."""
    a, f = _as_vectors(actual, forecast)
    return float(np.sqrt(np.mean((a - f) ** 2)))


def mape(actual, forecast) -> float:
    """Mean absolute percentage error as a fraction (0.10 = 10%).

    Any zero actual value makes the measure undefined and raises.
    """
    a, f = _as_vectors(actual, forecast)
    if np.any(a == 0.0):
        raise UndefinedMetricError("undefined MAPE: actual contains zero values")
    return float(np.mean(np.abs(a - f) / np.abs(a)))
