"""Meta-feature extraction: dataset descriptors plus model descriptors.

Rows for the meta-learners concatenate ten dataset statistics with the
model one-hot and structural features. Positions align 1:1 with names so
explanations can refer back to features.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from . import forecasters
from .data import Dataset

DATASET_FEATURE_NAMES: tuple[str, ...] = (
    "num_series",
    "avg_length",
    "horizon",
    "season_length",
    "avg_mean",
    "avg_std",
    "avg_min",
    "avg_max",
    "avg_lag1_autocorr",
    "avg_trend_slope",
)


def _lag1_autocorr(y: np.ndarray) -> float:
    # Constant (or length-1) series has no defined autocorrelation: 0 by convention.
    if len(y) < 2:
        return 0.0
    centered = y - y.mean()
    denom = float(np.dot(centered, centered))
    if denom == 0.0:
        return 0.0
    return float(np.dot(centered[:-1], centered[1:]) / denom)


def _trend_slope(y: np.ndarray) -> float:
    """Least-squares slope of value against 0-based position."""
    n = len(y)
    if n < 2:
        return 0.0
    x = np.arange(n, dtype=float)
    x_centered = x - x.mean()
    return float(np.dot(x_centered, y - y.mean()) / np.dot(x_centered, x_centered))


def dataset_features(d: Dataset) -> np.ndarray:
    """Ten dataset features; per-series statistics are macro-averaged."""
    lengths = [s.length for s in d.series]
    means = [float(s.values.mean()) for s in d.series]
    stds = [float(s.values.std()) for s in d.series]
    mins = [float(s.values.min()) for s in d.series]
    maxs = [float(s.values.max()) for s in d.series]
    autocorrs = [_lag1_autocorr(s.values) for s in d.series]
    slopes = [_trend_slope(s.values) for s in d.series]
    return np.array(
        [
            float(d.num_series),
            float(np.mean(lengths)),
            float(d.horizon),
            float(d.season_length),
            float(np.mean(means)),
            float(np.mean(stds)),
            float(np.mean(mins)),
            float(np.mean(maxs)),
            float(np.mean(autocorrs)),
            float(np.mean(slopes)),
        ]
    )


def feature_names() -> list[str]:
    """Ordered schema for a full meta-feature row under the fixed model pool."""
    model_names, _ = forecasters.model_meta_features(forecasters.MODEL_KEYS[0])
    return list(DATASET_FEATURE_NAMES) + model_names


def build_row(d: Dataset, model_key: str) -> np.ndarray:
    """Dataset features ++ model features; width is constant across rows."""
    _, model_vec = forecasters.model_meta_features(model_key)
    return np.concatenate([dataset_features(d), model_vec])


def schema_hash(names: list[str] | None = None) -> str:
    """Stable digest of the feature schema, for bundle compatibility checks."""
    payload = json.dumps(names if names is not None else feature_names())
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()[:16]


def save_schema(path) -> None:
    """Write the ordered feature-name list as features.json."""
    with open(path, "w", encoding="utf-8") as f:
        json.dump(feature_names(), f, indent=2)
        f.write("\n")
