"""Candidate forecaster zoo: fit/predict plus structural descriptors.

Six classical forecasters spanning distinct cost/accuracy profiles, from
zero-parameter heuristics to shared autoregressions at two lag orders.
Fitted state is a plain JSON-serializable dict split into ``params``
(learned scalars, counted for the complexity property) and ``context``
(data slices needed at prediction time, not counted).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset

RIDGE_FALLBACK_LAMBDA = 1e-10  # applied when AR normal equations are singular
RIDGE_LARGE_LAMBDA = 1e-2

# Registration order is the canonical one-hot order for meta-features.
MODEL_KEYS: tuple[str, ...] = ("naive", "snaive", "drift", "ses", "linear_ar", "ridge_ar_large")

_STRUCTURAL = {
    # key: (lag_order, has_seasonality)
    "naive": (0, 0),
    "snaive": (0, 1),
    "drift": (0, 0),
    "ses": (0, 0),
    "linear_ar": (4, 0),
    "ridge_ar_large": (12, 0),
}


class UnknownModelError(KeyError):
    pass


@dataclass(frozen=True)
class ModelDescriptor:
    """Structural facts about a fitted model."""

    param_count: int
    lag_order: int
    has_seasonality: int


@dataclass
class CandidateModel:
    key: str
    hyperparams: dict
    fitted_state: dict | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def is_fitted(self) -> bool:
        return self.fitted_state is not None

    @property
    def param_count(self) -> int:
        if not self.is_fitted:
            raise ValueError(f"model {self.key!r} is not fitted")
        return _count_scalars(self.fitted_state["params"])

    def serialize_state(self) -> bytes:
        """Portable JSON blob; its byte length is the on-disk size property."""
        if not self.is_fitted:
            raise ValueError(f"model {self.key!r} is not fitted")
        return json.dumps(self.fitted_state, sort_keys=True).encode("utf-8")

    def descriptor(self) -> ModelDescriptor:
        lag, seasonal = _STRUCTURAL[self.key]
        return ModelDescriptor(param_count=self.param_count, lag_order=lag, has_seasonality=seasonal)


def _count_scalars(obj) -> int:
    if isinstance(obj, (int, float)):
        return 1
    if isinstance(obj, dict):
        return sum(_count_scalars(v) for v in obj.values())
    if isinstance(obj, (list, tuple)):
        return sum(_count_scalars(v) for v in obj)
    return 0


def fit(model_key: str, train: Dataset) -> CandidateModel:
    """Fit a registered forecaster on a training dataset. Deterministic."""
    if model_key not in MODEL_KEYS:
        raise UnknownModelError(f"unknown model key: {model_key!r}")
    return _FITTERS[model_key](train)


def predict(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    """One length-`horizon` forecast vector per series id."""
    if not model.is_fitted:
        raise ValueError(f"model {model.key!r} is not fitted")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    return _PREDICTORS[model.key](model, horizon)


def model_meta_features(model_key: str) -> tuple[list[str], np.ndarray]:
    """Fixed-length model feature vector: one-hot identity plus structure.

    Identical for a key regardless of dataset; names align with positions.
    """
    if model_key not in MODEL_KEYS:
        raise UnknownModelError(f"unknown model key: {model_key!r}")
    names = [f"model_is_{k}" for k in MODEL_KEYS] + ["model_lag_order", "model_has_seasonality"]
    onehot = [1.0 if k == model_key else 0.0 for k in MODEL_KEYS]
    lag, seasonal = _STRUCTURAL[model_key]
    return names, np.array(onehot + [float(lag), float(seasonal)])


# --- individual models -------------------------------------------------


def _fit_naive(train: Dataset) -> CandidateModel:
    context = {"last": {s.id: float(s.values[-1]) for s in train.series}}
    return CandidateModel("naive", {}, {"params": {}, "context": context})


def _predict_naive(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    last = model.fitted_state["context"]["last"]
    return {sid: np.full(horizon, v) for sid, v in last.items()}


def _fit_snaive(train: Dataset) -> CandidateModel:
    season = train.season_length
    context = {
        "season": season,
        "tail": {s.id: [float(v) for v in s.values[-season:]] for s in train.series},
    }
    return CandidateModel("snaive", {"season": season}, {"params": {}, "context": context})


def _predict_snaive(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    ctx = model.fitted_state["context"]
    season = ctx["season"]
    out = {}
    for sid, tail in ctx["tail"].items():
        out[sid] = np.array([tail[j % season] for j in range(horizon)])
    return out


def _fit_drift(train: Dataset) -> CandidateModel:
    slopes = {}
    last = {}
    for s in train.series:
        y = s.values
        slopes[s.id] = float((y[-1] - y[0]) / (len(y) - 1)) if len(y) > 1 else 0.0
        last[s.id] = float(y[-1])
    return CandidateModel("drift", {}, {"params": {"slope": slopes}, "context": {"last": last}})


def _predict_drift(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    state = model.fitted_state
    out = {}
    for sid, last in state["context"]["last"].items():
        slope = state["params"]["slope"][sid]
        out[sid] = last + slope * np.arange(1, horizon + 1)
    return out


SES_ALPHA_GRID = tuple(np.linspace(0.1, 0.9, 9).round(10))


def _ses_sse(values: np.ndarray, alpha: float) -> tuple[float, float]:
    """One-step in-sample SSE and final level for one series."""
    level = values[0]
    sse = 0.0
    for y in values[1:]:
        sse += (y - level) ** 2
        level = alpha * y + (1 - alpha) * level
    return sse, float(level)


def _fit_ses(train: Dataset, alpha: float | None = None) -> CandidateModel:
    if alpha is None:
        # Fixed grid, in-sample SSE summed over all series; ties -> lowest alpha.
        totals = []
        for a in SES_ALPHA_GRID:
            totals.append(sum(_ses_sse(s.values, a)[0] for s in train.series))
        alpha = float(SES_ALPHA_GRID[int(np.argmin(totals))])
    levels = {s.id: _ses_sse(s.values, alpha)[1] for s in train.series}
    state = {"params": {"alpha": float(alpha), "level": levels}, "context": {}}
    return CandidateModel("ses", {"alpha": alpha}, state)


def _predict_ses(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    levels = model.fitted_state["params"]["level"]
    return {sid: np.full(horizon, level) for sid, level in levels.items()}


def _ar_training_rows(train: Dataset, lag: int) -> tuple[np.ndarray, np.ndarray]:
    rows, targets = [], []
    for s in train.series:
        y = s.values
        for i in range(lag, len(y)):
            rows.append(y[i - lag : i])
            targets.append(y[i])
    if not rows:
        return np.empty((0, lag)), np.empty(0)
    return np.array(rows), np.array(targets)


def _fit_ar(train: Dataset, key: str, lag: int, ridge_lambda: float | None) -> CandidateModel:
    """Shared (global) AR(lag) with intercept, fitted across all series."""
    X, y = _ar_training_rows(train, lag)
    warnings: list[str] = []
    if len(y) == 0:
        # No series long enough for even one window; degenerate mean model.
        all_values = np.concatenate([s.values for s in train.series])
        coef = [0.0] * lag
        intercept = float(np.mean(all_values))
        warnings.append("insufficient_history_mean_fallback")
    else:
        design = np.column_stack([X, np.ones(len(y))])
        if ridge_lambda is not None:
            theta = _ridge_solve(design, y, ridge_lambda)
        elif np.linalg.matrix_rank(design) < design.shape[1]:
            theta = _ridge_solve(design, y, RIDGE_FALLBACK_LAMBDA)
            warnings.append("singular_ridge_fallback")
        else:
            theta, *_ = np.linalg.lstsq(design, y, rcond=None)
        coef = [float(c) for c in theta[:lag]]
        intercept = float(theta[lag])

    tails = {}
    for s in train.series:
        y_s = s.values
        if len(y_s) >= lag:
            tail = y_s[-lag:]
        else:
            tail = np.concatenate([np.full(lag - len(y_s), y_s[0]), y_s])
        tails[s.id] = [float(v) for v in tail]
    state = {
        "params": {"coef": coef, "intercept": intercept},
        "context": {"lag": lag, "tail": tails},
    }
    return CandidateModel(key, {"lag": lag, "ridge_lambda": ridge_lambda}, state, warnings)


def _ridge_solve(design: np.ndarray, y: np.ndarray, lam: float) -> np.ndarray:
    gram = design.T @ design + lam * np.eye(design.shape[1])
    return np.linalg.solve(gram, design.T @ y)


def _predict_ar(model: CandidateModel, horizon: int) -> dict[str, np.ndarray]:
    state = model.fitted_state
    lag = state["context"]["lag"]
    coef = np.array(state["params"]["coef"])
    intercept = state["params"]["intercept"]
    out = {}
    for sid, tail in state["context"]["tail"].items():
        window = list(tail)
        preds = []
        for _ in range(horizon):
            nxt = intercept + float(np.dot(coef, window[-lag:]))
            preds.append(nxt)
            window.append(nxt)
        out[sid] = np.array(preds)
    return out


_FITTERS = {
    "naive": _fit_naive,
    "snaive": _fit_snaive,
    "drift": _fit_drift,
    "ses": _fit_ses,
    "linear_ar": lambda train: _fit_ar(train, "linear_ar", 4, None),
    "ridge_ar_large": lambda train: _fit_ar(train, "ridge_ar_large", 12, RIDGE_LARGE_LAMBDA),
}

_PREDICTORS = {
    "naive": _predict_naive,
    "snaive": _predict_snaive,
    "drift": _predict_drift,
    "ses": _predict_ses,
    "linear_ar": _predict_ar,
    "ridge_ar_large": _predict_ar,
}
