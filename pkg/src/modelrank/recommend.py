"""Weighted compound scoring, ranking, rating labels, and explanations.

The compound score of a candidate is the weighted sum of its per-property
index estimates. Weights are kept as exact fractions so the default
Performance/Complexity/Resources groups each sum to exactly one third.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import forecasters, metafeatures
from .data import Dataset
from .propertydb import PROPERTY_BY_NAME, PROPERTY_NAMES, PropertyDatabase

CLAMP_EPS = 1e-12

#: Rating band lower bounds, best to worst; >= bound maps to the label.
RATING_BANDS: tuple[tuple[float, str], ...] = (
    (0.8, "A"),
    (0.65, "B"),
    (0.5, "C"),
    (0.35, "D"),
    (0.0, "E"),
)


class SchemaMismatchError(ValueError):
    """Learner bundle was trained under a different feature schema."""


class WeightVector:
    """Non-negative per-property weights, normalized to sum exactly 1."""

    def __init__(self, weights: dict[str, Fraction | float | int]):
        converted = {}
        for name, value in weights.items():
            if name not in PROPERTY_BY_NAME:
                raise ValueError(f"unknown property in weights: {name!r}")
            frac = value if isinstance(value, Fraction) else Fraction(value).limit_denominator(10**9)
            if frac < 0:
                raise ValueError(f"weight for {name!r} must be non-negative")
            converted[name] = frac
        total = sum(converted.values())
        if total == 0:
            raise ValueError("at least one weight must be positive")
        self._weights: dict[str, Fraction] = {n: v / total for n, v in converted.items()}

    def __getitem__(self, name: str) -> Fraction:
        return self._weights.get(name, Fraction(0))

    def items(self):
        return self._weights.items()

    def properties(self) -> list[str]:
        return [n for n, w in self._weights.items() if w > 0]

    def group_sum(self, group: str) -> Fraction:
        return sum(
            (w for n, w in self._weights.items() if PROPERTY_BY_NAME[n].group == group),
            Fraction(0),
        )

    def as_floats(self) -> dict[str, float]:
        return {n: float(w) for n, w in self._weights.items()}


def default_weights() -> WeightVector:
    """Equal-thirds weighting across the P, C, and R property groups."""
    return WeightVector(
        {
            "mase": Fraction(1, 9),
            "rmse": Fraction(1, 9),
            "mape": Fraction(1, 9),
            "params": Fraction(1, 6),
            "size": Fraction(1, 6),
            "train_power": Fraction(1, 12),
            "train_time": Fraction(1, 12),
            "infer_power": Fraction(1, 12),
            "infer_time": Fraction(1, 12),
        }
    )


def clamp_score(value: float) -> float:
    """Force an estimate into (0, 1]; regressors can overshoot the range."""
    return min(max(float(value), CLAMP_EPS), 1.0)


def compound(estimates: dict[str, float], w: WeightVector) -> float:
    """Weighted sum of clamped estimates; weights renormalized over the
    properties actually present so missing measurements do not deflate the
    score."""
    available = [n for n in w.properties() if n in estimates]
    if not available:
        raise ValueError("no weighted property has an estimate")
    total_w = sum((w[n] for n in available), Fraction(0))
    return float(sum(float(w[n] / total_w) * clamp_score(estimates[n]) for n in available))


def contributions(estimates: dict[str, float], w: WeightVector) -> dict[str, float]:
    """Normalized share of each property in the compound estimate."""
    available = [n for n in w.properties() if n in estimates]
    raw = {n: float(w[n]) * clamp_score(estimates[n]) for n in available}
    total = sum(raw.values())
    return {n: v / total for n, v in raw.items()}


def rating_label(value: float, bands: tuple[tuple[float, str], ...] = RATING_BANDS) -> str:
    """Discrete A-E band for an index or compound score in (0, 1]."""
    if not 0.0 < value <= 1.0:
        raise ValueError(f"score {value} outside (0, 1]")
    for bound, label in bands:
        if value >= bound:
            return label
    return bands[-1][1]


@dataclass(frozen=True)
class RankedModel:
    model: str
    compound: float
    estimates: dict[str, float]
    contributions: dict[str, float]
    labels: dict[str, str]

    def to_dict(self) -> dict:
        return {
            "model": self.model,
            "compound": self.compound,
            "estimates": self.estimates,
            "contributions": self.contributions,
            "labels": self.labels,
        }


@dataclass(frozen=True)
class Recommendation:
    dataset: str
    mode: str
    weights: dict[str, float]
    ranking: tuple[RankedModel, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "dataset": self.dataset,
            "mode": self.mode,
            "weights": self.weights,
            "ranking": [r.to_dict() for r in self.ranking],
        }


def _check_schema(learner) -> None:
    expected = metafeatures.schema_hash()
    if getattr(learner, "schema_hash", expected) != expected:
        raise SchemaMismatchError(
            "learner schema hash does not match the current feature schema"
        )


def recommend(
    d: Dataset,
    learners: dict[str, object],
    w: WeightVector,
    mode: str = "compositional",
    models: list[str] | None = None,
    k: int | None = None,
) -> Recommendation:
    """Rank candidate models for a dataset from meta-learned estimates.

    Compositional mode estimates every property per candidate and aggregates
    them under `w`; direct mode queries a single compound estimator (keyed
    "compound" in `learners`) and ships no per-property breakdown. Each
    learner's predict sees one row per candidate, in the order of `models`.
    """
    pool = list(models) if models is not None else list(forecasters.MODEL_KEYS)
    rows = np.array([metafeatures.build_row(d, m) for m in pool])
    entries: list[RankedModel] = []
    warnings: list[str] = []

    if mode == "compositional":
        per_property: dict[str, np.ndarray] = {}
        for prop, learner in learners.items():
            if prop == "compound":
                continue
            _check_schema(learner)
            per_property[prop] = np.asarray(learner.predict(rows), dtype=float)
        for i, model in enumerate(pool):
            estimates = {}
            for prop, values in per_property.items():
                raw = float(values[i])
                if not 0.0 < raw <= 1.0:
                    warnings.append(f"clamped estimate {prop}/{model}")
                estimates[prop] = clamp_score(raw)
            score = compound(estimates, w)
            labels = {prop: rating_label(v) for prop, v in estimates.items()}
            labels["overall"] = rating_label(score)
            entries.append(
                RankedModel(
                    model=model,
                    compound=score,
                    estimates=estimates,
                    contributions=contributions(estimates, w),
                    labels=labels,
                )
            )
    elif mode == "direct":
        if "compound" not in learners:
            raise ValueError("direct mode requires a 'compound' learner")
        learner = learners["compound"]
        _check_schema(learner)
        scores = np.asarray(learner.predict(rows), dtype=float)
        for i, model in enumerate(pool):
            raw = float(scores[i])
            if not 0.0 < raw <= 1.0:
                warnings.append(f"clamped estimate compound/{model}")
            score = clamp_score(raw)
            entries.append(
                RankedModel(
                    model=model,
                    compound=score,
                    estimates={},
                    contributions={},
                    labels={"overall": rating_label(score)},
                )
            )
    else:
        raise ValueError(f"unknown mode: {mode!r}")

    entries.sort(key=lambda e: (-e.compound, e.model))
    if k is not None:
        entries = entries[:k]
    return Recommendation(
        dataset=d.name,
        mode=mode,
        weights=w.as_floats(),
        ranking=tuple(entries),
        warnings=tuple(warnings),
    )


def star_profile(
    dataset_name: str,
    models: list[str],
    db: PropertyDatabase | None = None,
    learners: dict[str, object] | None = None,
    dataset: Dataset | None = None,
) -> dict[str, list[dict]]:
    """Per-model index vectors over all nine properties, in axis order.

    Values come from the database where records exist (flagged "true") and
    from the learners otherwise (flagged "estimated", clamped into (0, 1]).
    """
    for model in models:
        if model not in forecasters.MODEL_KEYS:
            raise KeyError(f"unknown model: {model!r}")
    profiles: dict[str, list[dict]] = {}
    estimated: dict[str, dict[str, float]] = {}
    if learners is not None and dataset is not None:
        rows = np.array([metafeatures.build_row(dataset, m) for m in models])
        for prop, learner in learners.items():
            if prop == "compound":
                continue
            _check_schema(learner)
            values = np.asarray(learner.predict(rows), dtype=float)
            for i, model in enumerate(models):
                estimated.setdefault(model, {})[prop] = clamp_score(float(values[i]))

    for model in models:
        axes = []
        for prop in PROPERTY_NAMES:
            true_value = None
            if db is not None:
                try:
                    true_value = db.index_scores(dataset_name, prop).get(model)
                except Exception:
                    true_value = None
            if true_value is not None:
                axes.append({"property": prop, "value": float(true_value), "source": "true"})
            elif model in estimated and prop in estimated[model]:
                axes.append({"property": prop, "value": estimated[model][prop], "source": "estimated"})
        profiles[model] = axes
    return profiles
