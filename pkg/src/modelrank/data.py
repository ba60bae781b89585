"""Dataset representation, ingestion, splitting, and subsampled variants.

A dataset is a named bundle of univariate series sharing a forecast horizon,
a season length, and a group id. The group id ties subsampled variants back
to their parent so grouped cross-validation can keep them together.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class IngestError(ValueError):
    """Raised when a manifest or data file violates the ingestion contract."""


@dataclass(frozen=True)
class TimeSeries:
    """A single univariate series of finite observations."""

    id: str
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) < 1:
            raise ValueError(f"series {self.id!r}: needs a 1-d sequence of length >= 1")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"series {self.id!r}: contains non-finite values")
        object.__setattr__(self, "values", values)

    @property
    def length(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    """A named collection of series with shared forecasting settings.

    Invariant: every series is strictly longer than horizon + season_length,
    so a last-`horizon` holdout still leaves enough history for seasonal
    error scaling.
    """

    name: str
    series: tuple[TimeSeries, ...]
    horizon: int
    season_length: int
    group: str

    def __post_init__(self):
        if not self.series:
            raise ValueError(f"dataset {self.name!r}: needs at least one series")
        if self.horizon < 1:
            raise ValueError(f"dataset {self.name!r}: horizon must be >= 1")
        if self.season_length < 1:
            raise ValueError(f"dataset {self.name!r}: season_length must be >= 1")
        if not self.group:
            raise ValueError(f"dataset {self.name!r}: group must be non-empty")
        min_length = self.horizon + self.season_length
        for s in self.series:
            if s.length <= min_length:
                raise ValueError(
                    f"dataset {self.name!r}: series {s.id!r} too short "
                    f"(length {s.length}, needs > {min_length})"
                )
        object.__setattr__(self, "series", tuple(self.series))

    @property
    def num_series(self) -> int:
        return len(self.series)

    def series_ids(self) -> list[str]:
        return [s.id for s in self.series]

    @classmethod
    def _view(cls, name, series, horizon, season_length, group) -> "Dataset":
        # Internal: builds a dataset without the minimum-length check, for
        # train views whose series were already validated on the parent.
        obj = object.__new__(cls)
        object.__setattr__(obj, "name", name)
        object.__setattr__(obj, "series", tuple(series))
        object.__setattr__(obj, "horizon", horizon)
        object.__setattr__(obj, "season_length", season_length)
        object.__setattr__(obj, "group", group)
        return obj


@dataclass(frozen=True)
class SplitDataset:
    """Train/test view of a dataset: per-series last-`horizon` holdout."""

    train: Dataset
    test: dict[str, np.ndarray] = field(compare=False)

    @property
    def horizon(self) -> int:
        return self.train.horizon


def load_dataset(manifest_path: str | Path) -> Dataset:
    """Load a dataset from a JSON manifest and its CSV data file.

    Manifest: ``{"name", "data", "horizon", "season_length", "group"}``;
    the ``data`` path is resolved relative to the manifest.
    CSV columns: ``series_id,step,value`` with rows grouped by series and
    ``step`` strictly increasing within each series.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise IngestError(f"manifest not found: {manifest_path}")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise IngestError(f"manifest {manifest_path}: invalid JSON ({e})") from e

    missing = [k for k in ("name", "data", "horizon", "season_length", "group") if k not in manifest]
    if missing:
        raise IngestError(f"manifest {manifest_path}: missing keys {missing}")

    data_path = Path(manifest["data"])
    if not data_path.is_absolute():
        data_path = manifest_path.parent / data_path
    if not data_path.exists():
        raise IngestError(f"data file not found: {data_path}")

    per_series: dict[str, list[float]] = {}
    last_step: dict[str, int] = {}
    with open(data_path, newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ["series_id", "step", "value"]:
            raise IngestError(f"{data_path}: expected header series_id,step,value, got {header}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise IngestError(f"{data_path}: malformed row at line {lineno}: {row}")
            sid, step_s, value_s = row
            try:
                step = int(step_s)
                value = float(value_s)
            except ValueError as e:
                raise IngestError(f"{data_path}: malformed row at line {lineno}: {e}") from e
            if not math.isfinite(value):
                raise IngestError(f"{data_path}: non-finite value at line {lineno} (series {sid!r})")
            if sid in last_step and step <= last_step[sid]:
                raise IngestError(
                    f"{data_path}: step not strictly increasing at line {lineno} (series {sid!r})"
                )
            last_step[sid] = step
            per_series.setdefault(sid, []).append(value)

    if not per_series:
        raise IngestError(f"{data_path}: no data rows")

    try:
        series = tuple(
            TimeSeries(id=sid, values=np.array(per_series[sid], dtype=float))
            for sid in sorted(per_series)
        )
        return Dataset(
            name=str(manifest["name"]),
            series=series,
            horizon=int(manifest["horizon"]),
            season_length=int(manifest["season_length"]),
            group=str(manifest["group"]),
        )
    except ValueError as e:
        raise IngestError(str(e)) from e


def train_test_split(d: Dataset) -> SplitDataset:
    """Hold out the last `horizon` points of every series as the test tail."""
    train_series = []
    test: dict[str, np.ndarray] = {}
    for s in d.series:
        train_series.append(TimeSeries(id=s.id, values=s.values[: -d.horizon]))
        test[s.id] = s.values[-d.horizon :].copy()
    train = Dataset._view(d.name, train_series, d.horizon, d.season_length, d.group)
    return SplitDataset(train=train, test=test)


def subsample_variants(d: Dataset, fractions: list[float], seed: int) -> list[Dataset]:
    """Build series-level subsampled variants of a dataset.

    Each variant keeps ``ceil(fraction * num_series)`` series drawn without
    replacement by a seeded RNG, preserves the parent group, and is named
    ``{name}_f{fraction}``. Fraction 1.0 keeps all series.
    """
    if not fractions:
        raise ValueError("fractions must be non-empty")
    rng = np.random.default_rng(seed)
    variants = []
    for fraction in fractions:
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"fraction {fraction} outside (0, 1]")
        count = math.ceil(fraction * d.num_series)
        if count < 1:
            raise ValueError(f"fraction {fraction} selects 0 series")
        chosen = rng.choice(d.num_series, size=count, replace=False)
        picked = tuple(d.series[i] for i in sorted(chosen))
        variants.append(
            Dataset(
                name=f"{d.name}_f{fraction:g}",
                series=picked,
                horizon=d.horizon,
                season_length=d.season_length,
                group=d.group,
            )
        )
    return variants
