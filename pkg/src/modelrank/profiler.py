"""Resource profiling of fit/predict runs: time, size, and energy proxy.

Energy is a documented proxy (wall time x configured device power) unless a
profile is ingested from an external meter. Timed sections run under a
process-wide lock so no two candidates are ever measured concurrently.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import forecasters
from .data import SplitDataset

JOULES_PER_KWH = 3.6e6

_MEASUREMENT_LOCK = threading.Lock()


@dataclass(frozen=True)
class ResourceProfile:
    train_time_s: float
    infer_time_s_per_pred: float
    train_energy_kwh: float
    infer_energy_kwh_per_pred: float
    param_count: int
    model_bytes: int
    power_rating_w: float
    source: str = "measured"
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in (
            "train_time_s",
            "infer_time_s_per_pred",
            "train_energy_kwh",
            "infer_energy_kwh_per_pred",
            "param_count",
            "model_bytes",
            "power_rating_w",
        ):
            if getattr(self, name) < 0:
                raise ValueError(f"profile field {name} must be non-negative")


def energy_kwh(seconds: float, power_rating_w: float) -> float:
    """Proxy energy: time x configured device power, in kWh."""
    return seconds * power_rating_w / JOULES_PER_KWH


def _resolution_warning(train_time: float, resolution: float) -> bool:
    return train_time < 10 * resolution


def profile_fit_predict(
    model_key: str,
    split: SplitDataset,
    power_rating_w: float = 65.0,
    repetitions: int = 3,
    clock=None,
) -> tuple[dict[str, np.ndarray], ResourceProfile]:
    """Fit and forecast under timing, returning forecasts and the profile.

    Training is timed once; inference time is the median over `repetitions`
    runs, normalized per predicted point. The measurement boundary excludes
    dataset loading and metric computation.
    """
    if power_rating_w <= 0:
        raise ValueError("power_rating_w must be > 0")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    wall_clock = clock is None
    if wall_clock:
        clock = time.monotonic

    horizon = split.horizon
    with _MEASUREMENT_LOCK:
        t0 = clock()
        model = forecasters.fit(model_key, split.train)
        train_time = clock() - t0

        infer_times = []
        for _ in range(repetitions):
            t0 = clock()
            forecasts = forecasters.predict(model, horizon)
            infer_times.append(clock() - t0)

    n_points = split.train.num_series * horizon
    infer_per_pred = float(np.median(infer_times)) / n_points

    warnings = list(model.warnings)
    if wall_clock and _resolution_warning(train_time, time.get_clock_info("monotonic").resolution):
        warnings.append("timer_resolution")

    profile = ResourceProfile(
        train_time_s=max(train_time, 0.0),
        infer_time_s_per_pred=max(infer_per_pred, 0.0),
        train_energy_kwh=energy_kwh(max(train_time, 0.0), power_rating_w),
        infer_energy_kwh_per_pred=energy_kwh(max(infer_per_pred, 0.0), power_rating_w),
        param_count=model.param_count,
        model_bytes=len(model.serialize_state()),
        power_rating_w=power_rating_w,
        warnings=tuple(warnings),
    )
    return forecasts, profile


_EXTERNAL_FIELDS = (
    "train_time_s",
    "infer_time_s_per_pred",
    "train_energy_kwh",
    "infer_energy_kwh_per_pred",
    "param_count",
    "model_bytes",
)


def ingest_external_profile(record_path: str | Path) -> ResourceProfile:
    """Load a profile produced by an external meter; marked source=external."""
    record_path = Path(record_path)
    record = json.loads(record_path.read_text(encoding="utf-8"))
    for name in _EXTERNAL_FIELDS:
        if name not in record:
            raise ValueError(f"external profile missing field: {name}")
        if record[name] < 0:
            raise ValueError(f"external profile field {name} must be non-negative")
    return ResourceProfile(
        train_time_s=float(record["train_time_s"]),
        infer_time_s_per_pred=float(record["infer_time_s_per_pred"]),
        train_energy_kwh=float(record["train_energy_kwh"]),
        infer_energy_kwh_per_pred=float(record["infer_energy_kwh_per_pred"]),
        param_count=int(record["param_count"]),
        model_bytes=int(record["model_bytes"]),
        power_rating_w=float(record.get("power_rating_w", 0.0)),
        source="external",
    )
