import json

import numpy as np
import pytest

from modelrank.data import Dataset, TimeSeries


def make_dataset(series_values, horizon=2, season_length=1, name="d", group="g"):
    """Build a dataset from {id: values} or a list of value lists."""
    if isinstance(series_values, dict):
        items = series_values.items()
    else:
        items = ((f"s{i:02d}", v) for i, v in enumerate(series_values))
    series = tuple(TimeSeries(id=sid, values=np.asarray(v, dtype=float)) for sid, v in items)
    return Dataset(name=name, series=series, horizon=horizon, season_length=season_length, group=group)


def write_manifest(tmp_path, name="d", group="g", horizon=2, season_length=1, rows=None):
    """Write a manifest + CSV pair and return the manifest path."""
    if rows is None:
        rows = [("a", step, float(step)) for step in range(1, 11)]
    csv_path = tmp_path / f"{name}.csv"
    lines = ["series_id,step,value"] + [f"{sid},{step},{value}" for sid, step, value in rows]
    csv_path.write_text("\n".join(lines) + "\n")
    manifest_path = tmp_path / f"{name}.json"
    manifest_path.write_text(
        json.dumps(
            {
                "name": name,
                "data": csv_path.name,
                "horizon": horizon,
                "season_length": season_length,
                "group": group,
            }
        )
    )
    return manifest_path


@pytest.fixture
def trend_dataset():
    rng = np.random.default_rng(7)
    series = [50 + 0.5 * np.arange(40) + rng.normal(0, 1, 40) for _ in range(4)]
    return make_dataset(series, horizon=4, season_length=2, name="trendy", group="trendy")
