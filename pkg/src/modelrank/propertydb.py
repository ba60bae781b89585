"""The measured-property database and the relative index scale.

Raw measurements are stored per (dataset, model, property). Index scores
normalize each measurement by the best (minimum) one observed for the same
dataset and property, so the empirical best always scores exactly 1.0 and
every value lands in (0, 1]. All registered properties are lower-is-better,
which is what makes the min-over-models reference valid.
"""

from __future__ import annotations

import json
import math
import warnings as _warnings
from dataclasses import dataclass, asdict
from pathlib import Path

EPSILON = 1e-12  # raw values below this are clamped before ratio computation


class PropertyUnavailableError(LookupError):
    """No usable records exist for the requested (dataset, property)."""


@dataclass(frozen=True)
class PropertySpec:
    name: str
    group: str  # P | C | R
    unit: str
    direction: str = "lower"  # reserved; the default registry is all lower-is-better


#: The nine measured properties, in canonical axis order.
PROPERTIES: tuple[PropertySpec, ...] = (
    PropertySpec("mase", "P", "ratio"),
    PropertySpec("rmse", "P", "value"),
    PropertySpec("mape", "P", "fraction"),
    PropertySpec("params", "C", "count"),
    PropertySpec("size", "C", "bytes"),
    PropertySpec("train_power", "R", "kWh"),
    PropertySpec("train_time", "R", "s"),
    PropertySpec("infer_power", "R", "kWh/pred"),
    PropertySpec("infer_time", "R", "s/pred"),
)

PROPERTY_NAMES: tuple[str, ...] = tuple(p.name for p in PROPERTIES)
PROPERTY_BY_NAME: dict[str, PropertySpec] = {p.name: p for p in PROPERTIES}

STATUSES = ("ok", "undefined", "failed")


@dataclass(frozen=True)
class PropertyRecord:
    dataset: str
    group: str
    model: str
    property: str
    raw_value: float
    unit: str
    status: str = "ok"

    def __post_init__(self):
        if self.property not in PROPERTY_BY_NAME:
            raise ValueError(f"unregistered property: {self.property!r}")
        if self.status not in STATUSES:
            raise ValueError(f"invalid status: {self.status!r}")
        if self.status == "ok" and not math.isfinite(self.raw_value):
            raise ValueError(
                f"record ({self.dataset}, {self.model}, {self.property}): "
                "ok status requires a finite raw_value"
            )


class PropertyDatabase:
    """Append-style store of property records, one per (dataset, model, property)."""

    def __init__(self):
        self._records: dict[tuple[str, str, str], PropertyRecord] = {}

    def __len__(self) -> int:
        return len(self._records)

    def __eq__(self, other) -> bool:
        return isinstance(other, PropertyDatabase) and self._records == other._records

    def insert(self, record: PropertyRecord) -> None:
        key = (record.dataset, record.model, record.property)
        if key in self._records:
            _warnings.warn(f"replacing existing record for {key}", stacklevel=2)
        self._records[key] = record

    def records(self) -> list[PropertyRecord]:
        return list(self._records.values())

    def datasets(self) -> list[str]:
        seen = dict.fromkeys(r.dataset for r in self._records.values())
        return list(seen)

    def models(self, dataset: str) -> list[str]:
        seen = dict.fromkeys(r.model for r in self._records.values() if r.dataset == dataset)
        return list(seen)

    def group_of(self, dataset: str) -> str:
        for r in self._records.values():
            if r.dataset == dataset:
                return r.group
        raise KeyError(f"no records for dataset {dataset!r}")

    def get(self, dataset: str, model: str, property: str) -> PropertyRecord | None:
        return self._records.get((dataset, model, property))

    def _ok_records(self, dataset: str, property: str) -> dict[str, float]:
        return {
            r.model: r.raw_value
            for r in self._records.values()
            if r.dataset == dataset and r.property == property and r.status == "ok"
        }

    def index_scores(self, dataset: str, property: str) -> dict[str, float]:
        """Relative index per model: min raw over models divided by own raw.

        Raw values below EPSILON are clamped up to EPSILON first, so a zero
        measurement still maps the best model to exactly 1.0 and keeps every
        ratio finite. Models without an ok record are omitted.
        """
        raws = self._ok_records(dataset, property)
        if not raws:
            raise PropertyUnavailableError(f"property {property!r} unavailable for {dataset!r}")
        clamped = {m: max(v, EPSILON) for m, v in raws.items()}
        best = min(clamped.values())
        return {m: best / v for m, v in clamped.items()}

    def best_model(self, dataset: str, property: str) -> str:
        """Model with the minimum raw value; ties break lexicographically."""
        raws = self._ok_records(dataset, property)
        if not raws:
            raise PropertyUnavailableError(f"property {property!r} unavailable for {dataset!r}")
        return min(sorted(raws), key=lambda m: raws[m])

    def save(self, path: str | Path) -> None:
        path = Path(path)
        with open(path, "w", encoding="utf-8") as f:
            for record in self._records.values():
                f.write(json.dumps(asdict(record), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "PropertyDatabase":
        db = cls()
        path = Path(path)
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    payload = json.loads(line)
                    record = PropertyRecord(**payload)
                except (json.JSONDecodeError, TypeError, ValueError) as e:
                    raise ValueError(f"{path}: malformed record at line {lineno}: {e}") from e
                db._records[(record.dataset, record.model, record.property)] = record
        return db
