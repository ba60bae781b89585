"""Bundled desk-scale demo data: 19 synthetic families of series.

Each family mixes trend, seasonality, and noise with its own parameters and
becomes one dataset whose group id is the family name, so subsampled
variants stay glued to their parent during grouped cross-validation. All
values stay strictly positive, keeping percentage errors defined.
"""

from __future__ import annotations

import numpy as np

from .data import Dataset, TimeSeries, subsample_variants

DEFAULT_FRACTIONS: tuple[float, ...] = (0.2, 0.4, 0.6, 0.8, 1.0)

_SEASON_CHOICES = (1, 4, 7, 12)


def generate_demo_families(seed: int = 42, n_families: int = 19) -> list[Dataset]:
    """Deterministic synthetic families: trend/seasonal/noise mixtures."""
    families = []
    for i in range(n_families):
        rng = np.random.default_rng(seed * 1000 + i)
        n_series = 8 + i % 5
        length = 60 + 4 * (i % 7)
        horizon = 6 + 2 * (i % 4)
        season = _SEASON_CHOICES[i % 4]
        base = rng.uniform(40.0, 80.0)
        slope = rng.uniform(-0.15, 0.3)
        amplitude = rng.uniform(0.0, 8.0) if season > 1 else 0.0
        sigma = rng.uniform(0.2, 2.0)

        series = []
        t = np.arange(length)
        for s in range(n_series):
            level = base * rng.uniform(0.8, 1.2)
            phase = rng.uniform(0, 2 * np.pi)
            seasonal = amplitude * np.sin(2 * np.pi * t / max(season, 2) + phase) if season > 1 else 0.0
            noise = rng.normal(0.0, sigma, size=length)
            values = level + slope * t + seasonal + noise
            series.append(TimeSeries(id=f"s{s:02d}", values=values))
        families.append(
            Dataset(
                name=f"demo{i:02d}",
                series=tuple(series),
                horizon=horizon,
                season_length=season,
                group=f"demo{i:02d}",
            )
        )
    return families


def demo_study_datasets(seed: int = 42, n_families: int = 19) -> list[Dataset]:
    """The full demo corpus: every family plus its five subsampled variants."""
    datasets: list[Dataset] = []
    for family in generate_demo_families(seed, n_families):
        datasets.append(family)
        datasets.extend(subsample_variants(family, list(DEFAULT_FRACTIONS), seed))
    return datasets
