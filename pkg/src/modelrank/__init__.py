"""Multi-objective, explainable model selection for time-series forecasting."""

__version__ = "0.1.0"

from .data import Dataset, TimeSeries, load_dataset, subsample_variants, train_test_split
from .propertydb import PropertyDatabase, PropertyRecord
from .recommend import Recommendation, WeightVector, default_weights, recommend

__all__ = [
    "Dataset",
    "TimeSeries",
    "load_dataset",
    "subsample_variants",
    "train_test_split",
    "PropertyDatabase",
    "PropertyRecord",
    "Recommendation",
    "WeightVector",
    "default_weights",
    "recommend",
    "__version__",
]
