"""Study orchestration and meta-learner quality reporting.

Runs the full pipeline (profile every dataset/model pair, meta-learn with
grouped CV, score estimation quality, build top-k convergence curves) and
reports the compositional and direct estimation modes side by side. All
quality measures use out-of-fold estimates only.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import forecasters, metafeatures, metrics, profiler
from .data import Dataset, train_test_split
from .metalearn import (
    CVReport,
    InsufficientDataError,
    LearnerBundle,
    LearnerConfig,
    MetaLearner,
    assemble_rows,
    compound_targets,
    select_best_rows,
)
from .propertydb import PROPERTY_BY_NAME, PROPERTY_NAMES, PropertyDatabase, PropertyRecord
from .recommend import WeightVector, compound, default_weights

TOP_K = 5


def quality_measures(
    true_scores: dict[str, float], estimates: dict[str, float], threshold: float = 0.1
) -> dict[str, float]:
    """Per-dataset estimation quality: error, threshold rate, and rank hits.

    Returns keys a (mean absolute error), b (share of models with error
    below the threshold), c (top-1 agreement), d (true best inside the
    estimated top five), e (top-five intersection size).
    """
    if set(true_scores) != set(estimates):
        raise KeyError("true scores and estimates must cover the same models")
    models = sorted(true_scores)
    errors = [abs(true_scores[m] - estimates[m]) for m in models]

    def top(scores: dict[str, float], n: int) -> list[str]:
        return sorted(scores, key=lambda m: (-scores[m], m))[:n]

    best_true = top(true_scores, 1)[0]
    best_est = top(estimates, 1)[0]
    out = {
        "a": float(np.mean(errors)),
        "b": float(np.mean([e < threshold for e in errors])),
        "c": 1.0 if best_true == best_est else 0.0,
    }
    if len(models) >= TOP_K:  # top-5 measures are undefined for tiny pools
        top5_true = set(top(true_scores, TOP_K))
        top5_est = set(top(estimates, TOP_K))
        out["d"] = 1.0 if best_true in top5_est else 0.0
        out["e"] = float(len(top5_true & top5_est))
    return out


@dataclass
class ConvergenceCurve:
    """Quality and cumulative cost of testing only the top-k recommendations."""

    dataset: str
    quality_ratio: list[float]
    cost_ratio: list[float]

    @property
    def ks(self) -> list[int]:
        return list(range(1, len(self.quality_ratio) + 1))


def convergence(
    db: PropertyDatabase, rankings: dict[str, list[str]]
) -> tuple[list[ConvergenceCurve], ConvergenceCurve | None]:
    """Top-k convergence per dataset plus the macro average.

    Quality ratio at k is the best true MASE overall divided by the best
    MASE among the first k recommendations (1.0 = optimum reached); cost
    ratio is the energy to evaluate the first k candidates relative to
    evaluating all of them. Energy per model is its stored training plus
    inference power-draw record. Datasets without usable MASE records are
    skipped.
    """
    curves = []
    for dataset, ranked in rankings.items():
        mase_raw = {
            m: db.get(dataset, m, "mase").raw_value
            for m in ranked
            if db.get(dataset, m, "mase") is not None and db.get(dataset, m, "mase").status == "ok"
        }
        if len(mase_raw) != len(ranked):
            continue
        costs = {}
        for m in ranked:
            train_rec = db.get(dataset, m, "train_power")
            infer_rec = db.get(dataset, m, "infer_power")
            if train_rec is None or infer_rec is None:
                raise KeyError(f"missing energy records for ({dataset}, {m})")
            costs[m] = train_rec.raw_value + infer_rec.raw_value
        total_cost = sum(costs.values())
        best_overall = min(mase_raw.values())
        quality, cost = [], []
        for k in range(1, len(ranked) + 1):
            best_topk = min(mase_raw[m] for m in ranked[:k])
            quality.append(1.0 if best_topk == 0 else best_overall / best_topk)
            cost.append(sum(costs[m] for m in ranked[:k]) / total_cost if total_cost > 0 else 1.0)
        curves.append(ConvergenceCurve(dataset, quality, cost))

    average = None
    if curves:
        n_k = len(curves[0].quality_ratio)
        avg_quality = [float(np.mean([c.quality_ratio[i] for c in curves])) for i in range(n_k)]
        avg_cost = [float(np.mean([c.cost_ratio[i] for c in curves])) for i in range(n_k)]
        average = ConvergenceCurve("__average__", avg_quality, avg_cost)
    return curves, average


# --- profiling phase ------------------------------------------------------


def profile_pair(
    d: Dataset, model_key: str, power_rating_w: float = 65.0, repetitions: int = 3
) -> list[PropertyRecord]:
    """Measure all nine properties for one dataset/model pair.

    Metric denominators that vanish produce status=undefined records; any
    other failure marks every property of the pair as failed.
    """
    records = []

    def rec(prop: str, value: float, status: str = "ok"):
        records.append(
            PropertyRecord(
                dataset=d.name,
                group=d.group,
                model=model_key,
                property=prop,
                raw_value=value,
                unit=PROPERTY_BY_NAME[prop].unit,
                status=status,
            )
        )

    try:
        split = train_test_split(d)
        forecasts, profile = profiler.profile_fit_predict(
            model_key, split, power_rating_w=power_rating_w, repetitions=repetitions
        )
    except Exception:
        for prop in PROPERTY_NAMES:
            rec(prop, 0.0, status="failed")
        return records

    for prop, value in (
        ("params", float(profile.param_count)),
        ("size", float(profile.model_bytes)),
        ("train_power", profile.train_energy_kwh),
        ("train_time", profile.train_time_s),
        ("infer_power", profile.infer_energy_kwh_per_pred),
        ("infer_time", profile.infer_time_s_per_pred),
    ):
        rec(prop, value)

    per_series = {"mase": [], "rmse": [], "mape": []}
    undefined = {"mase": False, "mape": False}
    for s in split.train.series:
        actual = split.test[s.id]
        forecast = forecasts[s.id]
        per_series["rmse"].append(metrics.rmse(actual, forecast))
        try:
            per_series["mase"].append(metrics.mase(actual, forecast, s.values, d.season_length))
        except metrics.UndefinedMetricError:
            undefined["mase"] = True
        try:
            per_series["mape"].append(metrics.mape(actual, forecast))
        except metrics.UndefinedMetricError:
            undefined["mape"] = True

    rec("rmse", float(np.mean(per_series["rmse"])))
    for prop in ("mase", "mape"):
        if undefined[prop] or not per_series[prop]:
            rec(prop, 0.0, status="undefined")
        else:
            rec(prop, float(np.mean(per_series[prop])))
    return records


def profile_all(
    datasets: list[Dataset],
    pool=forecasters.MODEL_KEYS,
    power_rating_w: float = 65.0,
    repetitions: int = 3,
) -> tuple[PropertyDatabase, dict[str, np.ndarray]]:
    """Profile every dataset/model pair; failed pairs never abort the sweep."""
    db = PropertyDatabase()
    dataset_features: dict[str, np.ndarray] = {}
    for d in datasets:
        dataset_features[d.name] = metafeatures.dataset_features(d)
        for model_key in pool:
            for record in profile_pair(d, model_key, power_rating_w, repetitions):
                db.insert(record)
    return db, dataset_features


# --- study ----------------------------------------------------------------


@dataclass
class StudyResult:
    db: PropertyDatabase
    dataset_features: dict[str, np.ndarray]
    bundle: LearnerBundle
    quality: dict
    curves: list[ConvergenceCurve]
    average_curve: ConvergenceCurve | None
    report: dict = field(default_factory=dict)


def _aggregate(per_dataset: list[dict[str, float]]) -> dict:
    keys = ("a", "b", "c", "d", "e")
    names = {
        "a": "mean_abs_error",
        "b": "within_threshold",
        "c": "top1_accuracy",
        "d": "top5_hit",
        "e": "top5_intersection",
    }
    out = {"n_datasets": len(per_dataset)}
    for key in keys:
        values = [m[key] for m in per_dataset]
        out[names[key]] = {
            "mean": float(np.mean(values)) if values else None,
            "std": float(np.std(values)) if values else None,
        }
    return out


def run_study_from_db(
    db: PropertyDatabase,
    dataset_features: dict[str, np.ndarray],
    pool=forecasters.MODEL_KEYS,
    weights: WeightVector | None = None,
    n_folds: int = 5,
    seed: int = 42,
    threshold: float = 0.1,
    config: LearnerConfig | None = None,
) -> StudyResult:
    """Meta-learn, evaluate, and report from an existing measurement DB.

    Everything here is deterministic given the database contents and seed;
    the stochastic wall-clock measurements live only in the profiling phase.
    """
    w = weights or default_weights()
    cfg = config or LearnerConfig(seed=seed)
    pool = list(pool)

    learners: dict[str, MetaLearner] = {}
    reports: dict[str, CVReport] = {}
    oof_by_property: dict[str, dict[tuple[str, str], float]] = {}
    for prop in PROPERTY_NAMES:
        meta = assemble_rows(db, dataset_features, prop, pool)
        winner, report, oof = select_best_rows(
            meta.X, meta.y, meta.groups, prop, meta.feature_names,
            n_folds=n_folds, seed=seed, config=cfg,
        )
        learners[prop] = winner
        reports[prop] = report
        oof_by_property[prop] = dict(zip(meta.keys, oof))

    targets = compound_targets(db, w)
    meta_direct = assemble_rows(db, dataset_features, "compound", pool, targets=targets)
    direct, direct_report, direct_oof = select_best_rows(
        meta_direct.X, meta_direct.y, meta_direct.groups, "compound", meta_direct.feature_names,
        n_folds=n_folds, seed=seed, config=cfg,
    )
    reports["compound_direct"] = direct_report
    direct_estimates = dict(zip(meta_direct.keys, direct_oof))

    # Per-dataset quality measures from out-of-fold estimates only.
    measures: dict[str, list[dict]] = {prop: [] for prop in PROPERTY_NAMES}
    measures["compound_compositional"] = []
    measures["compound_direct"] = []
    rankings: dict[str, list[str]] = {}
    for dataset in db.datasets():
        for prop in PROPERTY_NAMES:
            try:
                truth = db.index_scores(dataset, prop)
            except Exception:
                continue
            est = {
                m: oof_by_property[prop][(dataset, m)]
                for m in truth
                if (dataset, m) in oof_by_property[prop]
            }
            if set(est) == set(truth) and len(truth) >= TOP_K:
                measures[prop].append(quality_measures(truth, est, threshold))

        true_compound = {m: v for (ds, m), v in targets.items() if ds == dataset}
        est_compound = {}
        for m in true_compound:
            per_prop = {
                prop: oof_by_property[prop][(dataset, m)]
                for prop in PROPERTY_NAMES
                if (dataset, m) in oof_by_property[prop]
            }
            if per_prop:
                est_compound[m] = compound(per_prop, w)
        if set(est_compound) == set(true_compound) and len(true_compound) >= TOP_K:
            measures["compound_compositional"].append(
                quality_measures(true_compound, est_compound, threshold)
            )
            direct_est = {m: direct_estimates[(dataset, m)] for m in true_compound}
            measures["compound_direct"].append(
                quality_measures(true_compound, direct_est, threshold)
            )
        if est_compound:
            rankings[dataset] = sorted(est_compound, key=lambda m: (-est_compound[m], m))

    curves, average = convergence(db, rankings)

    bundle = LearnerBundle(
        learners=learners,
        direct=direct,
        feature_names=metafeatures.feature_names(),
        schema_hash=metafeatures.schema_hash(),
        seed=seed,
        cv_reports={name: r.to_dict() for name, r in reports.items()},
    )
    quality = {name: _aggregate(values) for name, values in measures.items()}

    report = {
        "n_rows": sum(len(db.models(ds)) for ds in db.datasets()),
        "n_datasets": len(db.datasets()),
        "pool": pool,
        "folds": n_folds,
        "seed": seed,
        "threshold": threshold,
        "weights": w.as_floats(),
        "cv": {name: r.to_dict() for name, r in reports.items()},
        "measures": quality,
    }
    return StudyResult(
        db=db,
        dataset_features=dataset_features,
        bundle=bundle,
        quality=quality,
        curves=curves,
        average_curve=average,
        report=report,
    )


def run_study(
    datasets: list[Dataset],
    pool=forecasters.MODEL_KEYS,
    weights: WeightVector | None = None,
    n_folds: int = 5,
    seed: int = 42,
    power_rating_w: float = 65.0,
    repetitions: int = 3,
    threshold: float = 0.1,
    config: LearnerConfig | None = None,
) -> StudyResult:
    """Full pipeline: profile everything, then meta-learn and report."""
    groups = {d.group for d in datasets}
    if len(groups) < n_folds:
        raise InsufficientDataError(
            f"need at least {n_folds} dataset groups, have {len(groups)}"
        )
    db, dataset_features = profile_all(datasets, pool, power_rating_w, repetitions)
    return run_study_from_db(
        db, dataset_features, pool, weights, n_folds, seed, threshold, config
    )


def write_artifacts(result: StudyResult, out_dir: str | Path) -> list[Path]:
    """Write the four study artifacts: DB, schema, report, and curves."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    db_path = out_dir / "property_db.jsonl"
    result.db.save(db_path)
    schema_path = out_dir / "features.json"
    metafeatures.save_schema(schema_path)
    report_path = out_dir / "quality_report.json"
    report_path.write_text(
        json.dumps(result.report, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    curves_path = out_dir / "convergence.csv"
    with open(curves_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(["dataset", "k", "quality_ratio", "cost_ratio"])
        all_curves = list(result.curves)
        if result.average_curve:
            all_curves.append(result.average_curve)
        for curve in all_curves:
            for k, q, c in zip(curve.ks, curve.quality_ratio, curve.cost_ratio):
                writer.writerow([curve.dataset, k, repr(q), repr(c)])
    return [db_path, schema_path, report_path, curves_path]
