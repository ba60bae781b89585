"""Interpretable per-property regressors and grouped-CV method selection.

Three small regressors (ridge linear, depth-limited regression tree, k-NN)
are implemented directly so fitted learners serialize losslessly to JSON
and behave deterministically. The best method per property is the one with
the lowest mean absolute estimation error over group-disjoint folds; ties
fall back to the fixed order of METHODS. Targets are index scores, not raw
measurements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import forecasters, metafeatures
from .propertydb import PROPERTY_NAMES, PropertyDatabase
from .recommend import compound

METHODS: tuple[str, ...] = ("linear_ridge", "decision_tree", "knn")


@dataclass(frozen=True)
class LearnerConfig:
    ridge_lambda: float = 1e-3
    tree_max_depth: int = 6
    knn_k: int = 5
    permutation_repeats: int = 10
    seed: int = 42


class InsufficientDataError(ValueError):
    pass


def grouped_folds(groups, n_folds: int, seed: int) -> list[list[int]]:
    """Assign rows to folds so each group lands wholly inside one fold.

    Fold sizes are balanced by group count (difference at most 1). Returns
    row-index lists, one per fold.
    """
    groups = list(groups)
    unique = sorted(set(groups))
    if n_folds < 2:
        raise ValueError("n_folds must be >= 2")
    if n_folds > len(unique):
        raise InsufficientDataError(
            f"cannot build {n_folds} folds from {len(unique)} distinct groups"
        )
    rng = np.random.default_rng(seed)
    order = list(unique)
    rng.shuffle(order)
    fold_of_group = {g: i % n_folds for i, g in enumerate(order)}
    folds: list[list[int]] = [[] for _ in range(n_folds)]
    for idx, g in enumerate(groups):
        folds[fold_of_group[g]].append(idx)
    return folds


# --- regressor internals -------------------------------------------------
# Each fitter returns (kind, params, importances_vector). Params must be
# JSON-serializable; predict dispatches on kind.


def _fit_ridge(Xs: np.ndarray, y: np.ndarray, cfg: LearnerConfig, rng):
    n_features = Xs.shape[1]
    gram = Xs.T @ Xs + cfg.ridge_lambda * np.eye(n_features)
    coef = np.linalg.solve(gram, Xs.T @ (y - y.mean()))
    params = {"coef": coef.tolist(), "intercept": float(y.mean())}
    importances = np.abs(coef)
    return "ridge", params, importances


def _predict_ridge(params: dict, Xs: np.ndarray) -> np.ndarray:
    return Xs @ np.array(params["coef"]) + params["intercept"]


def _fit_tree(Xs: np.ndarray, y: np.ndarray, cfg: LearnerConfig, rng):
    importances = np.zeros(Xs.shape[1])

    def build(rows: np.ndarray, depth: int) -> dict:
        target = y[rows]
        value = float(target.mean())
        node_sse = float(np.sum((target - value) ** 2))
        if depth >= cfg.tree_max_depth or len(rows) < 2 or node_sse <= 1e-15:
            return {"value": value}
        best = None  # (total_sse, feature, threshold)
        for j in range(Xs.shape[1]):
            col = Xs[rows, j]
            order = np.argsort(col, kind="stable")
            col_sorted = col[order]
            y_sorted = y[rows][order]
            csum = np.cumsum(y_sorted)
            csum_sq = np.cumsum(y_sorted**2)
            total_sum, total_sq, n = csum[-1], csum_sq[-1], len(rows)
            for i in range(1, n):
                if col_sorted[i] == col_sorted[i - 1]:
                    continue
                left_sse = csum_sq[i - 1] - csum[i - 1] ** 2 / i
                right_sum = total_sum - csum[i - 1]
                right_sse = (total_sq - csum_sq[i - 1]) - right_sum**2 / (n - i)
                total = left_sse + right_sse
                if best is None or total < best[0] - 1e-15:
                    threshold = float((col_sorted[i - 1] + col_sorted[i]) / 2)
                    best = (float(total), j, threshold)
        if best is None or node_sse - best[0] <= 1e-12 * max(1.0, node_sse):
            return {"value": value}
        total, feature, threshold = best
        importances[feature] += node_sse - total
        left_rows = rows[Xs[rows, feature] <= threshold]
        right_rows = rows[Xs[rows, feature] > threshold]
        return {
            "feature": int(feature),
            "threshold": threshold,
            "left": build(left_rows, depth + 1),
            "right": build(right_rows, depth + 1),
        }

    root = build(np.arange(len(y)), 0)
    return "tree", {"root": root, "max_depth": cfg.tree_max_depth}, importances


def _tree_depth(node: dict) -> int:
    if "value" in node:
        return 0
    return 1 + max(_tree_depth(node["left"]), _tree_depth(node["right"]))


def _predict_tree(params: dict, Xs: np.ndarray) -> np.ndarray:
    root = params["root"]
    out = np.empty(len(Xs))
    for i, x in enumerate(Xs):
        node = root
        while "value" not in node:
            node = node["left"] if x[node["feature"]] <= node["threshold"] else node["right"]
        out[i] = node["value"]
    return out


def _knn_predict_matrix(train: np.ndarray, targets: np.ndarray, k: int, Xs: np.ndarray) -> np.ndarray:
    # Squared Euclidean via the expansion trick; stable argsort keeps
    # equal-distance neighbors in training-row order.
    d2 = (Xs**2).sum(axis=1)[:, None] + (train**2).sum(axis=1)[None, :] - 2.0 * (Xs @ train.T)
    nearest = np.argsort(d2, axis=1, kind="stable")[:, :k]
    return targets[nearest].mean(axis=1)


def _fit_knn(Xs: np.ndarray, y: np.ndarray, cfg: LearnerConfig, rng):
    k = min(cfg.knn_k, len(y))
    params = {"train": Xs.tolist(), "targets": y.tolist(), "k": k}
    if rng is None:
        return "knn", params, np.zeros(Xs.shape[1])
    # Permutation importance: mean MAE increase over seeded shuffles.
    baseline = np.mean(np.abs(_knn_predict_matrix(Xs, y, k, Xs) - y))
    importances = np.zeros(Xs.shape[1])
    for j in range(Xs.shape[1]):
        bumps = []
        for _ in range(cfg.permutation_repeats):
            X_perm = Xs.copy()
            X_perm[:, j] = X_perm[rng.permutation(len(y)), j]
            err = np.mean(np.abs(_knn_predict_matrix(Xs, y, k, X_perm) - y))
            bumps.append(err - baseline)
        importances[j] = max(0.0, float(np.mean(bumps)))
    return "knn", params, importances


def _predict_knn(params: dict, Xs: np.ndarray) -> np.ndarray:
    return _knn_predict_matrix(np.array(params["train"]), np.array(params["targets"]), params["k"], Xs)


_FITTERS = {"linear_ridge": _fit_ridge, "decision_tree": _fit_tree, "knn": _fit_knn}
_PREDICTORS = {"ridge": _predict_ridge, "tree": _predict_tree, "knn": _predict_knn}


@dataclass
class MetaLearner:
    """A fitted per-property estimator with standardized inputs."""

    property: str
    method: str
    kind: str
    params: dict
    mean: np.ndarray
    std: np.ndarray
    feature_names: list[str]
    schema_hash: str
    importances: dict[str, float] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def predict(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != len(self.feature_names):
            raise ValueError(
                f"row width {X.shape[1]} does not match schema width {len(self.feature_names)}"
            )
        Xs = (X - self.mean) / self.std
        if self.kind == "constant":
            return np.full(len(Xs), self.params["value"])
        return _PREDICTORS[self.kind](self.params, Xs)

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "method": self.method,
            "kind": self.kind,
            "params": self.params,
            "standardization": {"mean": self.mean.tolist(), "std": self.std.tolist()},
            "feature_names": self.feature_names,
            "schema_hash": self.schema_hash,
            "importances": self.importances,
            "warnings": self.warnings,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "MetaLearner":
        return cls(
            property=payload["property"],
            method=payload["method"],
            kind=payload["kind"],
            params=payload["params"],
            mean=np.array(payload["standardization"]["mean"]),
            std=np.array(payload["standardization"]["std"]),
            feature_names=list(payload["feature_names"]),
            schema_hash=payload["schema_hash"],
            importances=dict(payload["importances"]),
            warnings=list(payload["warnings"]),
        )


def fit_rows(
    X: np.ndarray,
    y: np.ndarray,
    property: str,
    method: str,
    feature_names: list[str],
    config: LearnerConfig | None = None,
    compute_importances: bool = True,
) -> MetaLearner:
    """Fit one regressor on (row, target) pairs with stored standardization.

    ``compute_importances=False`` skips permutation importances (the only
    costly kind), for throwaway fits inside cross-validation loops.
    """
    cfg = config or LearnerConfig()
    if method not in METHODS:
        raise ValueError(f"unknown method: {method!r}")
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(X) != len(y) or len(y) < 2:
        raise InsufficientDataError("need at least 2 aligned rows and targets")
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0.0] = 1.0
    Xs = (X - mean) / std
    digest = metafeatures.schema_hash(feature_names)

    if np.ptp(y) == 0.0:
        # Degenerate target: every model/dataset pair scored identically.
        n = len(feature_names)
        return MetaLearner(
            property=property,
            method=method,
            kind="constant",
            params={"value": float(y[0])},
            mean=mean,
            std=std,
            feature_names=list(feature_names),
            schema_hash=digest,
            importances={name: 1.0 / n for name in feature_names},
            warnings=["degenerate_constant_target"],
        )

    rng = np.random.default_rng(cfg.seed) if compute_importances else None
    kind, params, raw_importances = _FITTERS[method](Xs, y, cfg, rng)
    total = raw_importances.sum()
    if total > 0:
        normalized = raw_importances / total
    else:
        normalized = np.full(len(feature_names), 1.0 / len(feature_names))
    return MetaLearner(
        property=property,
        method=method,
        kind=kind,
        params=params,
        mean=mean,
        std=std,
        feature_names=list(feature_names),
        schema_hash=digest,
        importances={name: float(v) for name, v in zip(feature_names, normalized)},
    )


@dataclass
class CVReport:
    """Cross-validated estimation error per method, and the winner."""

    property: str
    n_folds: int
    errors: dict[str, float]
    chosen: str

    def to_dict(self) -> dict:
        return {
            "property": self.property,
            "n_folds": self.n_folds,
            "errors": self.errors,
            "chosen": self.chosen,
        }


def select_best_rows(
    X: np.ndarray,
    y: np.ndarray,
    groups,
    property: str,
    feature_names: list[str],
    methods=METHODS,
    n_folds: int = 5,
    seed: int = 42,
    config: LearnerConfig | None = None,
) -> tuple[MetaLearner, CVReport, np.ndarray]:
    """Pick the method with the lowest grouped-CV absolute error.

    Per method: mean over folds of the mean |target - estimate| on held-out
    rows; ties resolve in METHODS order. The winner is refitted on all rows.
    Also returns the winner's out-of-fold estimates, aligned with the rows.
    """
    cfg = config or LearnerConfig(seed=seed)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    folds = grouped_folds(groups, n_folds, seed)
    errors: dict[str, float] = {}
    oof: dict[str, np.ndarray] = {}
    for method in methods:
        per_fold = []
        estimates = np.full(len(y), np.nan)
        for fold in folds:
            val = np.array(fold, dtype=int)
            train = np.setdiff1d(np.arange(len(y)), val)
            learner = fit_rows(
                X[train], y[train], property, method, feature_names, cfg,
                compute_importances=False,
            )
            pred = learner.predict(X[val])
            estimates[val] = pred
            per_fold.append(float(np.mean(np.abs(y[val] - pred))))
        errors[method] = float(np.mean(per_fold))
        oof[method] = estimates
    chosen = min(methods, key=lambda m: (errors[m], methods.index(m)))
    winner = fit_rows(X, y, property, chosen, feature_names, cfg)
    report = CVReport(property=property, n_folds=n_folds, errors=errors, chosen=chosen)
    return winner, report, oof[chosen]


# --- assembly from a property database -----------------------------------


@dataclass
class MetaRows:
    """Meta-learning rows for one property: features, targets, groups, keys."""

    X: np.ndarray
    y: np.ndarray
    groups: list[str]
    keys: list[tuple[str, str]]  # (dataset, model)
    feature_names: list[str]


def assemble_rows(
    db: PropertyDatabase,
    dataset_features: dict[str, np.ndarray],
    property: str,
    pool_keys,
    targets: dict[tuple[str, str], float] | None = None,
) -> MetaRows:
    """Build (row, index-score) pairs for one property from the database.

    ``dataset_features`` maps dataset name to its 10-feature vector. Rows
    exist only for (dataset, model) pairs with an ok record; explicit
    ``targets`` override the index scores (used for compound targets).
    """
    names = metafeatures.feature_names()
    rows, ys, groups, keys = [], [], [], []
    for dataset in db.datasets():
        if dataset not in dataset_features:
            continue
        if targets is None:
            try:
                scores = db.index_scores(dataset, property)
            except Exception:
                continue
        else:
            scores = {m: targets[(dataset, m)] for m in pool_keys if (dataset, m) in targets}
        group = db.group_of(dataset)
        for model in pool_keys:
            if model not in scores:
                continue
            _, model_vec = forecasters.model_meta_features(model)
            rows.append(np.concatenate([dataset_features[dataset], model_vec]))
            ys.append(scores[model])
            groups.append(group)
            keys.append((dataset, model))
    if not rows:
        raise InsufficientDataError(f"no usable rows for property {property!r}")
    return MetaRows(np.array(rows), np.array(ys), groups, keys, names)


def train_metalearner(
    db: PropertyDatabase,
    dataset_features: dict[str, np.ndarray],
    property: str,
    method: str,
    pool_keys,
    config: LearnerConfig | None = None,
) -> MetaLearner:
    """Fit one property estimator straight from the database."""
    meta = assemble_rows(db, dataset_features, property, pool_keys)
    if len(set(meta.groups)) < 2:
        raise InsufficientDataError(f"property {property!r}: need >= 2 groups of targets")
    return fit_rows(meta.X, meta.y, property, method, meta.feature_names, config)


def select_best(
    db: PropertyDatabase,
    dataset_features: dict[str, np.ndarray],
    property: str,
    pool_keys,
    methods=METHODS,
    n_folds: int = 5,
    seed: int = 42,
    config: LearnerConfig | None = None,
) -> tuple[MetaLearner, CVReport]:
    meta = assemble_rows(db, dataset_features, property, pool_keys)
    winner, report, _ = select_best_rows(
        meta.X, meta.y, meta.groups, property, meta.feature_names, methods, n_folds, seed, config
    )
    return winner, report


def compound_targets(db: PropertyDatabase, weights) -> dict[tuple[str, str], float]:
    """True compound scores per (dataset, model) for direct meta-learning."""
    out: dict[tuple[str, str], float] = {}
    for dataset in db.datasets():
        per_model: dict[str, dict[str, float]] = {}
        for prop in PROPERTY_NAMES:
            try:
                scores = db.index_scores(dataset, prop)
            except Exception:
                continue
            for model, value in scores.items():
                per_model.setdefault(model, {})[prop] = value
        for model, estimates in per_model.items():
            out[(dataset, model)] = compound(estimates, weights)
    return out


def train_direct_compound(
    db: PropertyDatabase,
    dataset_features: dict[str, np.ndarray],
    weights,
    pool_keys,
    methods=METHODS,
    n_folds: int = 5,
    seed: int = 42,
    config: LearnerConfig | None = None,
) -> tuple[MetaLearner, CVReport]:
    """One regressor straight onto compound scores (comparison mode only)."""
    targets = compound_targets(db, weights)
    meta = assemble_rows(db, dataset_features, "compound", pool_keys, targets=targets)
    winner, report, _ = select_best_rows(
        meta.X, meta.y, meta.groups, "compound", meta.feature_names, methods, n_folds, seed, config
    )
    return winner, report


# --- bundle persistence ---------------------------------------------------


@dataclass
class LearnerBundle:
    """Everything needed to answer queries: per-property learners + direct."""

    learners: dict[str, MetaLearner]
    direct: MetaLearner | None
    feature_names: list[str]
    schema_hash: str
    seed: int
    cv_reports: dict[str, dict]

    def save(self, path: str | Path) -> None:
        payload = {
            "schema": self.feature_names,
            "schema_hash": self.schema_hash,
            "seed": self.seed,
            "cv_reports": self.cv_reports,
            "learners": {p: ml.to_dict() for p, ml in self.learners.items()},
            "direct": self.direct.to_dict() if self.direct else None,
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True, indent=1), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "LearnerBundle":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            learners={p: MetaLearner.from_dict(d) for p, d in payload["learners"].items()},
            direct=MetaLearner.from_dict(payload["direct"]) if payload["direct"] else None,
            feature_names=list(payload["schema"]),
            schema_hash=payload["schema_hash"],
            seed=payload["seed"],
            cv_reports=payload["cv_reports"],
        )
