"""Command-line entry point.

Subcommands: profile, train, recommend, evaluate, serve. Exit codes are a
stable contract: 0 ok, 2 input error, 3 insufficient data, 4 schema
mismatch, 1 unexpected failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path

import numpy as np

from . import evaluation, forecasters, metafeatures, metalearn, synthetic
from .data import IngestError, load_dataset
from .metalearn import InsufficientDataError, LearnerBundle, LearnerConfig
from .propertydb import PROPERTY_NAMES, PropertyDatabase
from .recommend import SchemaMismatchError, WeightVector, default_weights, recommend

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INPUT = 2
EXIT_INSUFFICIENT = 3
EXIT_SCHEMA = 4


def _load_manifest_dir(path: Path) -> list:
    if path.is_file():
        return [load_dataset(path)]
    if not path.is_dir():
        raise IngestError(f"no such file or directory: {path}")
    manifests = sorted(path.glob("*.json"))
    if not manifests:
        raise IngestError(f"no manifests (*.json) found in {path}")
    return [load_dataset(m) for m in manifests]


def _resolve_datasets(args) -> list:
    if getattr(args, "demo", False):
        return synthetic.demo_study_datasets(seed=args.seed)
    if getattr(args, "data", None) is None:
        raise IngestError("either --data or --demo is required")
    return _load_manifest_dir(Path(args.data))


def parse_weights(spec: str | None) -> WeightVector:
    """Parse `name=value,...` pairs or a JSON file path; defaults otherwise."""
    if not spec:
        return default_weights()
    path = Path(spec)
    if path.suffix == ".json" and path.exists():
        return WeightVector(json.loads(path.read_text(encoding="utf-8")))
    weights = {}
    for pair in spec.split(","):
        if "=" not in pair:
            raise IngestError(f"bad weight override {pair!r}, expected name=value")
        name, value = pair.split("=", 1)
        try:
            weights[name.strip()] = float(value)
        except ValueError as e:
            raise IngestError(f"bad weight value in {pair!r}: {e}") from e
    try:
        return WeightVector(weights)
    except ValueError as e:
        raise IngestError(str(e)) from e


def _save_dataset_features(path: Path, features: dict[str, np.ndarray], groups: dict[str, str]):
    payload = {
        "schema": list(metafeatures.DATASET_FEATURE_NAMES),
        "datasets": {
            name: {"group": groups[name], "features": [float(v) for v in vec]}
            for name, vec in features.items()
        },
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _load_dataset_features(path: Path) -> dict[str, np.ndarray]:
    payload = json.loads(path.read_text(encoding="utf-8"))
    return {name: np.array(entry["features"]) for name, entry in payload["datasets"].items()}


def cmd_profile(args) -> int:
    datasets = _resolve_datasets(args)
    db, features = evaluation.profile_all(
        datasets, power_rating_w=args.power_rating_w, repetitions=args.repetitions
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    db.save(out)
    metafeatures.save_schema(out.parent / "features.json")
    _save_dataset_features(
        out.parent / "dataset_features.json", features, {d.name: d.group for d in datasets}
    )
    failed = [r for r in db.records() if r.status == "failed"]
    if failed:
        pairs = sorted({(r.dataset, r.model) for r in failed})
        print(f"warning: {len(pairs)} pairs failed: {pairs[:5]}...", file=sys.stderr)
    print(f"wrote {len(db)} records for {len(datasets)} datasets to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_train(args) -> int:
    db = PropertyDatabase.load(args.db)
    features_path = Path(args.features) if args.features else Path(args.db).parent / "dataset_features.json"
    if not features_path.exists():
        raise IngestError(f"dataset features file not found: {features_path}")
    dataset_features = _load_dataset_features(features_path)
    config = LearnerConfig(seed=args.seed)
    weights = parse_weights(args.weights)

    learners = {}
    reports = {}
    for prop in PROPERTY_NAMES:
        winner, report = metalearn.select_best(
            db, dataset_features, prop, forecasters.MODEL_KEYS,
            n_folds=args.folds, seed=args.seed, config=config,
        )
        learners[prop] = winner
        reports[prop] = report.to_dict()
    direct, direct_report = metalearn.train_direct_compound(
        db, dataset_features, weights, forecasters.MODEL_KEYS,
        n_folds=args.folds, seed=args.seed, config=config,
    )
    reports["compound_direct"] = direct_report.to_dict()

    bundle = LearnerBundle(
        learners=learners,
        direct=direct,
        feature_names=metafeatures.feature_names(),
        schema_hash=metafeatures.schema_hash(),
        seed=args.seed,
        cv_reports=reports,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    bundle.save(out)
    print(f"wrote bundle with {len(learners)} property learners to {out}", file=sys.stderr)
    return EXIT_OK


def cmd_recommend(args) -> int:
    dataset = load_dataset(args.manifest)
    bundle = LearnerBundle.load(args.bundle)
    weights = parse_weights(args.weights)
    learners = dict(bundle.learners)
    if bundle.direct is not None:
        learners["compound"] = bundle.direct
    result = recommend(dataset, learners, weights, mode=args.mode, k=args.k)
    print(json.dumps(result.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK


def cmd_evaluate(args) -> int:
    datasets = _resolve_datasets(args)
    result = evaluation.run_study(
        datasets,
        weights=parse_weights(args.weights),
        n_folds=args.folds,
        seed=args.seed,
        power_rating_w=args.power_rating_w,
        repetitions=args.repetitions,
        threshold=args.threshold,
        config=LearnerConfig(seed=args.seed),
    )
    paths = evaluation.write_artifacts(result, args.out)
    for p in paths:
        print(f"wrote {p}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ServiceState, create_app

    datasets = {d.name: d for d in _resolve_datasets(args)}
    state = ServiceState(
        db=PropertyDatabase.load(args.db),
        bundle=LearnerBundle.load(args.bundle),
        datasets=datasets,
    )
    ui_dir = Path(args.ui) if args.ui else None
    if ui_dir is not None and not ui_dir.is_dir():
        print(
            f"warning: UI assets directory {ui_dir} not found, serving API only",
            file=sys.stderr,
        )
        ui_dir = None
    app = create_app(state, static_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelrank",
        description="Profile, meta-learn, and recommend forecasting models "
        "under weighted error/complexity/resource trade-offs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, folds=False):
        p.add_argument("--seed", type=int, default=42)
        if folds:
            p.add_argument("--folds", type=int, default=5)

    p = sub.add_parser("profile", help="measure all dataset/model pairs into a property DB")
    p.add_argument("--data", help="manifest file or directory of manifests")
    p.add_argument("--demo", action="store_true", help="use the bundled synthetic corpus")
    p.add_argument("--out", required=True, help="output JSONL database path")
    p.add_argument("--power-rating-w", type=float, default=65.0)
    p.add_argument("--repetitions", type=int, default=3)
    common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("train", help="select and fit per-property meta-learners")
    p.add_argument("--db", required=True)
    p.add_argument("--features", help="dataset features sidecar (default: next to --db)")
    p.add_argument("--out", required=True, help="output bundle JSON path")
    p.add_argument("--weights", help="weights for the direct-compound learner")
    common(p, folds=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("recommend", help="rank candidates for one dataset")
    p.add_argument("--manifest", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--weights", help="name=value,... overrides or a JSON file")
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mode", choices=["compositional", "direct"], default="compositional")
    common(p)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("evaluate", help="run the full study and write reports")
    p.add_argument("--data", help="directory of manifests")
    p.add_argument("--demo", action="store_true", help="use the bundled synthetic corpus")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--weights")
    p.add_argument("--power-rating-w", type=float, default=65.0)
    p.add_argument("--repetitions", type=int, default=3)
    p.add_argument("--threshold", type=float, default=0.1)
    common(p, folds=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("serve", help="serve the HTTP API and UI")
    p.add_argument("--db", required=True)
    p.add_argument("--bundle", required=True)
    p.add_argument("--data", help="manifest directory for the dataset registry")
    p.add_argument("--demo", action="store_true")
    p.add_argument("--ui", default="frontend/dist", help="static UI assets directory")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    common(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (IngestError, FileNotFoundError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except InsufficientDataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except SchemaMismatchError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception:
        traceback.print_exc()
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
