"""Command line entry points: serve, import, export, train, evaluate,
predict, report, create-account."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analytics import (NaiveBayesModel, cross_validate,
                        derive_reoffend_records, derive_residency_records,
                        import_dataset_csv, likelihood_report, load_model,
                        nb_posterior, offender_task, residency_task,
                        train_decision_tree, train_naive_bayes, tree_predict)
from .casework import CaseworkService
from .errors import DomainError, InsufficientClasses
from .health import HealthService
from .opendata import OpenDataService
from .registry import RegistryService
from .service.auth import ROLES, AuthService
from .service.config import ServiceConfig, load_zone_map
from .store import Store


def _open_store(config: ServiceConfig) -> Store:
    zone_map = load_zone_map(config.zones_file)
    return Store(path=config.log_path(), zone_map=zone_map,
                 barangay_name=config.barangay_name)


def _records_for(args, store: Store):
    """Training records either from a dataset CSV or derived from the blotter."""
    if getattr(args, "dataset", None):
        return import_dataset_csv(Path(args.dataset).read_bytes())
    if args.task == "reoffend":
        records = derive_reoffend_records(store.state)
        task = offender_task()
    else:
        records = derive_residency_records(store.state, store.now().date())
        task = residency_task()
    if len({r.label for r in records}) < 2:
        raise InsufficientClasses(
            f"task {args.task}: need both classes present in the data")
    return records, task


def cmd_serve(args, config: ServiceConfig) -> int:
    import uvicorn

    from .service.app import create_app

    logging.basicConfig(level=logging.INFO, format="%(name)s %(message)s")
    app = create_app(config=config)
    uvicorn.run(app, host=config.bind_host, port=config.bind_port,
                log_level="info")
    return 0


def cmd_import(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        if args.residents:
            loaded = RegistryService(store).import_csv(Path(args.residents).read_bytes())
            print(f"imported {len(loaded)} residents")
        if args.blotter:
            loaded = CaseworkService(store).import_csv(Path(args.blotter).read_bytes())
            print(f"imported {len(loaded)} blotter cases")
        if not args.residents and not args.blotter:
            print("nothing to import: pass --residents and/or --blotter",
                  file=sys.stderr)
            return 2
    finally:
        store.close()
    return 0


def _write_out(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
        print(f"wrote {out}")
    else:
        sys.stdout.write(data.decode("utf-8"))


def cmd_export(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        if args.dataset:
            data = OpenDataService(store).export_csv(args.dataset)
        elif args.residents:
            data = RegistryService(store).export_csv()
        elif args.blotter:
            data = CaseworkService(store).export_csv()
        elif args.health:
            data = HealthService(store).export_csv()
        else:
            print("pass --dataset NAME, --residents, --blotter, or --health",
                  file=sys.stderr)
            return 2
        _write_out(data, args.out)
    finally:
        store.close()
    return 0


def cmd_train(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        records, task = _records_for(args, store)
        if args.learner == "nb":
            model = train_naive_bayes(records, task, alpha=args.alpha)
        else:
            model = train_decision_tree(records, task, max_depth=args.max_depth,
                                        min_samples_leaf=args.min_samples_leaf)
        doc = model.to_payload()
        blob = (json.dumps(doc, indent=2) + "\n").encode("utf-8")
        _write_out(blob, args.out)
        print(f"trained {args.learner} on {len(records)} records "
              f"({len(task.classes)} classes)", file=sys.stderr)
    finally:
        store.close()
    return 0


def cmd_evaluate(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        records, task = _records_for(args, store)
        params = {"alpha": args.alpha} if args.learner == "nb" else \
            {"max_depth": args.max_depth, "min_samples_leaf": args.min_samples_leaf}
        report = cross_validate(records, task, learner=args.learner, k=args.k,
                                seed=args.seed, **params)
        print(f"{args.learner} {args.k}-fold on {report.n} records")
        print(f"  per-fold accuracy: "
              + ", ".join(f"{a:.3f}" for a in report.fold_accuracies))
        print(f"  mean accuracy:    {report.mean_accuracy:.4f}")
        print(f"  overall accuracy: {report.overall_accuracy:.4f}")
        print("  class      precision  recall")
        for cls in task.classes:
            print(f"  {cls:<10} {report.precision[cls]:>9.3f}  {report.recall[cls]:>6.3f}")
        print("  confusion (actual -> predicted):")
        for actual in task.classes:
            row = "  ".join(f"{report.confusion[actual][p]:>4d}"
                            for p in task.classes)
            print(f"    {actual:<10} {row}")
        if args.json:
            print(json.dumps(report.to_payload(), indent=2))
    finally:
        store.close()
    return 0


def cmd_predict(args, config: ServiceConfig) -> int:
    doc = json.loads(Path(args.model).read_text(encoding="utf-8"))
    model = load_model(doc)
    features = {}
    for pair in args.features or []:
        key, _, value = pair.partition("=")
        if not value:
            print(f"features must be key=value, got {pair!r}", file=sys.stderr)
            return 2
        features[key] = value
    if isinstance(model, NaiveBayesModel):
        posterior = nb_posterior(model, features)
        best = max(posterior.values())
        predicted = next(c for c in model.task.classes if posterior[c] == best)
        print(json.dumps({"prediction": predicted, "posterior": posterior},
                         indent=2))
    else:
        predicted, support = tree_predict(model, features)
        print(json.dumps({"prediction": predicted, "leaf_support": support},
                         indent=2))
    return 0


def cmd_report(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        report = likelihood_report(store.state, args.task,
                                   today=store.now().date(), alpha=args.alpha)
        json.dump(report, sys.stdout, indent=2)
        print()
    finally:
        store.close()
    return 0


def cmd_create_account(args, config: ServiceConfig) -> int:
    store = _open_store(config)
    try:
        AuthService(store).create_account(args.username, args.password, args.role)
        print(f"created {args.role} account {args.username!r}")
    finally:
        store.close()
    return 0


def _add_learner_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--task", default="reoffend",
                   choices=["reoffend", "offend_by_residency"])
    p.add_argument("--dataset", help="train from a labeled CSV instead of the blotter")
    p.add_argument("--learner", default="nb", choices=["nb", "tree"])
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--max-depth", type=int, default=8)
    p.add_argument("--min-samples-leaf", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bgis",
        description="Barangay records, hotspot mapping, crime analytics, "
                    "SMS advisories and open data.")
    parser.add_argument("--data-dir", help="state directory (env DATA_DIR)")
    parser.add_argument("--zones", help="zone polygon JSON file (env ZONES_FILE)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--bind", help="host:port (env BIND_ADDR)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("import", help="bulk-load CSV files")
    p.add_argument("--residents", help="resident CSV file")
    p.add_argument("--blotter", help="blotter CSV file")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("export", help="write a CSV export")
    p.add_argument("--dataset", help="open-data dataset id (e.g. crime_status)")
    p.add_argument("--residents", action="store_true", help="full resident CSV")
    p.add_argument("--blotter", action="store_true", help="full blotter CSV")
    p.add_argument("--health", action="store_true",
                   help="de-identified health case rows")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("train", help="train a model, print/write its JSON")
    _add_learner_args(p)
    p.add_argument("--out", help="model JSON file (default stdout)")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="k-fold cross-validated evaluation")
    _add_learner_args(p)
    p.add_argument("--k", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="also dump the report JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="classify a factor profile with a model")
    p.add_argument("--model", required=True, help="model JSON from `bgis train`")
    p.add_argument("features", nargs="*", metavar="key=value",
                   help="feature values, e.g. employment=no age_band=18-25")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="likelihood report for officials")
    p.add_argument("--task", default="reoffend",
                   choices=["reoffend", "offend_by_residency"])
    p.add_argument("--alpha", type=float, default=1.0)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("create-account", help="create a console account")
    p.add_argument("--username", required=True)
    p.add_argument("--password", required=True)
    p.add_argument("--role", required=True, choices=list(ROLES))
    p.set_defaults(func=cmd_create_account)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {}
    if args.data_dir:
        overrides["data_dir"] = Path(args.data_dir)
    if args.zones:
        overrides["zones_file"] = Path(args.zones)
    if getattr(args, "bind", None):
        host, _, port = args.bind.rpartition(":")
        overrides["bind_host"], overrides["bind_port"] = host, int(port)
    config = ServiceConfig.from_env(**overrides)
    try:
        return args.func(args, config)
    except DomainError as exc:
        print(f"error [{exc.code}]: {exc.message}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
