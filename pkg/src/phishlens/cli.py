"""Operator command line: ingest, extract, train, evaluate, predict, serve, history.

Exit codes are a stable scripting contract: 0 success (or safe verdict),
10 deceptive verdict, 2 usage or data errors, 1 internal errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from datetime import date
from pathlib import Path

from . import config
from .dataset import FeatureRow, ingest_feed, load_matrix, save_matrix
from .errors import PhishlensError
from .history import HistoryStore
from .ml import (
    DEFAULT_GRIDS,
    TrainConfig,
    evaluate,
    grid_search,
    load_model,
    predict,
    save_model,
    train,
)
from .pipeline import ExtractConfig, Extractor, extract_all
from .service import ServiceConfig, serve

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_DECEPTIVE = 10


def _load_config_file() -> dict:
    """PHISHLENS_CONFIG points at a JSON file whose keys mirror the flags."""
    path = os.environ.get("PHISHLENS_CONFIG")
    if not path:
        return {}
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise PhishlensError(f"cannot read config file {path}: {exc}") from exc


def _extract_config(args) -> ExtractConfig:
    return ExtractConfig(
        offline=args.offline,
        evidence_dir=args.evidence_dir,
        whois_dir=args.whois_dir,
        rank_snapshot=args.rank_snapshot,
        shortener_file=args.shortener_file,
        psl_file=args.psl_file,
        cache_dir=args.cache_dir,
        now=date.fromisoformat(args.now) if args.now else None,
        parallelism=args.parallel,
        web_traffic_literal=args.web_traffic_literal,
    )


def _add_extract_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--offline", action="store_true",
                   help="replay stored snapshots instead of fetching")
    p.add_argument("--evidence-dir", default=None, help="snapshot fixture directory")
    p.add_argument("--whois-dir", default=None, help="WHOIS fixture directory")
    p.add_argument("--rank-snapshot", default=None, help="rank snapshot CSV")
    p.add_argument("--shortener-file", default=None)
    p.add_argument("--psl-file", default=None, help="public-suffix snapshot override")
    p.add_argument("--cache-dir", default=None, help="WHOIS lookup cache directory")
    p.add_argument("--now", default=None, help="pin the clock (YYYY-MM-DD) for age rules")
    p.add_argument("--parallel", type=int, default=4)
    p.add_argument("--web-traffic-literal", action="store_true",
                   help="use the literal (inverted) popularity inequality")


def build_parser(config_defaults: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phishlens",
                                     description="Phishing URL detection toolkit")
    subcommands = parser.add_subparsers(dest="command", required=True)
    created: list[argparse.ArgumentParser] = []

    class _Sub:
        def add_parser(self, *args, **kwargs):
            p = subcommands.add_parser(*args, **kwargs)
            created.append(p)
            return p

    sub = _Sub()

    p = sub.add_parser("ingest", help="read a URL feed into a labeled list")
    p.add_argument("--feed", required=True)
    p.add_argument("--label", required=True, choices=["phish", "legit"])
    p.add_argument("--out", required=True)
    p.add_argument("--limit", type=int, default=None)

    p = sub.add_parser("extract", help="extract the 23-feature matrix")
    p.add_argument("--in", dest="input", required=True, help="labeled URL list (from ingest)")
    p.add_argument("--out", required=True, help="matrix CSV path")
    _add_extract_flags(p)

    p = sub.add_parser("train", help="grid search + 10-fold CV, write best model")
    p.add_argument("--matrix", required=True)
    p.add_argument("--model-kind", required=True,
                   choices=["naive_bayes", "logistic", "random_forest"])
    p.add_argument("--grid", default="default", help='"default" or a JSON grid file')
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--out", required=True, help="model file path")
    p.add_argument("--report", default=None, help="grid report CSV path")

    p = sub.add_parser("evaluate", help="metrics of a model over a matrix")
    p.add_argument("--matrix", required=True)
    p.add_argument("--model", required=True)

    p = sub.add_parser("predict", help="verdict for one URL")
    p.add_argument("--url", required=True)
    p.add_argument("--model", required=True)
    _add_extract_flags(p)

    p = sub.add_parser("serve", help="run the local verdict service")
    p.add_argument("--model", required=True)
    p.add_argument("--port", type=int, default=config.DEFAULT_SERVICE_PORT)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--history-dir", default="history")
    p.add_argument("--allow-origin", action="append", default=[],
                   help="CORS allowlist entry (repeatable)")
    p.add_argument("--deadline", type=float, default=30.0,
                   help="per-predict extraction deadline in seconds")
    _add_extract_flags(p)

    p = sub.add_parser("history", help="pretty-print stored history entries")
    p.add_argument("--history-dir", default="history")
    p.add_argument("--limit", type=int, default=None)

    if config_defaults:
        # subparsers parse into a fresh namespace, so config-file defaults
        # must be installed on every subparser, not just the root
        for p in created:
            known = {a.dest for a in p._actions}
            p.set_defaults(**{k: v for k, v in config_defaults.items() if k in known})
    return parser


def cmd_ingest(args) -> int:
    label = 1 if args.label == "phish" else 0
    items = ingest_feed(args.feed, label=label, limit=args.limit)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["url", "label", "source"])
        for item in items:
            writer.writerow([item.url, item.label, item.source])
    print(f"ingested {len(items)} urls from {args.feed}")
    return EXIT_OK


def _read_labeled(path: str):
    from .dataset import LabeledUrl
    from .errors import FileUnreadable, NoUrlsFound

    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                raise NoUrlsFound(f"{path} is empty")
            out = []
            for row in reader:
                if not row:
                    continue
                out.append(LabeledUrl(url=row[0], label=int(row[1]),
                                      source=row[2] if len(row) > 2 else ""))
            return out
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc


def cmd_extract(args) -> int:
    if args.offline and (not args.evidence_dir or not Path(args.evidence_dir).is_dir()):
        print("error: --offline requires an existing --evidence-dir", file=sys.stderr)
        return EXIT_USAGE
    items = _read_labeled(args.input)
    result = extract_all(items, _extract_config(args))
    save_matrix(result.rows, args.out)
    print(result.report.summary())
    return EXIT_OK


def _grid_for(args) -> dict:
    if args.grid == "default":
        return DEFAULT_GRIDS[args.model_kind]
    payload = json.loads(Path(args.grid).read_text(encoding="utf-8"))
    # JSON has no None; accept null entries for "unbounded"
    return {k: [None if v is None else v for v in vs] for k, vs in payload.items()}


_TABLE2_COLUMNS = ["Classifier", "Accuracy", "Precision", "Recall", "F1-score"]


def cmd_train(args) -> int:
    rows = load_matrix(args.matrix)
    result = grid_search(rows, args.model_kind, grid=_grid_for(args),
                         k=args.folds, seed=args.seed)
    model = train(rows, result.best_cfg)
    save_model(model, args.out)

    header = _TABLE2_COLUMNS + [
        "Params", "Accuracy_Std", "Precision_Std", "Recall_Std", "F1_Std",
        "Macro_Precision", "Macro_Recall", "Macro_F1",
    ]
    table_rows = []
    for point in result.table:
        table_rows.append([
            args.model_kind,
            f"{point.mean('accuracy'):.4f}",
            f"{point.mean('precision'):.4f}",
            f"{point.mean('recall'):.4f}",
            f"{point.mean('f1'):.4f}",
            json.dumps(point.params, sort_keys=True),
            f"{point.std('accuracy'):.4f}",
            f"{point.std('precision'):.4f}",
            f"{point.std('recall'):.4f}",
            f"{point.std('f1'):.4f}",
            f"{point.mean('macro_precision'):.4f}",
            f"{point.mean('macro_recall'):.4f}",
            f"{point.mean('macro_f1'):.4f}",
        ])
    if args.report:
        with open(args.report, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(table_rows)

    print("\t".join(_TABLE2_COLUMNS + ["Params"]))
    for row in table_rows:
        print("\t".join(row[:5] + [row[5]]))
    tm = model.metadata["train_metrics"]
    print(f"best params: {json.dumps(result.best_cfg.hyperparams, sort_keys=True)}")
    print(f"train metrics: accuracy={tm['accuracy']:.4f} precision={tm['precision']:.4f} "
          f"recall={tm['recall']:.4f} f1={tm['f1']:.4f}")
    print(f"model written to {args.out}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    rows = load_matrix(args.matrix)
    model = load_model(args.model)
    m = evaluate(model, rows)
    print(f"accuracy={m.accuracy:.4f} precision={m.precision:.4f} "
          f"recall={m.recall:.4f} f1={m.f1:.4f}")
    print(f"confusion: tp={m.tp} fp={m.fp} tn={m.tn} fn={m.fn}")
    print(f"macro: precision={m.macro_precision:.4f} recall={m.macro_recall:.4f} "
          f"f1={m.macro_f1:.4f}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model = load_model(args.model)
    extractor = Extractor(_extract_config(args))
    from .urls import parse_url

    parse_url(args.url, extractor.psl)  # malformed input is a usage error
    row = extractor.extract_row(args.url)
    cls, score = predict(model, row)
    verdict = "deceptive" if cls == 1 else "safe"
    print(f"{args.url}\t{verdict}\t{score:.4f}")
    return EXIT_DECEPTIVE if cls == 1 else EXIT_OK


def cmd_serve(args) -> int:
    cfg = ServiceConfig(
        model_path=args.model,
        history_dir=args.history_dir,
        host=args.host,
        port=args.port,
        allow_origins=args.allow_origin,
        extract=_extract_config(args),
        predict_deadline_s=args.deadline,
    )
    serve(cfg)
    return EXIT_OK


def cmd_history(args) -> int:
    store = HistoryStore(args.history_dir)
    entries = store.read(limit=args.limit)
    if not entries:
        print("history is empty")
        return EXIT_OK
    for entry in entries:
        verdict = entry.get("verdict", {})
        print(f"{entry.get('stored_at', 0):.3f}  {entry.get('user_action', '?'):8s} "
              f"{verdict.get('class', '?'):9s} {verdict.get('score', '')} "
              f"{verdict.get('url', verdict.get('verdict_id', ''))}")
    return EXIT_OK


_COMMANDS = {
    "ingest": cmd_ingest,
    "extract": cmd_extract,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
    "serve": cmd_serve,
    "history": cmd_history,
}


def main(argv: list[str] | None = None) -> int:
    try:
        defaults = _load_config_file()
    except PhishlensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    parser = build_parser({k.replace("-", "_"): v for k, v in defaults.items()})
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except PhishlensError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # internal failure, distinct exit code
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
