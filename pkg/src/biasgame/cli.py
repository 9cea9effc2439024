"""Command line entry points.

simulate  - replay the annotation study with synthetic players and write
            dataset.jsonl, report.json, and alpha_histogram.csv
serve     - run the REST service (optionally on a durable event log)
import-baseline / export - curator conveniences over a durable log
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .content.stopwords import DEFAULT_STOPWORDS, load_stopwords
from .engine.economy import EconomyConfig, load_economy_config
from .metrics.report import write_alpha_histogram
from .service.events import FileEventLog
from .service.platform import Platform
from .simulator.annotator import mixed_population, uniform_population
from .simulator.pool import parse_pool_file
from .simulator.study import StudyConfig, run_study


def _add_simulate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("simulate", help="run the synthetic annotation study")
    p.add_argument("--players", type=int, default=100)
    p.add_argument("--rounds", type=int, default=3, help="rounds per player")
    p.add_argument("--per-round", type=int, default=10, dest="per_round")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--accuracy", type=float, default=1.0,
                   help="population sentence accuracy (1.0 = perfect annotators)")
    p.add_argument("--accuracy-spread", type=float, default=0.0,
                   help="spread accuracies evenly across [A-s, A+s]")
    p.add_argument("--baseline-size", type=int, default=370)
    p.add_argument("--new-size", type=int, default=150)
    p.add_argument("--pool", type=Path, default=None,
                   help="pool CSV (baseline columns; rows with empty label become new sentences)")
    p.add_argument("--gold", type=Path, default=None,
                   help="JSONL of {text, label, biased_words} gold for new sentences")
    p.add_argument("--out", type=Path, default=Path("study-out"))
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--economy", type=Path, default=None, help="economy config file")
    p.add_argument("--log", type=Path, default=None, help="write the event log to this file")


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = StudyConfig(
        players=args.players,
        rounds_per_player=args.rounds,
        sentences_per_round=args.per_round,
        baseline_size=args.baseline_size,
        new_size=args.new_size,
        seed=args.seed,
        bootstrap_b=args.bootstrap,
    )
    if args.accuracy_spread > 0:
        population = mixed_population(args.players, args.accuracy, args.accuracy_spread, seed=args.seed)
    else:
        population = uniform_population(args.players, args.accuracy, seed=args.seed)

    pool_csv = new_specs = None
    if args.pool is not None:
        pool_csv, new_specs = parse_pool_file(args.pool.read_text("utf-8"))
        config = StudyConfig(
            players=args.players, rounds_per_player=args.rounds,
            sentences_per_round=args.per_round,
            baseline_size=max(0, pool_csv.count("\n") - 1),
            new_size=len(new_specs), seed=args.seed, bootstrap_b=args.bootstrap,
        )
    gold_file = None
    if args.gold is not None:
        gold_file = {}
        for line in args.gold.read_text("utf-8").splitlines():
            if line.strip():
                row = json.loads(line)
                gold_file[" ".join(row["text"].split())] = row

    economy = load_economy_config(args.economy) if args.economy else EconomyConfig()
    log = FileEventLog(args.log) if args.log else None

    run = run_study(config, population=population, log=log, economy=economy,
                    pool_csv=pool_csv, new_specs=new_specs, gold_file=gold_file)

    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / "dataset.jsonl").write_text("\n".join(run.dataset_lines) + "\n", encoding="utf-8")
    (args.out / "report.json").write_text(
        json.dumps(run.report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    with open(args.out / "alpha_histogram.csv", "w", encoding="utf-8", newline="") as fh:
        write_alpha_histogram(fh, run.baseline_alphas)

    totals = run.report["totals"]
    print(f"annotations: {totals['annotations']}")
    print(f"sentences:   {totals['sentences']} ({totals['established']} established, "
          f"min {totals['min_annotations']} / max {totals['max_annotations']} annotations)")
    for name in ("baseline", "new"):
        block = run.report["alpha"][name]
        if block.get("alpha") is not None:
            print(f"alpha[{name}]: {block['alpha']:.4f} "
                  f"[{block['ci_low']:.4f}, {block['ci_high']:.4f}]")
    for warning in run.report["warnings"]:
        print(f"warning: {warning}", file=sys.stderr)
    print(f"wrote {args.out}/dataset.jsonl, report.json, alpha_histogram.csv")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.api import create_app

    economy = load_economy_config(args.economy) if args.economy else EconomyConfig()
    stopwords = load_stopwords(args.stopwords) if args.stopwords else DEFAULT_STOPWORDS
    log = FileEventLog(args.log) if args.log else None
    platform = Platform(config=economy, seed=args.seed, log=log, stopwords=stopwords)
    app = create_app(platform, curator_token=args.curator_token)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _cmd_import(args: argparse.Namespace) -> int:
    platform = Platform(log=FileEventLog(args.log))
    for name in args.topics.split(","):
        if name and name not in platform.content.topics:
            platform.create_topic(name, unlocked_by_default=True, topic_id=name)
    report = platform.import_baseline(args.file.read_text("utf-8"))
    print(f"imported {report.imported} sentences, rejected {len(report.rejected)} rows")
    for r in report.rejected:
        print(f"  line {r.line}: {r.error}: {r.message}", file=sys.stderr)
    return 0


def _cmd_export(args: argparse.Namespace) -> int:
    platform = Platform(log=FileEventLog(args.log))
    for record in platform.export_dataset(min_annotations=args.min_annotations):
        print(json.dumps(record.to_json_dict(), ensure_ascii=False))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="biasgame")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_simulate(sub)

    serve = sub.add_parser("serve", help="run the REST service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--seed", type=int, default=0)
    serve.add_argument("--log", type=Path, default=None, help="durable event log path")
    serve.add_argument("--economy", type=Path, default=None)
    serve.add_argument("--stopwords", type=Path, default=None,
                       help="override stopword list (one lowercase word per line)")
    serve.add_argument("--curator-token", default="curator-secret")

    imp = sub.add_parser("import-baseline", help="import a baseline CSV into a durable log")
    imp.add_argument("file", type=Path)
    imp.add_argument("--log", type=Path, required=True)
    imp.add_argument("--topics", default="", help="comma-separated topics to create first")

    exp = sub.add_parser("export", help="export the dataset from a durable log")
    exp.add_argument("--log", type=Path, required=True)
    exp.add_argument("--min-annotations", type=int, default=None)

    args = parser.parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "import-baseline":
        return _cmd_import(args)
    if args.command == "export":
        return _cmd_export(args)
    parser.error("unknown command")
    return 2


if __name__ == "__main__":
    raise SystemExit(main())
