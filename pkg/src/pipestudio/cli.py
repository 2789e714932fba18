"""Single command-line entry point.

Subcommands: corpus build, corpus stats, eval, predict, run, serve.
Machine-readable output goes to stdout, logs to stderr; exit codes are
0 (success), 1 (domain error), 2 (usage error). LOWCODE_MANIFEST overrides
the default operator manifest path.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import corpus as corpus_mod
from . import evaluation
from .dsl import PipelineSyntaxError, parse_pipeline, serialize_pipeline
from .engine import EngineError, load_dataset, run_pipeline
from .registry import ManifestError, Registry, load_manifest
from .resolver import build_index, predict

log = logging.getLogger("pipestudio")


class DomainError(Exception):
    """Bad inputs discovered after argument parsing; exits 1."""


def default_data_dir() -> Path:
    return Path(__file__).parent / "data" / "datasets"


def default_index_path() -> Path:
    return Path(__file__).parent / "data" / "seed_corpus.jsonl"


def _manifest_path(value: str | None) -> Path:
    if value:
        return Path(value)
    env = os.environ.get("LOWCODE_MANIFEST")
    if env:
        return Path(env)
    from .registry import default_manifest_path

    return default_manifest_path()


def _load_registry(value: str | None) -> Registry:
    try:
        return load_manifest(_manifest_path(value))
    except (OSError, ManifestError) as exc:
        raise DomainError(f"cannot load manifest: {exc}") from exc


def _load_samples(path: str) -> list:
    try:
        return corpus_mod.read_jsonl(path)
    except OSError as exc:
        raise DomainError(f"cannot read corpus file: {exc}") from exc
    except (KeyError, ValueError, json.JSONDecodeError) as exc:
        raise DomainError(f"invalid corpus file {path}: {exc}") from exc


def _parse_ratios(text: str, parser: argparse.ArgumentParser) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        parser.error(f"--ratios takes three comma-separated numbers, got {text!r}")
    try:
        ratios = tuple(float(p) for p in parts)
    except ValueError:
        parser.error(f"--ratios takes numbers, got {text!r}")
    return ratios  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# subcommands

def cmd_corpus_build(args, parser) -> int:
    registry = _load_registry(args.manifest)
    if not Path(args.notebooks).is_dir():
        raise DomainError(f"notebook directory {args.notebooks!r} does not exist")
    try:
        _, counts = corpus_mod.build_corpus(
            args.notebooks, args.out, registry,
            task=args.task, ratios=args.ratios, seed=args.seed,
        )
    except (OSError, ValueError) as exc:
        raise DomainError(str(exc)) from exc
    print(json.dumps(counts.to_json(), indent=2))
    return 0


def cmd_corpus_stats(args, parser) -> int:
    samples = _load_samples(args.infile)
    hybrid = [s for s in samples if s.task == corpus_mod.HYBRID]
    if not hybrid:
        raise DomainError("no hybrid samples in input")
    stats = corpus_mod.param_stats(hybrid)
    print(corpus_mod.render_param_stats(stats))
    if args.json:
        Path(args.json).write_text(json.dumps(stats, indent=2) + "\n", encoding="utf-8")
        log.info("wrote %s", args.json)
    if args.fig:
        from .figures import save_param_stats_figure

        save_param_stats_figure(stats, args.fig)
        log.info("wrote %s", args.fig)
    return 0


def cmd_eval(args, parser) -> int:
    if args.k < 1:
        parser.error("--k must be at least 1")
    index = build_index(_load_samples(args.index))
    samples = _load_samples(args.test)
    if not samples:
        raise DomainError("empty evaluation set")
    config = evaluation.EvalConfig(k=args.k, mode=args.mode)

    def predictor(query: str):
        return [inv for inv, _ in predict(index, query, n=args.k).candidates]

    report = evaluation.evaluate(predictor, samples, config)
    label = f"retrieval k={args.k}"
    print(evaluation.render_report_table({label: {args.mode: report}}))
    print(f"accuracy: {report.accuracy:.4f} ({report.hits}/{report.total})")
    if args.report:
        evaluation.write_report(report, args.report)
        log.info("wrote %s", args.report)
    if args.fig:
        from .figures import save_eval_figure

        save_eval_figure({label: report}, args.fig)
        log.info("wrote %s", args.fig)
    return 0


def cmd_predict(args, parser) -> int:
    if args.k < 1:
        parser.error("--k must be at least 1")
    index = build_index(_load_samples(args.index))
    prediction = predict(index, args.query, n=args.k)
    if args.json:
        print(json.dumps(prediction.to_json(), indent=2))
        return 0
    if not prediction.candidates:
        print("no candidates")
        return 0
    for rank, (inv, score) in enumerate(prediction.candidates, start=1):
        print(f"{rank}. {inv.render()}  (score {score:.4f})")
    if prediction.highlighted_params:
        print(f"highlighted: {', '.join(prediction.highlighted_params)}")
    return 0


def cmd_run(args, parser) -> int:
    registry = _load_registry(args.manifest)
    data_dir = Path(args.data_dir) if args.data_dir else default_data_dir()
    try:
        dataset = load_dataset(data_dir, args.dataset)
    except Exception as exc:
        raise DomainError(str(exc)) from exc
    try:
        ast = parse_pipeline(args.pipeline)
    except PipelineSyntaxError as exc:
        raise DomainError(f"cannot parse pipeline: {exc}") from exc
    result = run_pipeline(dataset, ast, registry, seed=args.seed)
    if args.json:
        print(json.dumps(result.to_json(), indent=2))
    else:
        print(f"dataset: {args.dataset}")
        print(f"pipeline: {serialize_pipeline(ast)}")
        for d in result.diagnostics:
            print(f"[{d.severity}] {d.message}")
        after_cols = ", ".join(c.name for c in result.after.columns)
        print(f"after columns ({len(result.after.columns)}): {after_cols}")
        print(f"score: {'n/a' if result.score is None else f'{result.score:.4f}'}")
    return 0 if not any(d.severity == "error" for d in result.diagnostics) else 1


def cmd_serve(args, parser) -> int:
    import uvicorn

    from .server import Studio, create_app

    registry = _load_registry(args.manifest)
    index_path = Path(args.index) if args.index else default_index_path()
    index = build_index(_load_samples(str(index_path)))
    data_dir = Path(args.data_dir) if args.data_dir else default_data_dir()
    studio = Studio(
        registry, index, data_dir,
        snapshot_dir=args.snapshot_dir, query_log=args.query_log,
    )
    app = create_app(studio)
    log.info("serving on %s:%d (manifest %s, %d indexed samples)",
             args.host, args.port, _manifest_path(args.manifest), len(index))
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pipestudio", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_corpus = sub.add_parser("corpus", help="corpus building and statistics")
    corpus_sub = p_corpus.add_subparsers(dest="corpus_command", required=True)

    p_build = corpus_sub.add_parser("build", help="mine notebooks into a task-formulated corpus")
    p_build.add_argument("--notebooks", required=True, help="directory of .ipynb files")
    p_build.add_argument("--out", required=True, help="output directory")
    p_build.add_argument("--seed", type=int, default=0)
    p_build.add_argument("--ratios", default="0.88,0.06,0.06", help="train,valid,test ratios")
    p_build.add_argument("--task", default="hybrid", choices=list(corpus_mod.TASKS))
    p_build.add_argument("--manifest", help="operator manifest path")

    p_stats = corpus_sub.add_parser("stats", help="hybrid parameter distribution report")
    p_stats.add_argument("--in", dest="infile", required=True, help="hybrid corpus JSONL")
    p_stats.add_argument("--json", help="also write the report as JSON")
    p_stats.add_argument("--fig", help="also render a bar-chart figure (png/svg)")

    p_eval = sub.add_parser("eval", help="top-k accuracy of the retrieval resolver")
    p_eval.add_argument("--index", required=True, help="hybrid corpus JSONL to index")
    p_eval.add_argument("--test", required=True, help="test samples JSONL")
    p_eval.add_argument("--k", type=int, required=True)
    p_eval.add_argument("--mode", choices=["name", "invocation"], required=True)
    p_eval.add_argument("--report", help="write the full report JSON here")
    p_eval.add_argument("--fig", help="also render an accuracy figure (png/svg)")

    p_predict = sub.add_parser("predict", help="resolve a natural-language query")
    p_predict.add_argument("--index", required=True, help="hybrid corpus JSONL to index")
    p_predict.add_argument("--query", required=True)
    p_predict.add_argument("--k", type=int, default=5)
    p_predict.add_argument("--json", action="store_true", help="print the prediction as JSON")

    p_run = sub.add_parser("run", help="run a pipeline on a dataset fixture")
    p_run.add_argument("--dataset", required=True)
    p_run.add_argument("--pipeline", required=True)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--data-dir", help="dataset fixture directory")
    p_run.add_argument("--manifest", help="operator manifest path")
    p_run.add_argument("--json", action="store_true", help="print the run result as JSON")

    p_serve = sub.add_parser("serve", help="start the HTTP backend")
    p_serve.add_argument("--port", type=int, default=8686)
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--manifest", help="operator manifest path")
    p_serve.add_argument("--index", help="hybrid corpus JSONL to index")
    p_serve.add_argument("--data-dir", help="dataset fixture directory")
    p_serve.add_argument("--snapshot-dir", help="persist session snapshots here")
    p_serve.add_argument("--query-log", help="append NL queries to this JSONL file")

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "corpus":
            if args.corpus_command == "build":
                args.ratios = _parse_ratios(args.ratios, parser)
                return cmd_corpus_build(args, parser)
            return cmd_corpus_stats(args, parser)
        if args.command == "eval":
            return cmd_eval(args, parser)
        if args.command == "predict":
            return cmd_predict(args, parser)
        if args.command == "run":
            return cmd_run(args, parser)
        if args.command == "serve":
            return cmd_serve(args, parser)
    except DomainError as exc:
        log.error("%s", exc)
        return 1
    except EngineError as exc:
        log.error("%s", exc)
        return 1
    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
