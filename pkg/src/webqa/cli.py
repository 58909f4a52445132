"""Command-line entry point.

    webqa [--config FILE | --fixture] [--out-dir DIR] COMMAND ...

Settings come from a TOML config file; command-line flags override it.
Exit codes: 0 ok, 1 data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

from .config import PipelineConfig, parse_k
from .errors import DataError, UnknownRelationError
from .evaluation import AP_MODES, run_benchmark, sweep_templates
from .kb import KbcQuery, KnowledgeBase, load_kb, sample_queries
from .linking import DictionaryLinker, RemoteLinker
from .pipeline import Pipeline
from .questions import TemplateSet, load_template_set
from .ranking import load_model
from .snippets import FixtureCorpus, HttpSearchSource

log = logging.getLogger("webqa")

EXIT_DATA = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _k_list(text: str) -> list[int | None]:
    try:
        return [parse_k(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common_options() -> argparse.ArgumentParser:
    # accepted before or after the command name
    c = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    src = c.add_mutually_exclusive_group()
    src.add_argument("--config", type=Path, help="TOML config file")
    src.add_argument("--fixture", action="store_true",
                     help="use the bundled fixture config (outputs default to ./webqa_out)")
    c.add_argument("--out-dir", type=Path, help="directory for templates, models and reports")
    c.add_argument("--workers", type=int, help="concurrent fetch/benchmark workers")
    c.add_argument("--max-per-question", type=int, help="snippets fetched per question")
    c.add_argument("--ap-mode", choices=AP_MODES, help="average-precision definition")
    c.add_argument("--sample-seed", type=int, help="seed for the train/test query split")
    c.add_argument("--train-seed", type=int, help="seed for resampling during training")
    c.add_argument("--live", action="store_true",
                   help="query the configured search engine instead of the corpus file")
    c.add_argument("--timings", action="store_true", help="print per-stage durations")
    c.add_argument("-v", "--verbose", action="store_true")
    return c


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    p = argparse.ArgumentParser(
        prog="webqa", description=__doc__.split("\n\n")[0], parents=[common],
        epilog="Flags given on the command line take precedence over the config file.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sub.add_parser("load-check", parents=[common], help="load the KB and corpus and print counts")

    a = sub.add_parser("answer", parents=[common], help="answer one query <SUBJECT, RELATION, ?>")
    a.add_argument("subject")
    a.add_argument("relation")
    a.add_argument("--snippets", type=_k_list, help="snippets kept after filtering, or 'all'")
    a.add_argument("--json", action="store_true", help="machine-readable output")

    t = sub.add_parser("train", parents=[common], help="train the snippet filter and answer ranker")
    t.add_argument("relation")

    s = sub.add_parser("select-templates", parents=[common], help="greedy template selection with sweep curve")
    s.add_argument("relation")

    e = sub.add_parser("evaluate", parents=[common], help="benchmark on the test queries")
    e.add_argument("relation")
    e.add_argument("--snippets", type=_k_list, help="comma list of k values, e.g. 10,20,30,all")
    e.add_argument("--split", choices=("test", "train", "all"), default="test",
                   help="which sampled queries to evaluate")
    return p


def load_config(args) -> PipelineConfig:
    if args.fixture:
        from .fixture import FIXTURE_DIR
        path, out_dir = FIXTURE_DIR / "config.toml", args.out_dir or Path("webqa_out")
    elif args.config is not None:
        path, out_dir = args.config, args.out_dir
    else:
        raise UsageError("one of --config or --fixture is required")
    if args.workers is not None and args.workers < 1:
        raise UsageError("--workers must be >= 1")
    return PipelineConfig.load(path, out_dir, workers=args.workers,
                               max_per_question=args.max_per_question, ap_mode=args.ap_mode,
                               sample_seed=args.sample_seed, train_seed=args.train_seed)


class Context:
    def __init__(self, cfg: PipelineConfig, live: bool):
        cfg.check_inputs(need_corpus=not live)
        self.cfg = cfg
        self.kb: KnowledgeBase = load_kb(cfg.facts, cfg.types, cfg.labels, cfg.schemas)
        if live:
            opts = dict(cfg.live)
            linker_opts = opts.pop("linker", None)
            if "endpoint" not in opts:
                raise UsageError("--live needs a [live] endpoint in the config")
            self.source = HttpSearchSource(**opts)
            self.linker = (RemoteLinker(kb=self.kb, **linker_opts) if linker_opts
                           else DictionaryLinker(self.kb))
        else:
            if cfg.corpus is None:
                raise UsageError("no [corpus] path configured (or pass --live)")
            self.source = FixtureCorpus.load(cfg.corpus)
            self.linker = DictionaryLinker(self.kb)
        self.pipeline = Pipeline(self.kb, self.source, self.linker, cfg.max_per_question,
                                 workers=cfg.workers)

    def relation(self, relation: str):
        try:
            return self.kb.schema(relation)
        except UnknownRelationError as exc:
            known = ", ".join(sorted(self.kb.schemas)) or "none"
            raise UsageError(f"{exc} (known relations: {known})") from None

    def splits(self, relation: str):
        return sample_queries(self.kb, relation, self.cfg.n_train, self.cfg.n_test,
                              self.cfg.sample_seed)

    def templates(self, relation: str) -> TemplateSet:
        path = self.cfg.template_path(relation)
        if path.is_file():
            return load_template_set(path)
        return TemplateSet(self.relation(relation).templates, 0.0, relation)

    def models(self, relation: str) -> dict:
        fpath, rpath = self.cfg.model_paths(relation)
        for p in (fpath, rpath):
            if not p.is_file():
                raise UsageError(f"model file {p} not found; run 'webqa train {relation}' first")
        return {"filter": load_model(fpath), "ranker": load_model(rpath)}


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def cmd_load_check(ctx: Context, args) -> int:
    kb = ctx.kb
    print(f"facts: {len(kb.facts)}")
    print(f"entities: {len(kb.entities)}")
    print(f"labels: {len(kb.labels)}")
    print(f"relations: {', '.join(sorted(kb.schemas))}")
    for rel in sorted(kb.schemas):
        print(f"  {rel}: {len(kb.subjects_with_objects(rel))} subjects with ground truth")
    if isinstance(ctx.source, FixtureCorpus):
        print(f"corpus questions: {len(ctx.source)}")
    return 0


def cmd_answer(ctx: Context, args) -> int:
    ctx.relation(args.relation)
    if args.subject not in ctx.kb.types:
        raise UsageError(f"unknown subject entity: {args.subject!r}")
    ks = args.snippets if args.snippets is not None else [ctx.cfg.filter_k]
    if len(ks) != 1:
        raise UsageError("answer takes a single --snippets value")
    k = ks[0]
    templates = ctx.templates(args.relation)
    models = ctx.models(args.relation)
    trace = ctx.pipeline.run(KbcQuery(args.subject, args.relation), templates.templates,
                             models["ranker"], models["filter"], k)
    if args.json:
        print(json.dumps({
            "subject": args.subject, "relation": args.relation,
            "templates": list(templates.templates), "snippets": "all" if k is None else k,
            "answers": [{"entity": r.entity, "probability": r.probability} for r in trace.ranked],
            "discarded": [c.entity for c in trace.discarded],
        }, indent=2))
    else:
        print(f"<{args.subject}, {args.relation}, ?>  templates: {', '.join(templates)}")
        if not trace.ranked:
            print("(no answers)")
        for i, r in enumerate(trace.ranked, 1):
            print(f"{i:3d}  {r.probability:.4f}  {r.entity}")
    for err in trace.errors:
        log.warning(err)
    if args.timings:
        for stage, secs in trace.timings.items():
            print(f"# {stage}: {secs:.4f}s", file=sys.stderr)
    return 0


def cmd_train(ctx: Context, args) -> int:
    ctx.relation(args.relation)
    train, _ = ctx.splits(args.relation)
    templates = ctx.templates(args.relation)
    filter_model, ranker, summary = ctx.pipeline.train(train, templates.templates,
                                                       ctx.cfg.train_seed)
    fpath, rpath = ctx.cfg.model_paths(args.relation)
    _write(fpath, filter_model.to_json())
    _write(rpath, ranker.to_json())
    print(f"trained on {len(train)} queries with templates: {', '.join(templates)}")
    for line in summary.lines():
        print(line)
    print(f"wrote {fpath}")
    print(f"wrote {rpath}")
    return 0


def cmd_select_templates(ctx: Context, args) -> int:
    schema = ctx.relation(args.relation)
    train, _ = ctx.splits(args.relation)
    sweep = sweep_templates(ctx.kb, ctx.source, args.relation, list(schema.templates), train,
                            seed=ctx.cfg.train_seed, linker=ctx.linker, ap_mode=ctx.cfg.ap_mode,
                            max_per_question=ctx.cfg.max_per_question, workers=ctx.cfg.workers)
    best = sweep.greedy_best
    out = ctx.cfg.template_path(args.relation)
    curve = out.parent / f"{args.relation}.curve.csv"
    _write(out, best.to_json())
    _write(curve, sweep.to_csv())
    print(sweep.to_csv(), end="")
    print(f"selected: {', '.join(best)} (MAP {best.performance:.4f})")
    bb = sweep.baseline_best
    print(f"top-k baseline best: {', '.join(bb)} (MAP {bb.performance:.4f})")
    print(f"wrote {out}")
    print(f"wrote {curve}")
    return 0


def cmd_evaluate(ctx: Context, args) -> int:
    ctx.relation(args.relation)
    train, test = ctx.splits(args.relation)
    queries = {"test": test, "train": train, "all": train + test}[args.split]
    if not queries:
        raise UsageError(f"the {args.split} split is empty")
    templates = ctx.templates(args.relation)
    models = ctx.models(args.relation)
    ks = args.snippets if args.snippets is not None else [ctx.cfg.filter_k]
    seeds = {"sample": ctx.cfg.sample_seed, "train": ctx.cfg.train_seed}
    for k in ks:
        t0 = time.perf_counter()
        report = run_benchmark(ctx.kb, ctx.source, args.relation, templates.templates, k, models,
                               queries, linker=ctx.linker, ap_mode=ctx.cfg.ap_mode,
                               max_per_question=ctx.cfg.max_per_question,
                               workers=ctx.cfg.workers, seeds=seeds, pipeline=ctx.pipeline)
        tag = "all" if k is None else str(k)
        stem = f"{args.relation}.{args.split}.k{tag}"
        _write(ctx.cfg.reports_dir / f"{stem}.json", report.to_json())
        _write(ctx.cfg.reports_dir / f"{stem}.csv", report.to_csv())
        flagged = sum(q.flag is not None for q in report.per_query)
        print(f"k={tag}\tMAP={report.map:.4f}\tqueries={len(queries)}\tflagged={flagged}")
        if args.timings:
            print(f"# k={tag}: {time.perf_counter() - t0:.4f}s", file=sys.stderr)
    return 0


COMMANDS = {
    "load-check": cmd_load_check,
    "answer": cmd_answer,
    "train": cmd_train,
    "select-templates": cmd_select_templates,
    "evaluate": cmd_evaluate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("config", "out_dir", "workers", "max_per_question", "ap_mode", "sample_seed",
                 "train_seed"):
        setattr(args, name, getattr(args, name, None))
    for name in ("fixture", "live", "timings", "verbose"):
        setattr(args, name, getattr(args, name, False))
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args)
        ctx = Context(cfg, args.live)
        return COMMANDS[args.command](ctx, args)
    except UsageError as exc:
        print(f"webqa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ValueError, OSError) as exc:
        print(f"webqa: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
