"""Command-line entry point: ``qexpand {index,run,eval,compare}``.

Exit codes: 0 success, 1 usage error, 2 data/format error, 3 internal error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import kernels
from .config import ExperimentConfig, load_config, load_queries
from .errors import DataError
from .evaluation import (
    RECALL_LEVELS, compare_csv, compare_runs, eval_csv, evaluate_run, load_qrels, load_run,
    write_json, write_run,
)
from .experiment import MODES, execute_run, format_expanded
from .expansion import PrfParams
from .index import InvertedIndex, build_index
from .thesaurus import load_thesaurus

log = logging.getLogger("qexpand")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI experiment config; flags override it")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="qexpand", description="Query expansion experiments over a BM25 index.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("index", parents=[common], help="index a corpus of .txt files")
    p.add_argument("--corpus", type=Path)
    p.add_argument("--index", type=Path)
    p.add_argument("--force", action="store_true", help="overwrite an existing index directory")

    p = sub.add_parser("run", parents=[common], help="retrieve a query set, optionally expanded")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--index", type=Path)
    p.add_argument("--queries", type=Path)
    p.add_argument("--thesaurus", type=Path)
    p.add_argument("--d", type=int, help="PRF: number of top documents sampled (default 15)")
    p.add_argument("--t", type=int, help="PRF: correlates added per query term (default 7)")
    p.add_argument("--k", type=int, help="documents retrieved per query (default 1000)")
    p.add_argument("--out", type=Path, help="run file to write (default <mode>.run)")
    p.add_argument("--dump-expanded", action="store_true",
                   help="also write <out>.expanded.tsv with the reformulated queries")

    p = sub.add_parser("eval", parents=[common], help="score a run against qrels")
    p.add_argument("run", type=Path)
    p.add_argument("--qrels", type=Path)
    p.add_argument("--out", type=Path, help="report prefix; writes <out>.csv and <out>.json")

    p = sub.add_parser("compare", parents=[common], help="classify per-query changes between two runs")
    p.add_argument("baseline", type=Path)
    p.add_argument("variant", type=Path)
    p.add_argument("--qrels", type=Path)
    p.add_argument("--out", type=Path, help="report prefix; writes <out>.csv and <out>.json")
    return parser


def _config(args) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    prf = cfg.prf
    if getattr(args, "d", None) is not None or getattr(args, "t", None) is not None:
        try:
            prf = PrfParams(d=args.d or prf.d, t=args.t or prf.t,
                            k_sample=max(prf.k_sample, args.d or prf.d))
        except ValueError as e:
            raise UsageError(str(e)) from None
    return cfg.override(
        corpus_dir=getattr(args, "corpus", None),
        index_dir=getattr(args, "index", None),
        queries_path=getattr(args, "queries", None),
        qrels_path=getattr(args, "qrels", None),
        thesaurus_path=getattr(args, "thesaurus", None),
        k_retrieve=getattr(args, "k", None),
        prf=prf,
    )


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required (on the command line or in --config)")
    return value


def _prefix(out: Path | None, default: str) -> Path:
    out = out or Path(default)
    return out.with_suffix("") if out.suffix in (".csv", ".json") else out


def _dir_size(path: Path) -> int:
    return sum(p.stat().st_size for p in path.rglob("*") if p.is_file())


def cmd_index(args) -> int:
    cfg = _config(args)
    corpus = _need(cfg.corpus_dir, "--corpus")
    out = _need(cfg.index_dir, "--index")
    if out.exists() and any(out.iterdir()) and not args.force:
        raise DataError(f"index directory {out} already exists; use --force to overwrite")
    index = build_index(corpus, cfg.analyzer)
    if out.exists() and args.force:
        for f in out.iterdir():
            if f.is_file():
                f.unlink()
    index.save(out, force=True)
    print(f"documents:  {index.n_docs}")
    print(f"vocabulary: {len(index.terms)}")
    print(f"postings:   {index.post_doc.shape[0]}")
    print(f"index size: {_dir_size(out)} bytes ({out})")
    return EXIT_OK


def cmd_run(args) -> int:
    cfg = _config(args)
    index_dir = _need(cfg.index_dir, "--index")
    queries_path = _need(cfg.queries_path, "--queries")
    if args.mode == "cb" and cfg.thesaurus_path is None:
        raise UsageError("--mode cb requires --thesaurus")
    # query-time analysis always follows the index; an explicit, different analyzer is fatal
    index = InvertedIndex.load(index_dir, expected=cfg.analyzer if cfg.analyzer_explicit else None)
    queries = load_queries(queries_path, index.analyzer)
    thesaurus = load_thesaurus(cfg.thesaurus_path, index.analyzer) if args.mode == "cb" else None
    run, expanded = execute_run(index, queries, args.mode, cfg.k_retrieve, thesaurus, cfg.prf)
    out = args.out or Path(f"{args.mode}.run")
    write_run(run, out)
    print(f"{args.mode}: {len(queries)} queries, {sum(map(len, run.queries.values()))} results -> {out}")
    if args.dump_expanded:
        dump = out.with_suffix(".expanded.tsv")
        dump.write_text(format_expanded(expanded), encoding="utf-8")
        print(f"expanded queries -> {dump}")
    return EXIT_OK


def _print_summary(report) -> None:
    ks = report.k_levels
    print(f"run {report.tag}: {len(report.per_query)} queries")
    print("  " + "  ".join(f"{'P@' + str(k):>7}" for k in ks))
    print("  " + "  ".join(f"{report.mean_precision[k]:7.4f}" for k in ks))
    print("  recall " + " ".join(f"{r:5.1f}" for r in RECALL_LEVELS))
    print("  prec   " + " ".join(f"{p:5.3f}" for p in report.mean_curve))


def cmd_eval(args) -> int:
    cfg = _config(args)
    qrels = load_qrels(_need(cfg.qrels_path, "--qrels"))
    report = evaluate_run(load_run(args.run), qrels, cfg.k_levels)
    for w in report.warnings:
        log.warning(w)
    prefix = _prefix(args.out, args.run.with_suffix("").name + ".eval")
    prefix.with_suffix(".csv").write_text(eval_csv(report), encoding="utf-8")
    write_json(report.to_dict(), prefix.with_suffix(".json"))
    _print_summary(report)
    return EXIT_OK


def cmd_compare(args) -> int:
    cfg = _config(args)
    qrels = load_qrels(_need(cfg.qrels_path, "--qrels"))
    base = evaluate_run(load_run(args.baseline), qrels, cfg.k_levels)
    var = evaluate_run(load_run(args.variant), qrels, cfg.k_levels)
    cmp = compare_runs(base, var)
    prefix = _prefix(args.out, f"{base.tag}_vs_{var.tag}")
    prefix.with_suffix(".csv").write_text(compare_csv(cmp), encoding="utf-8")
    write_json(cmp.to_dict(), prefix.with_suffix(".json"))
    print(f"{base.tag} -> {var.tag}")
    width = max(len(q) for q in cmp.tags)
    for qid, tag in cmp.tags.items():
        print(f"  {qid:<{width}}  {tag.value}")
    n = len(cmp.tags)
    for tag, (count, pct) in cmp.summary.items():
        print(f"  {tag}: {count}/{n} ({pct}%)")
    return EXIT_OK


COMMANDS = {"index": cmd_index, "run": cmd_run, "eval": cmd_eval, "compare": cmd_compare}


def main(argv=None) -> int:
    if hasattr(sys.stdout, "reconfigure"):
        # consoles that cannot render Arabic get replacement characters instead of a crash
        sys.stdout.reconfigure(errors="replace")
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    log.debug("kernel backend: %s", kernels.BACKEND)
    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        print(f"qexpand: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileExistsError, OSError) as e:
        print(f"qexpand: error: {e}", file=sys.stderr)
        return EXIT_DATA
    except Exception as e:  # noqa: BLE001
        log.exception("internal error")
        print(f"qexpand: internal error: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
