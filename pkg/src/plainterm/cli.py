"""Command-line interface: build-table, train-lm, simplify, evaluate, tune.

Data goes to stdout or the requested output files; logs and summaries go to
stderr. Exit codes: 0 on success, 1 on runtime or data errors, 2 on usage
errors. Given the same inputs and seed, every command writes byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import IO, Sequence

from . import evaluation, ngram_lm, ontology, simplifier, wordfreq

log = logging.getLogger("plainterm")


class UsageError(Exception):
    """Bad flag combinations detected after argparse has run."""


def _open_out(path: str | None) -> IO[str]:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8", newline="\n")


def _close_out(handle: IO[str]) -> None:
    if handle is not sys.stdout:
        handle.close()


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh]


def cmd_build_table(args: argparse.Namespace) -> int:
    records = []
    for path in args.ontologies:
        with open(path, encoding="utf-8") as fh:
            records.extend(ontology.parse_records(fh))
    table = ontology.align(records, expand_plurals=args.plural_variants)
    out = _open_out(args.output)
    try:
        ontology.write_table(table, out)
    finally:
        _close_out(out)
    log.info("built %d groups from %d records", len(table.groups), len(records))
    return 0


def cmd_train_lm(args: argparse.Namespace) -> int:
    with open(args.corpus, encoding="utf-8") as fh:
        model = ngram_lm.train(
            fh, order=args.order, discount=args.discount, min_count=args.min_count
        )
    out = _open_out(args.output)
    try:
        ngram_lm.save_arpa(model, out)
    finally:
        _close_out(out)
    log.info("trained order-%d model, vocabulary size %d", model.order, len(model.vocab))
    return 0


def cmd_simplify(args: argparse.Namespace) -> int:
    with open(args.table, encoding="utf-8") as fh:
        table = ontology.read_table(fh)
    lm = ngram_lm.load_scorer(args.lm)
    with open(args.freq, encoding="utf-8") as fh:
        freq = wordfreq.load_table(fh)
    config = simplifier.SimplifierConfig(
        alpha=args.alpha, max_iterations=args.max_iterations
    )
    sentences = [line for line in _read_lines(args.input)]
    results = simplifier.simplify_corpus(sentences, table, lm, freq, config)
    out = _open_out(args.output)
    try:
        for res in results:
            out.write(f"{res.original}\t{res.final}\t{res.iterations}\n")
    finally:
        _close_out(out)
    if args.trace:
        with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
            json.dump({"sentences": [r.to_dict() for r in results]}, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if results:
        stats = simplifier.iteration_stats(results)
        changed = sum(1 for r in results if r.changed)
        print(
            f"simplified {len(results)} sentences: {changed} changed, "
            f"iterations mean={stats.mean:.2f} median={stats.median:g}",
            file=sys.stderr,
        )
    else:
        print("simplified 0 sentences", file=sys.stderr)
    return 0


def _evaluate_judgments(args: argparse.Namespace, out_lines: list[str]) -> None:
    with open(args.judgments, encoding="utf-8", newline="") as fh:
        records = evaluation.load_judgments(fh)
    unchanged: list[tuple[str, str]] = []
    if args.unchanged:
        with open(args.unchanged, encoding="utf-8", newline="") as fh:
            unchanged = evaluation.load_unchanged(fh)
    counts = evaluation.aggregate_judgments(records, unchanged, replications=args.replications)
    out_lines.append(evaluation.format_report(counts, fmt=args.format).rstrip("\n"))
    if args.compare:
        sys_a, sys_b = args.compare
        for name in (sys_a, sys_b):
            if name not in counts:
                raise ValueError(f"system {name!r} not present in judgments")
        p = evaluation.sg_significance(
            counts[sys_a], counts[sys_b], iterations=args.iterations, seed=args.seed
        )
        out_lines.append(f"p-value({sys_a} vs {sys_b})\t{p:.4g}")


def cmd_evaluate(args: argparse.Namespace) -> int:
    want_bleu = args.bleu
    want_sari = args.sari
    want_sg = args.sg
    auto = not (want_bleu or want_sari or want_sg)
    if want_bleu and not (args.outputs and args.references):
        raise UsageError("--bleu needs --outputs and --references")
    if want_sari and not (args.outputs and args.sources and args.references):
        raise UsageError("--sari needs --outputs, --sources and --references")
    if want_sg and not args.judgments:
        raise UsageError("--sg needs --judgments")
    if auto:
        want_bleu = bool(args.outputs and args.references)
        want_sari = bool(args.outputs and args.sources and args.references)
        want_sg = bool(args.judgments)
        if not (want_bleu or want_sari or want_sg):
            raise UsageError(
                "nothing to evaluate: provide --outputs with --references, and/or --judgments"
            )

    out_lines: list[str] = []
    if want_bleu or want_sari:
        outputs = _read_lines(args.outputs)
        references = _read_lines(args.references)
        if want_bleu:
            out_lines.append(f"BLEU\t{evaluation.bleu(outputs, references):.2f}")
        if want_sari:
            sources = _read_lines(args.sources)
            if not (len(sources) == len(outputs) == len(references)):
                raise ValueError(
                    "sources, outputs and references must have the same number of lines"
                )
            if not outputs:
                raise ValueError("no sentences to score")
            scores = [
                evaluation.sari(src, out, [ref])
                for src, out, ref in zip(sources, outputs, references)
            ]
            out_lines.append(f"SARI\t{sum(scores) / len(scores):.2f}")
    if want_sg:
        _evaluate_judgments(args, out_lines)

    out = _open_out(args.output)
    try:
        for line in out_lines:
            out.write(line + "\n")
    finally:
        _close_out(out)
    return 0


def _parse_grid(spec: str) -> list[float]:
    try:
        if ":" in spec:
            start_s, stop_s, step_s = spec.split(":")
            start, stop, step = float(start_s), float(stop_s), float(step_s)
            if step <= 0 or stop < start:
                raise ValueError
            points = []
            k = 0
            while True:
                val = round(start + k * step, 10)
                if val > stop + 1e-12:
                    break
                points.append(val)
                k += 1
            return points
        return [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"bad grid spec {spec!r}: use start:stop:step or a comma list") from None


def cmd_tune(args: argparse.Namespace) -> int:
    pairs = []
    with open(args.dev, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"line {line_no}: expected source<TAB>reference, got {len(cols)} columns")
            pairs.append((cols[0], cols[1]))
    with open(args.table, encoding="utf-8") as fh:
        table = ontology.read_table(fh)
    lm = ngram_lm.load_scorer(args.lm)
    with open(args.freq, encoding="utf-8") as fh:
        freq = wordfreq.load_table(fh)
    grid = _parse_grid(args.grid) if args.grid else None
    best_alpha, curve = evaluation.grid_search_alpha(
        pairs, table, lm, freq, grid=grid, max_iterations=args.max_iterations
    )
    out = _open_out(args.output)
    try:
        out.write("alpha\tsari\n")
        for alpha, score in curve:
            out.write(f"{alpha:.2f}\t{score:.6f}\n")
    finally:
        _close_out(out)
    best_score = dict(curve)[best_alpha]
    print(f"best alpha: {best_alpha:.2f} (sari {best_score:.4f})", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plainterm",
        description="Replace specialist terms with plain-language alternatives "
        "and evaluate the results.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "build-table",
        help="merge ontology TSVs into a phrase table",
        description="Input rows: concept_id<TAB>label<TAB>source<TAB>P|A. "
        "Output rows: group_id<TAB>label, sorted.",
    )
    p.add_argument("ontologies", nargs="+", metavar="TSV", help="ontology record files")
    p.add_argument("--output", "-o", help="phrase table file (default stdout)")
    p.add_argument(
        "--no-plural-variants",
        dest="plural_variants",
        action="store_false",
        help="do not add naive head-word plurals as group members",
    )
    p.set_defaults(func=cmd_build_table)

    p = sub.add_parser(
        "train-lm",
        help="train a backoff n-gram model and write ARPA",
        description="Corpus: UTF-8, one pre-tokenized sentence per line.",
    )
    p.add_argument("corpus", help="training corpus file")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--discount", type=float, default=0.75)
    p.add_argument("--min-count", type=int, default=2, help="words rarer than this become <unk>")
    p.add_argument("--output", "-o", help="ARPA file (default stdout)")
    p.set_defaults(func=cmd_train_lm)

    p = sub.add_parser(
        "simplify",
        help="simplify a file of sentences",
        description="Input: one sentence per line. Output rows: "
        "original<TAB>simplified<TAB>iterations. The --lm file may be an ARPA "
        "model or a sentence<TAB>score table.",
    )
    p.add_argument("--input", required=True, help="sentences to simplify")
    p.add_argument("--table", required=True, help="phrase table from build-table")
    p.add_argument("--lm", required=True, help="ARPA model or sentence-score table")
    p.add_argument("--freq", required=True, help="word<TAB>probability table")
    p.add_argument("--alpha", type=float, default=0.7, help="fluency weight in [0, 1]")
    p.add_argument("--max-iterations", type=int, default=5)
    p.add_argument("--output", "-o", help="result TSV (default stdout)")
    p.add_argument("--trace", help="write a JSON trace of every ranking decision")
    p.set_defaults(func=cmd_simplify)

    p = sub.add_parser(
        "evaluate",
        help="score outputs with BLEU/SARI and judgment tallies",
        description="Judgments CSV: sentence_id,system_id,category with "
        "category one of S/F/E/N. Unchanged CSV: sentence_id,system_id. "
        "Sentence files: one sentence per line. Without metric flags, "
        "whatever the provided inputs allow is computed.",
    )
    p.add_argument("--outputs", help="system output sentences")
    p.add_argument("--sources", help="source sentences")
    p.add_argument("--references", help="reference sentences")
    p.add_argument("--judgments", help="judgment CSV")
    p.add_argument("--unchanged", help="unchanged-pair CSV")
    p.add_argument("--replications", type=int, default=7, help="U judgments per unchanged pair")
    p.add_argument("--bleu", action="store_true", help="require corpus BLEU")
    p.add_argument("--sari", action="store_true", help="require mean SARI")
    p.add_argument("--sg", action="store_true", help="require judgment tallies")
    p.add_argument("--compare", nargs=2, metavar=("SYS_A", "SYS_B"), help="bootstrap p-value for a system pair")
    p.add_argument("--iterations", type=int, default=10000, help="bootstrap resamples")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--format", choices=("table", "tsv"), default="table")
    p.add_argument("--output", "-o", help="report file (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "tune",
        help="grid-search alpha against a dev set",
        description="Dev file rows: source<TAB>reference. Writes an "
        "alpha<TAB>sari curve and reports the best alpha on stderr.",
    )
    p.add_argument("--dev", required=True, help="parallel dev TSV")
    p.add_argument("--table", required=True)
    p.add_argument("--lm", required=True)
    p.add_argument("--freq", required=True)
    p.add_argument("--grid", help="start:stop:step or comma-separated alphas (default built-in grid)")
    p.add_argument("--max-iterations", type=int, default=5)
    p.add_argument("--output", "-o", help="curve TSV (default stdout)")
    p.set_defaults(func=cmd_tune)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO, format="%(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
