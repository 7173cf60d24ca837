"""Evaluation: judgment aggregation, simplification gain, SARI, BLEU, tuning.

Human judgments label each source/output pair with one of four categories:
S (output simpler), F (original was simpler, a failure), E (equally simple),
N (neither understood). Pairs the system left unchanged are tallied
separately as U. Simplification gain is (S - F) / total judgments.
"""

from __future__ import annotations

import csv
import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .ngram_lm import LmScorer
from .ontology import PhraseTable
from .simplifier import SimplifierConfig, simplify
from .wordfreq import FrequencyTable

__all__ = [
    "CATEGORIES",
    "EvalCounts",
    "JudgmentRecord",
    "simplification_gain",
    "load_judgments",
    "load_unchanged",
    "aggregate_judgments",
    "sari",
    "sari_components",
    "bleu",
    "sg_significance",
    "default_alpha_grid",
    "grid_search_alpha",
    "format_report",
]

CATEGORIES = ("S", "F", "E", "N")


@dataclass(frozen=True)
class EvalCounts:
    """Judgment tallies for one system."""

    s: int = 0
    f: int = 0
    e: int = 0
    n: int = 0
    u: int = 0

    def __post_init__(self) -> None:
        for name in ("s", "f", "e", "n", "u"):
            if getattr(self, name) < 0:
                raise ValueError(f"negative count for {name}")

    @property
    def total(self) -> int:
        return self.s + self.f + self.e + self.n + self.u


@dataclass(frozen=True)
class JudgmentRecord:
    sentence_id: str
    system_id: str
    category: str


def simplification_gain(counts: EvalCounts) -> float:
    """Net fraction of judgments won: (S - F) / total, over all five categories."""
    if counts.total == 0:
        raise ValueError("no judgments")
    return (counts.s - counts.f) / counts.total


def load_judgments(stream: IO[str] | Iterable[str]) -> list[JudgmentRecord]:
    """Read sentence_id,system_id,category CSV rows; a literal header is skipped."""
    reader = csv.reader(stream)
    records: list[JudgmentRecord] = []
    for row in reader:
        if not row or not any(cell.strip() for cell in row):
            continue
        if reader.line_num == 1 and [c.strip() for c in row] == ["sentence_id", "system_id", "category"]:
            continue
        if len(row) != 3:
            raise ValueError(f"line {reader.line_num}: expected 3 fields, got {len(row)}")
        sentence_id, system_id, category = (c.strip() for c in row)
        if category not in CATEGORIES:
            raise ValueError(
                f"line {reader.line_num}: unknown category {category!r}, expected one of {'/'.join(CATEGORIES)}"
            )
        records.append(JudgmentRecord(sentence_id, system_id, category))
    return records


def load_unchanged(stream: IO[str] | Iterable[str]) -> list[tuple[str, str]]:
    """Read sentence_id,system_id CSV rows flagging pairs the system left alone."""
    reader = csv.reader(stream)
    flags: list[tuple[str, str]] = []
    for row in reader:
        if not row or not any(cell.strip() for cell in row):
            continue
        if reader.line_num == 1 and [c.strip() for c in row] == ["sentence_id", "system_id"]:
            continue
        if len(row) != 2:
            raise ValueError(f"line {reader.line_num}: expected 2 fields, got {len(row)}")
        flags.append((row[0].strip(), row[1].strip()))
    return flags


def aggregate_judgments(
    records: Iterable[JudgmentRecord],
    unchanged: Iterable[tuple[str, str]] = (),
    replications: int = 7,
) -> dict[str, EvalCounts]:
    """Tally judgments per system.

    Every unchanged pair counts as `replications` U judgments, mirroring a
    collection setup where each changed pair is judged that many times but
    identical pairs are judged once and extrapolated.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    tallies: dict[str, Counter[str]] = defaultdict(Counter)
    for idx, rec in enumerate(records):
        if rec.category not in CATEGORIES:
            raise ValueError(
                f"record {idx} (sentence {rec.sentence_id!r}, system {rec.system_id!r}): "
                f"unknown category {rec.category!r}"
            )
        tallies[rec.system_id][rec.category] += 1
    unchanged_counts: Counter[str] = Counter()
    for _, system_id in unchanged:
        unchanged_counts[system_id] += replications
    result: dict[str, EvalCounts] = {}
    for system_id in sorted(set(tallies) | set(unchanged_counts)):
        t = tallies.get(system_id, Counter())
        result[system_id] = EvalCounts(
            s=t["S"], f=t["F"], e=t["E"], n=t["N"], u=unchanged_counts.get(system_id, 0)
        )
    return result


def _ngram_counter(tokens: Sequence[str], n: int) -> Counter[tuple[str, ...]]:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _sari_ngram(
    src: Sequence[str],
    out: Sequence[str],
    refs: Sequence[Sequence[str]],
    n: int,
) -> tuple[float, float, float]:
    # one n-gram level of SARI: keep F1, delete precision, add F1
    numref = len(refs)
    s_counts = _ngram_counter(src, n)
    c_counts = _ngram_counter(out, n)
    r_counts: Counter[tuple[str, ...]] = Counter()
    for ref in refs:
        r_counts.update(_ngram_counter(ref, n))
    s_rep = Counter({g: c * numref for g, c in s_counts.items()})
    c_rep = Counter({g: c * numref for g, c in c_counts.items()})

    keep_cand = s_rep & c_rep
    keep_good = keep_cand & r_counts
    keep_all = s_rep & r_counts
    keep_p = sum(keep_good[g] / keep_cand[g] for g in keep_good) / len(keep_cand) if keep_cand else 0.0
    keep_r = sum(keep_good[g] / keep_all[g] for g in keep_good) / len(keep_all) if keep_all else 0.0
    keep = 2 * keep_p * keep_r / (keep_p + keep_r) if keep_p > 0 or keep_r > 0 else 0.0

    del_cand = s_rep - c_rep
    del_good = del_cand - r_counts
    delete = sum(del_good[g] / del_cand[g] for g in del_good) / len(del_cand) if del_cand else 0.0

    add_cand = set(c_counts) - set(s_counts)
    add_good = add_cand & set(r_counts)
    add_all = set(r_counts) - set(s_counts)
    add_p = len(add_good) / len(add_cand) if add_cand else 0.0
    add_r = len(add_good) / len(add_all) if add_all else 0.0
    add = 2 * add_p * add_r / (add_p + add_r) if add_p > 0 or add_r > 0 else 0.0

    return keep, delete, add


def sari_components(source: str, output: str, references: Sequence[str]) -> tuple[float, float, float]:
    """Keep, delete, and add components on a 0..100 scale, each averaged over n=1..4."""
    if not references:
        raise ValueError("at least one reference required")
    src = source.lower().split()
    out = output.lower().split()
    if not src and not out:
        raise ValueError("source and output are both empty")
    refs = [r.lower().split() for r in references]
    keep_sum = del_sum = add_sum = 0.0
    for n in range(1, 5):
        keep, delete, add = _sari_ngram(src, out, refs, n)
        keep_sum += keep
        del_sum += delete
        add_sum += add
    # each component is always averaged over the four n-gram levels
    return 100.0 * keep_sum / 4, 100.0 * del_sum / 4, 100.0 * add_sum / 4


def sari(source: str, output: str, references: Sequence[str]) -> float:
    """SARI score in [0, 100]: mean of keep F1, delete precision, and add F1."""
    keep, delete, add = sari_components(source, output, references)
    return (keep + delete + add) / 3.0


def bleu(outputs: Sequence[str], references: Sequence[str], max_n: int = 4) -> float:
    """Corpus BLEU in [0, 100] with uniform weights and no smoothing.

    Single reference per output; any n-gram level with zero matches zeroes the
    whole score, as in the original definition.
    """
    if len(outputs) != len(references):
        raise ValueError(
            f"outputs and references must have the same length, got {len(outputs)} and {len(references)}"
        )
    if not outputs:
        raise ValueError("no sentences to score")
    out_tokens = [o.split() for o in outputs]
    ref_tokens = [r.split() for r in references]
    out_len = sum(len(t) for t in out_tokens)
    ref_len = sum(len(t) for t in ref_tokens)
    if out_len == 0:
        return 0.0
    log_precisions = []
    for n in range(1, max_n + 1):
        matched = 0
        total = 0
        for out_t, ref_t in zip(out_tokens, ref_tokens):
            out_counts = _ngram_counter(out_t, n)
            ref_counts = _ngram_counter(ref_t, n)
            total += sum(out_counts.values())
            matched += sum(min(c, ref_counts[g]) for g, c in out_counts.items())
        if matched == 0 or total == 0:
            return 0.0
        log_precisions.append(math.log(matched / total))
    brevity = 1.0 if out_len > ref_len else math.exp(1.0 - ref_len / out_len)
    return 100.0 * brevity * math.exp(math.fsum(log_precisions) / max_n)


def sg_significance(
    a: EvalCounts,
    b: EvalCounts,
    iterations: int = 10000,
    seed: int = 42,
) -> float:
    """Two-sided bootstrap p-value for the simplification-gain difference.

    Each system's judgment multiset is resampled with replacement (as a
    multinomial over its category proportions) `iterations` times; the p-value
    is twice the smaller tail of the resampled difference around zero, with an
    add-one correction so it is never exactly 0.
    """
    if a.total == 0 or b.total == 0:
        raise ValueError("no judgments")
    if iterations < 1000:
        raise ValueError("iterations must be >= 1000")
    rng = np.random.default_rng(seed)
    ps_a = np.array([a.s, a.f, a.e, a.n, a.u], dtype=float) / a.total
    ps_b = np.array([b.s, b.f, b.e, b.n, b.u], dtype=float) / b.total
    draws_a = rng.multinomial(a.total, ps_a, size=iterations)
    draws_b = rng.multinomial(b.total, ps_b, size=iterations)
    sg_a = (draws_a[:, 0] - draws_a[:, 1]) / a.total
    sg_b = (draws_b[:, 0] - draws_b[:, 1]) / b.total
    diff = sg_a - sg_b
    tail = min(int((diff <= 0).sum()), int((diff >= 0).sum()))
    return min(1.0, 2.0 * (tail + 1) / (iterations + 1))


def default_alpha_grid() -> list[float]:
    """0 to 1 in steps of 0.05, refined to steps of 0.01 above 0.90."""
    coarse = {round(0.05 * i, 2) for i in range(21)}
    fine = {round(0.90 + 0.01 * i, 2) for i in range(11)}
    return sorted(coarse | fine)


def grid_search_alpha(
    dev_pairs: Sequence[tuple[str, str]],
    table: PhraseTable,
    lm: LmScorer,
    freq: FrequencyTable,
    grid: Sequence[float] | None = None,
    max_iterations: int = 5,
    include_original: bool = True,
) -> tuple[float, list[tuple[float, float]]]:
    """Pick the alpha maximizing mean SARI over (source, reference) dev pairs.

    Returns the best alpha (smallest on ties) and the full (alpha, sari) curve,
    one entry per grid point.
    """
    pairs = list(dev_pairs)
    if not pairs:
        raise ValueError("empty development set")
    points = list(grid) if grid is not None else default_alpha_grid()
    if not points:
        raise ValueError("empty alpha grid")
    curve: list[tuple[float, float]] = []
    best_alpha: float | None = None
    best_score = -math.inf
    for alpha in points:
        config = SimplifierConfig(
            alpha=alpha, max_iterations=max_iterations, include_original=include_original
        )
        scores = [
            sari(source, simplify(source, table, lm, freq, config).final, [reference])
            for source, reference in pairs
        ]
        mean_sari = math.fsum(scores) / len(scores)
        curve.append((alpha, mean_sari))
        if (
            best_alpha is None
            or mean_sari > best_score
            or (mean_sari == best_score and alpha < best_alpha)
        ):
            best_alpha = alpha
            best_score = mean_sari
    assert best_alpha is not None
    return best_alpha, curve


def format_report(counts_by_system: dict[str, EvalCounts], fmt: str = "table") -> str:
    """Render per-system counts and simplification gain as TSV or aligned text."""
    header = ["system", "S", "F", "E", "N", "U", "SG"]
    rows = []
    for system_id in sorted(counts_by_system):
        c = counts_by_system[system_id]
        gain = simplification_gain(c)
        rows.append([system_id, str(c.s), str(c.f), str(c.e), str(c.n), str(c.u), f"{gain:.2f}"])
    if fmt == "tsv":
        lines = ["\t".join(header)] + ["\t".join(row) for row in rows]
        return "\n".join(lines) + "\n"
    if fmt != "table":
        raise ValueError(f"unknown report format {fmt!r}")
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows else len(header[i]) for i in range(len(header))]
    lines = [
        "  ".join(h.ljust(widths[i]) if i == 0 else h.rjust(widths[i]) for i, h in enumerate(header))
    ]
    for row in rows:
        lines.append(
            "  ".join(cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i]) for i, cell in enumerate(row))
        )
    return "\n".join(lines) + "\n"
