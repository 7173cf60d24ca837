"""Corpus word-frequency table and the frequency familiarity score."""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

__all__ = ["FrequencyTable", "load_table", "build_table", "wf"]

log = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-10


@dataclass
class FrequencyTable:
    """Relative word frequencies; missing words are treated as probability 0."""

    probs: dict[str, float] = field(default_factory=dict)
    epsilon: float = DEFAULT_EPSILON


def load_table(stream: IO[str] | Iterable[str], epsilon: float = DEFAULT_EPSILON) -> FrequencyTable:
    """Load word<TAB>probability rows; keys are lowercased, later duplicates win."""
    probs: dict[str, float] = {}
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"line {line_no}: expected 2 columns, got {len(cols)}")
        word = cols[0].strip().lower()
        if not word:
            raise ValueError(f"line {line_no}: empty word")
        try:
            prob = float(cols[1])
        except ValueError:
            raise ValueError(f"line {line_no}: bad probability {cols[1]!r}") from None
        if not 0.0 < prob <= 1.0:
            raise ValueError(f"line {line_no}: probability {prob} outside (0, 1]")
        if word in probs:
            log.warning("duplicate frequency entry for %r at line %d, keeping the later value", word, line_no)
        probs[word] = prob
    return FrequencyTable(probs, epsilon)


def build_table(corpus: IO[str] | Iterable[str], epsilon: float = DEFAULT_EPSILON) -> FrequencyTable:
    """Count whitespace-separated words and normalize counts into probabilities."""
    counts: Counter[str] = Counter()
    for line in corpus:
        counts.update(w.lower() for w in line.split())
    total = sum(counts.values())
    if total == 0:
        raise ValueError("empty corpus")
    return FrequencyTable({w: c / total for w, c in counts.items()}, epsilon)


def wf(term: Sequence[str], table: FrequencyTable) -> float:
    """Familiarity of a phrase: the log frequency of its rarest word.

    Computed as min over words of ln(P(word) + epsilon), so a phrase is only
    as familiar as its least common word and unknown words pin the score to
    ln(epsilon).
    """
    if not term:
        raise ValueError("empty term")
    return min(math.log(table.probs.get(w.lower(), 0.0) + table.epsilon) for w in term)
