"""Backoff n-gram language model with interpolated absolute discounting.

Probabilities are estimated by subtracting a fixed discount from every
observed count and giving the freed mass to the next-lower order, ending in
a uniform distribution over the predicted vocabulary. The model is stored in
backoff form: explicit probabilities for observed n-grams, a backoff weight
per observed context, and the standard ARPA text format on disk.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import IO, Iterable, Mapping, Protocol, Sequence

__all__ = [
    "START",
    "STOP",
    "UNK",
    "LmScorer",
    "NgramModel",
    "LookupScorer",
    "train",
    "save_arpa",
    "load_arpa",
    "load_scorer",
]

START = "<s>"
STOP = "</s>"
UNK = "<unk>"

_LN10 = math.log(10.0)
# conventional ARPA placeholder for entries that exist only to carry a backoff weight
_PLACEHOLDER_LOG10 = -99.0


class LmScorer(Protocol):
    """Anything that maps a token sequence to a mean log-probability."""

    def score(self, tokens: Sequence[str]) -> float:
        ...


@dataclass
class NgramModel:
    """Backoff model: natural-log probs per n-gram, natural-log backoff per context."""

    order: int
    probs: dict[tuple[str, ...], float]
    backoffs: dict[tuple[str, ...], float]
    vocab: frozenset[str]

    @property
    def predicted_vocab(self) -> frozenset[str]:
        """Words the model can emit: everything in vocab except the start symbol."""
        return self.vocab - {START}

    def logprob(self, context: Sequence[str], word: str) -> float:
        """Natural-log P(word | context), backing off through shorter contexts."""
        ctx = tuple(context)
        if self.order > 1:
            ctx = ctx[-(self.order - 1) :]
        else:
            ctx = ()
        return self._logprob(ctx, word)

    def _logprob(self, ctx: tuple[str, ...], word: str) -> float:
        prob = self.probs.get(ctx + (word,))
        if prob is not None:
            return prob
        if not ctx:
            raise ValueError(f"word {word!r} not in model vocabulary")
        return self.backoffs.get(ctx, 0.0) + self._logprob(ctx[1:], word)

    def score(self, tokens: Sequence[str]) -> float:
        """Mean natural-log probability of the tokens, start-padded, no end term."""
        toks = list(tokens)
        if not toks:
            raise ValueError("cannot score empty sequence")
        mapped = []
        for tok in toks:
            if tok in self.vocab:
                mapped.append(tok)
            elif UNK in self.vocab:
                mapped.append(UNK)
            else:
                raise ValueError(f"word {tok!r} not in model vocabulary and model has no {UNK}")
        history = [START] * (self.order - 1)
        logps = []
        for word in mapped:
            ctx = tuple(history[-(self.order - 1) :]) if self.order > 1 else ()
            logps.append(self._logprob(ctx, word))
            history.append(word)
        return math.fsum(logps) / len(logps)


class LookupScorer:
    """LmScorer serving fixed scores keyed by the space-joined token sequence."""

    def __init__(self, scores: Mapping[str, float], default: float | None = None) -> None:
        self.scores = dict(scores)
        self.default = default

    def score(self, tokens: Sequence[str]) -> float:
        toks = list(tokens)
        if not toks:
            raise ValueError("cannot score empty sequence")
        key = " ".join(toks)
        if key in self.scores:
            return self.scores[key]
        if self.default is not None:
            return self.default
        raise ValueError(f"no stored score for {key!r}")

    @classmethod
    def load(cls, stream: IO[str] | Iterable[str], default: float | None = None) -> "LookupScorer":
        """Load sentence<TAB>score rows."""
        scores: dict[str, float] = {}
        for line_no, raw in enumerate(stream, start=1):
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 2:
                raise ValueError(f"line {line_no}: expected 2 columns, got {len(cols)}")
            try:
                scores[cols[0]] = float(cols[1])
            except ValueError:
                raise ValueError(f"line {line_no}: bad score {cols[1]!r}") from None
        return cls(scores, default)


def train(
    corpus: Iterable[str],
    order: int = 3,
    discount: float = 0.75,
    min_count: int = 2,
) -> NgramModel:
    """Train an interpolated absolute-discounting model from one sentence per line.

    Words seen fewer than min_count times are replaced by the unknown symbol
    before counting. Each sentence is padded with order-1 start symbols and one
    end symbol; for every predicted position, counts are collected at all
    orders so lower-order distributions come from the same events.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if not 0.0 < discount < 1.0:
        raise ValueError("discount must be in (0, 1)")
    if min_count < 1:
        raise ValueError("min_count must be >= 1")

    sentences: list[list[str]] = []
    raw_counts: Counter[str] = Counter()
    for line in corpus:
        words = line.split()
        if not words:
            continue
        sentences.append(words)
        raw_counts.update(words)
    if not sentences:
        raise ValueError("no training data")

    keep = {w for w, c in raw_counts.items() if c >= min_count}
    vocab = keep | {START, STOP, UNK}

    counts: list[Counter[tuple[str, ...]]] = [Counter() for _ in range(order + 1)]
    for words in sentences:
        mapped = [w if w in keep else UNK for w in words]
        padded = [START] * (order - 1) + mapped + [STOP]
        for i in range(order - 1, len(padded)):
            for k in range(1, order + 1):
                counts[k][tuple(padded[i - k + 1 : i + 1])] += 1

    ctx_totals: list[dict[tuple[str, ...], int]] = [defaultdict(int) for _ in range(order + 1)]
    ctx_types: list[dict[tuple[str, ...], int]] = [defaultdict(int) for _ in range(order + 1)]
    for k in range(1, order + 1):
        for gram, count in counts[k].items():
            ctx = gram[:-1]
            ctx_totals[k][ctx] += count
            ctx_types[k][ctx] += 1

    predicted = sorted(vocab - {START})
    uniform = 1.0 / len(predicted)

    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}

    total = ctx_totals[1][()]
    lam = discount * ctx_types[1][()] / total
    for word in predicted:
        count = counts[1].get((word,), 0)
        prob = max(count - discount, 0.0) / total + lam * uniform
        probs[(word,)] = math.log(prob)
    probs[(START,)] = _PLACEHOLDER_LOG10 * _LN10

    for k in range(2, order + 1):
        for gram, count in counts[k].items():
            ctx = gram[:-1]
            ctx_total = ctx_totals[k][ctx]
            lam = discount * ctx_types[k][ctx] / ctx_total
            lower = math.exp(probs[gram[1:]])
            prob = max(count - discount, 0.0) / ctx_total + lam * lower
            probs[gram] = math.log(prob)
        for ctx, ctx_total in ctx_totals[k].items():
            lam = discount * ctx_types[k][ctx] / ctx_total
            backoffs[ctx] = math.log(lam)
            if ctx not in probs:
                # pure start-padding contexts are never predicted themselves,
                # but still need an entry to carry their backoff weight
                probs[ctx] = _PLACEHOLDER_LOG10 * _LN10

    return NgramModel(order, probs, backoffs, frozenset(vocab))


def save_arpa(model: NgramModel, stream: IO[str]) -> None:
    """Write the model in ARPA text format (log10, tab-separated)."""
    by_order: dict[int, list[tuple[str, ...]]] = defaultdict(list)
    for gram in model.probs:
        by_order[len(gram)].append(gram)
    stream.write("\\data\\\n")
    for k in range(1, model.order + 1):
        stream.write(f"ngram {k}={len(by_order.get(k, []))}\n")
    for k in range(1, model.order + 1):
        stream.write(f"\n\\{k}-grams:\n")
        for gram in sorted(by_order.get(k, [])):
            log10_prob = model.probs[gram] / _LN10
            line = f"{log10_prob!r}\t{' '.join(gram)}"
            backoff = model.backoffs.get(gram)
            if backoff is not None:
                line += f"\t{backoff / _LN10!r}"
            stream.write(line + "\n")
    stream.write("\n\\end\\\n")


def load_arpa(stream: IO[str] | Iterable[str]) -> NgramModel:
    """Parse an ARPA file back into a model; errors name the offending line."""
    lines = [raw.rstrip("\r\n") for raw in stream]
    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines) or lines[i].strip() != "\\data\\":
        raise ValueError(f"line {i + 1}: missing \\data\\ header")
    i += 1
    declared: dict[int, int] = {}
    while i < len(lines) and lines[i].strip().startswith("ngram "):
        body = lines[i].strip()[len("ngram ") :]
        try:
            order_text, count_text = body.split("=", 1)
            declared[int(order_text)] = int(count_text)
        except ValueError:
            raise ValueError(f"line {i + 1}: bad ngram count declaration {lines[i]!r}") from None
        i += 1
    if not declared:
        raise ValueError(f"line {i + 1}: no ngram counts declared")
    max_order = max(declared)
    if sorted(declared) != list(range(1, max_order + 1)):
        raise ValueError("ngram count declarations must cover orders 1..N")

    probs: dict[tuple[str, ...], float] = {}
    backoffs: dict[tuple[str, ...], float] = {}
    for k in range(1, max_order + 1):
        while i < len(lines) and not lines[i].strip():
            i += 1
        header = f"\\{k}-grams:"
        if i >= len(lines) or lines[i].strip() != header:
            raise ValueError(f"line {i + 1}: expected {header} section")
        i += 1
        seen = 0
        while i < len(lines):
            line = lines[i]
            if not line.strip():
                i += 1
                continue
            if line.strip().startswith("\\"):
                break
            fields = line.split("\t")
            if len(fields) not in (2, 3):
                raise ValueError(f"line {i + 1}: malformed entry, expected 2 or 3 tab-separated fields")
            try:
                log10_prob = float(fields[0])
            except ValueError:
                raise ValueError(f"line {i + 1}: bad log probability {fields[0]!r}") from None
            gram = tuple(fields[1].split(" "))
            if len(gram) != k or not all(gram):
                raise ValueError(f"line {i + 1}: expected a {k}-gram, got {fields[1]!r}")
            probs[gram] = log10_prob * _LN10
            if len(fields) == 3:
                try:
                    backoffs[gram] = float(fields[2]) * _LN10
                except ValueError:
                    raise ValueError(f"line {i + 1}: bad backoff weight {fields[2]!r}") from None
            seen += 1
            i += 1
        if seen != declared[k]:
            raise ValueError(
                f"line {i + 1}: {k}-gram count mismatch, header declares {declared[k]} but section has {seen}"
            )
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines) or lines[i].strip() != "\\end\\":
        raise ValueError(f"line {i + 1}: missing \\end\\ terminator")

    vocab = frozenset(gram[0] for gram in probs if len(gram) == 1)
    return NgramModel(max_order, probs, backoffs, vocab)


def load_scorer(path: str) -> LmScorer:
    """Load either an ARPA model or a sentence-score table, sniffing the format."""
    with open(path, encoding="utf-8") as fh:
        first = ""
        for line in fh:
            if line.strip():
                first = line.strip()
                break
    with open(path, encoding="utf-8") as fh:
        if first == "\\data\\":
            return load_arpa(fh)
        return LookupScorer.load(fh)
