"""Tokenization and greedy phrase-table span matching."""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Sequence

if TYPE_CHECKING:
    from .ontology import PhraseTable

__all__ = [
    "Token",
    "Span",
    "tokenize",
    "tokens_from_texts",
    "detokenize",
    "extract_spans",
]

_CHUNK = re.compile(r"\S+")


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


@dataclass(frozen=True)
class Token:
    """A surface token plus its lowercased form used for matching."""

    text: str
    norm: str
    char_offset: int


@dataclass(frozen=True)
class Span:
    """A phrase-table hit over the token interval [start, end)."""

    start: int
    end: int
    group_id: int
    matched: tuple[str, ...]


def _token(text: str, offset: int) -> Token:
    return Token(text, text.lower(), offset)


def tokenize(sentence: str) -> list[Token]:
    """Split on whitespace and peel leading/trailing punctuation into separate tokens.

    Interior punctuation (hyphens, decimal points, apostrophes) is left attached,
    so "x-ray" and "3.5" survive as single tokens while "otalgia." becomes two.
    """
    tokens: list[Token] = []
    for match in _CHUNK.finditer(sentence):
        chunk = match.group()
        base = match.start()
        lead = 0
        while lead < len(chunk) and _is_punct(chunk[lead]):
            tokens.append(_token(chunk[lead], base + lead))
            lead += 1
        trail = len(chunk)
        while trail > lead and _is_punct(chunk[trail - 1]):
            trail -= 1
        if trail > lead:
            tokens.append(_token(chunk[lead:trail], base + lead))
        for i in range(trail, len(chunk)):
            tokens.append(_token(chunk[i], base + i))
    return tokens


def tokens_from_texts(texts: Iterable[str]) -> list[Token]:
    """Build a token list from bare strings, assigning single-space offsets."""
    tokens: list[Token] = []
    offset = 0
    for text in texts:
        tokens.append(_token(text, offset))
        offset += len(text) + 1
    return tokens


def detokenize(items: Iterable[Token] | Iterable[str]) -> str:
    """Join tokens (or plain strings) with single spaces."""
    return " ".join(it.text if isinstance(it, Token) else it for it in items)


def extract_spans(
    tokens: Sequence[Token],
    table: "PhraseTable",
    max_len: int | None = None,
) -> list[Span]:
    """Find non-overlapping phrase-table matches, left to right, longest first.

    At each position the longest matching phrase (up to max_len tokens) wins and
    the scan resumes after it, so returned spans are disjoint and sorted.
    Matching is on lowercased token forms.
    """
    if max_len is None:
        max_len = table.max_label_len()
    norms = [t.norm for t in tokens]
    n = len(norms)
    spans: list[Span] = []
    pos = 0
    while pos < n:
        hit = None
        for length in range(min(max_len, n - pos), 0, -1):
            phrase = tuple(norms[pos : pos + length])
            group_id = table.lookup(phrase)
            if group_id is not None:
                hit = Span(pos, pos + length, group_id, phrase)
                break
        if hit is None:
            pos += 1
        else:
            spans.append(hit)
            pos = hit.end
    return spans
