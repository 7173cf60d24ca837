"""Ontology record parsing and phrase-table construction.

Concept labels drawn from several vocabularies are merged into groups of
interchangeable phrases: any two concepts that share a normalized label are
taken to mean the same thing, and the union of their labels becomes one
alternative group. Groups that end up with fewer than two distinct labels
offer no substitution and are dropped.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

from .textproc import tokenize

__all__ = [
    "Label",
    "ConceptRecord",
    "AlternativeGroup",
    "PhraseTable",
    "normalize_label",
    "pluralize",
    "parse_records",
    "align",
    "write_table",
    "read_table",
]

Label = tuple[str, ...]

_SIBILANT_ENDINGS = ("s", "x", "z", "ch", "sh")


@dataclass(frozen=True)
class ConceptRecord:
    """One ontology row: a concept identifier with one of its labels."""

    concept_id: str
    label: str
    source: str
    is_primary: bool
    line_no: int = 0


@dataclass(frozen=True)
class AlternativeGroup:
    """A set of interchangeable phrases with per-label source provenance."""

    group_id: int
    labels: tuple[Label, ...]
    provenance: dict[Label, tuple[str, ...]] = field(
        default_factory=dict, compare=False, repr=False
    )


@dataclass
class PhraseTable:
    """Alternative groups plus an exact-match index over their labels."""

    groups: list[AlternativeGroup]
    index: dict[Label, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.index:
            for group in self.groups:
                for label in group.labels:
                    if label in self.index:
                        raise ValueError(
                            f"label {' '.join(label)!r} appears in more than one group"
                        )
                    self.index[label] = group.group_id
        self._by_id = {g.group_id: g for g in self.groups}

    @classmethod
    def from_groups(cls, label_groups: Iterable[Iterable[str | Label]]) -> "PhraseTable":
        """Build a table directly from label sets, mainly for tests and tools."""
        groups = []
        for gid, raw_labels in enumerate(label_groups):
            labels = sorted(
                {
                    normalize_label(lab) if isinstance(lab, str) else tuple(lab)
                    for lab in raw_labels
                }
            )
            if len(labels) < 2:
                raise ValueError(f"group {gid} needs at least 2 distinct labels")
            groups.append(AlternativeGroup(gid, tuple(labels)))
        return cls(groups)

    def group(self, group_id: int) -> AlternativeGroup:
        return self._by_id[group_id]

    def lookup(self, phrase: Sequence[str]) -> int | None:
        """Return the group id holding this normalized phrase, if any."""
        return self.index.get(tuple(phrase))

    def max_label_len(self) -> int:
        return max((len(label) for label in self.index), default=0)


def normalize_label(text: str) -> Label:
    """Lowercase, collapse whitespace, and split off punctuation."""
    return tuple(tok.norm for tok in tokenize(text))


def pluralize(word: str) -> str:
    """Naive plural of a single word: y -> ies, sibilant endings -> es, else -> s."""
    if word.endswith("y"):
        return word[:-1] + "ies"
    if word.endswith(_SIBILANT_ENDINGS):
        return word + "es"
    return word + "s"


def _plural_variant(label: Label) -> Label | None:
    # pluralize the head (final) word only, and only when it is alphabetic
    if not label or not label[-1].isalpha():
        return None
    return label[:-1] + (pluralize(label[-1]),)


def parse_records(stream: IO[str] | Iterable[str]) -> list[ConceptRecord]:
    """Parse tab-separated ontology rows: concept_id, label, source, P|A flag.

    Blank lines and lines starting with '#' are skipped. Any malformed line
    raises ValueError naming the 1-based line number.
    """
    records: list[ConceptRecord] = []
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 4:
            raise ValueError(f"line {line_no}: expected 4 columns, got {len(cols)}")
        concept_id, label, source, flag = (c.strip() for c in cols)
        if not concept_id:
            raise ValueError(f"line {line_no}: empty concept id")
        if not label:
            raise ValueError(f"line {line_no}: empty label")
        if flag not in ("P", "A"):
            raise ValueError(f"line {line_no}: flag must be P or A, got {flag!r}")
        records.append(ConceptRecord(concept_id, label, source, flag == "P", line_no))
    return records


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict[str, str] = {}

    def add(self, key: str) -> None:
        self.parent.setdefault(key, key)

    def find(self, key: str) -> str:
        root = key
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[key] != root:
            self.parent[key], key = root, self.parent[key]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def align(records: Iterable[ConceptRecord], expand_plurals: bool = True) -> PhraseTable:
    """Merge concepts that share a normalized label into alternative groups.

    With expand_plurals on (the default), each label also contributes a naive
    plural of its head word as an additional member, generated before merging
    so plural collisions unify the concepts involved. Group ids are assigned
    in ascending order of each group's smallest concept id, so the result is
    independent of record order.
    """
    labels_by_concept: dict[str, set[Label]] = defaultdict(set)
    label_sources: dict[Label, set[str]] = defaultdict(set)
    for rec in records:
        base = normalize_label(rec.label)
        if not base:
            continue
        variants = {base}
        if expand_plurals:
            plural = _plural_variant(base)
            if plural:
                variants.add(plural)
        for variant in variants:
            labels_by_concept[rec.concept_id].add(variant)
            label_sources[variant].add(rec.source)

    uf = _UnionFind()
    concepts_by_label: dict[Label, list[str]] = defaultdict(list)
    for concept_id, labels in labels_by_concept.items():
        uf.add(concept_id)
        for label in labels:
            concepts_by_label[label].append(concept_id)
    for members in concepts_by_label.values():
        first = members[0]
        for other in members[1:]:
            uf.union(first, other)

    clusters: dict[str, list[str]] = defaultdict(list)
    for concept_id in labels_by_concept:
        clusters[uf.find(concept_id)].append(concept_id)

    keyed = []
    for members in clusters.values():
        labels = sorted({lab for cid in members for lab in labels_by_concept[cid]})
        if len(labels) < 2:
            continue
        keyed.append((min(members), labels))
    keyed.sort(key=lambda item: item[0])

    groups = [
        AlternativeGroup(
            gid,
            tuple(labels),
            {lab: tuple(sorted(label_sources[lab])) for lab in labels},
        )
        for gid, (_, labels) in enumerate(keyed)
    ]
    return PhraseTable(groups)


def write_table(table: PhraseTable, stream: IO[str]) -> None:
    """Write group_id<TAB>label rows, sorted by group id then label."""
    for group in sorted(table.groups, key=lambda g: g.group_id):
        for joined in sorted(" ".join(lab) for lab in group.labels):
            stream.write(f"{group.group_id}\t{joined}\n")


def read_table(stream: IO[str] | Iterable[str]) -> PhraseTable:
    """Read a phrase-table file produced by write_table."""
    labels_by_group: dict[int, set[Label]] = defaultdict(set)
    for line_no, raw in enumerate(stream, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"line {line_no}: expected 2 columns, got {len(cols)}")
        try:
            group_id = int(cols[0])
        except ValueError:
            raise ValueError(f"line {line_no}: bad group id {cols[0]!r}") from None
        label = tuple(cols[1].split())
        if not label:
            raise ValueError(f"line {line_no}: empty label")
        labels_by_group[group_id].add(label)
    groups = []
    for group_id in sorted(labels_by_group):
        labels = sorted(labels_by_group[group_id])
        if len(labels) < 2:
            raise ValueError(f"group {group_id} has fewer than 2 labels")
        groups.append(AlternativeGroup(group_id, tuple(labels)))
    return PhraseTable(groups)
