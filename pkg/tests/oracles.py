"""Independent reference implementations used to cross-check the package.

These deliberately avoid the library's own code paths: plain loops, dicts,
and transitive closure instead of union-find, Counter algebra, or greedy
scanning. They are slow and obvious on purpose.
"""

from __future__ import annotations

import math


def naive_plural(word):
    if word.endswith("y"):
        return word[:-1] + "ies"
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    return word + "s"


def component_label_sets(pairs, expand_plurals=False):
    """Group concepts by repeated merging until nothing changes.

    pairs: (concept_id, label_text) tuples, labels simple space-separated
    lowercase words. Returns the set of merged label frozensets, keeping only
    components with at least two labels.
    """
    label_sets = {}
    for concept_id, text in pairs:
        words = tuple(text.lower().split())
        variants = {words}
        if expand_plurals and words and words[-1].isalpha():
            variants.add(words[:-1] + (naive_plural(words[-1]),))
        label_sets.setdefault(concept_id, set()).update(variants)

    components = [set(v) for v in label_sets.values()]
    changed = True
    while changed:
        changed = False
        for i in range(len(components)):
            for j in range(i + 1, len(components)):
                if components[i] and components[j] and components[i] & components[j]:
                    components[i] |= components[j]
                    components[j] = set()
                    changed = True
    return {frozenset(c) for c in components if len(c) >= 2}


def greedy_spans(norms, index, max_len):
    """All matches sorted by start then longest, accepted when disjoint."""
    matches = []
    for i in range(len(norms)):
        for j in range(i + 1, min(i + max_len, len(norms)) + 1):
            if tuple(norms[i:j]) in index:
                matches.append((i, j))
    matches.sort(key=lambda m: (m[0], -(m[1] - m[0])))
    accepted = []
    for i, j in matches:
        if all(j <= a or i >= b for a, b in accepted):
            accepted.append((i, j))
    return accepted


def _gram_counts(tokens, n):
    counts = {}
    for i in range(len(tokens) - n + 1):
        g = tuple(tokens[i : i + n])
        counts[g] = counts.get(g, 0) + 1
    return counts


def sari_score(source, output, references):
    """SARI on a 0..100 scale: keep F1, delete precision, add F1, each averaged
    over n-gram sizes 1..4, then averaged together."""
    s_toks = source.lower().split()
    c_toks = output.lower().split()
    r_toks = [r.lower().split() for r in references]
    numref = len(r_toks)

    keep_sum = del_sum = add_sum = 0.0
    for n in range(1, 5):
        s = _gram_counts(s_toks, n)
        c = _gram_counts(c_toks, n)
        r = {}
        for ref in r_toks:
            for g, cnt in _gram_counts(ref, n).items():
                r[g] = r.get(g, 0) + cnt

        # keep: n-grams present in both source and output, credited against refs
        keep_cand = {}
        for g in s:
            if g in c:
                keep_cand[g] = min(s[g] * numref, c[g] * numref)
        keep_good = {g: min(v, r[g]) for g, v in keep_cand.items() if g in r and min(v, r[g]) > 0}
        keep_all = {}
        for g in s:
            if g in r:
                v = min(s[g] * numref, r[g])
                if v > 0:
                    keep_all[g] = v
        p = sum(keep_good[g] / keep_cand[g] for g in keep_good) / len(keep_cand) if keep_cand else 0.0
        rr = sum(keep_good[g] / keep_all[g] for g in keep_good) / len(keep_all) if keep_all else 0.0
        keep_sum += 2 * p * rr / (p + rr) if p + rr > 0 else 0.0

        # delete: n-grams dropped from the source, precision only
        del_cand = {g: s[g] * numref - c.get(g, 0) * numref for g in s}
        del_cand = {g: v for g, v in del_cand.items() if v > 0}
        del_good = {g: v - r.get(g, 0) for g, v in del_cand.items()}
        del_good = {g: v for g, v in del_good.items() if v > 0}
        del_sum += (
            sum(del_good[g] / del_cand[g] for g in del_good) / len(del_cand) if del_cand else 0.0
        )

        # add: new n-gram types backed by the references
        add_cand = {g for g in c if g not in s}
        add_good = {g for g in add_cand if g in r}
        add_all = {g for g in r if g not in s}
        p = len(add_good) / len(add_cand) if add_cand else 0.0
        rr = len(add_good) / len(add_all) if add_all else 0.0
        add_sum += 2 * p * rr / (p + rr) if p + rr > 0 else 0.0

    return 100.0 * (keep_sum / 4 + del_sum / 4 + add_sum / 4) / 3


def bleu_score(outputs, references):
    """Corpus BLEU, 0..100, uniform weights over n=1..4, no smoothing."""
    out_toks = [o.split() for o in outputs]
    ref_toks = [r.split() for r in references]
    out_len = sum(len(t) for t in out_toks)
    ref_len = sum(len(t) for t in ref_toks)
    if out_len == 0:
        return 0.0
    precisions = []
    for n in range(1, 5):
        hit = 0
        total = 0
        for ot, rt in zip(out_toks, ref_toks):
            oc = _gram_counts(ot, n)
            rc = _gram_counts(rt, n)
            for g, cnt in oc.items():
                total += cnt
                hit += min(cnt, rc.get(g, 0))
        if total == 0 or hit == 0:
            return 0.0
        precisions.append(hit / total)
    geo = math.exp(sum(math.log(p) for p in precisions) / 4)
    bp = 1.0 if out_len > ref_len else math.exp(1 - ref_len / out_len)
    return 100.0 * bp * geo
