"""Independent reference implementations the fast paths are checked against.

Everything here deliberately takes the dumb route: full DP matrices, exhaustive
enumeration, exact rational arithmetic, per-patient simulation.  None of it
shares code with the library implementations it verifies.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import groupby

from condlens._text import token_spans
from condlens.extract import MentionSpan, normalize_text
from condlens.lexicons import ConceptKind, Terminology


def damerau_levenshtein(a: str, b: str) -> int:
    """Restricted Damerau-Levenshtein (optimal string alignment), full DP."""
    la, lb = len(a), len(b)
    dist = [[0] * (lb + 1) for _ in range(la + 1)]
    for i in range(la + 1):
        dist[i][0] = i
    for j in range(lb + 1):
        dist[0][j] = j
    for i in range(1, la + 1):
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            dist[i][j] = min(
                dist[i - 1][j] + 1,
                dist[i][j - 1] + 1,
                dist[i - 1][j - 1] + cost,
            )
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                dist[i][j] = min(dist[i][j], dist[i - 2][j - 2] + 1)
    return dist[la][lb]


def brute_force_extract(post, terminology: Terminology, max_ngram: int = 5) -> list[MentionSpan]:
    """Enumerate every (n-gram, synonym) pair over both extractable kinds,
    then resolve overlaps longer-span-first, leftmost, smallest concept id."""
    text = normalize_text(post.text)
    tokens = token_spans(text)
    synonyms = []
    for kind in (ConceptKind.SYMPTOM, ConceptKind.DRUG):
        for syn, concept in terminology.synonym_index(kind).items():
            synonyms.append((kind, syn, syn.split(" "), concept.id))
    candidates = []
    n = len(tokens)
    for i in range(n):
        for length in range(1, min(max_ngram, n - i) + 1):
            toks = [tokens[k][0] for k in range(i, i + length)]
            key = " ".join(toks)
            start, end = tokens[i][1], tokens[i + length - 1][2]
            exact, fuzzy = [], []
            for kind, syn, syn_toks, concept_id in synonyms:
                if syn == key:
                    exact.append((concept_id, kind, "exact"))
                elif len(syn_toks) == length and all(
                    t == s
                    or (len(t) >= 5 and len(s) >= 5 and damerau_levenshtein(t, s) <= 1)
                    for t, s in zip(toks, syn_toks)
                ):
                    fuzzy.append((concept_id, kind, "fuzzy"))
            seen = set()
            for concept_id, kind, mode in exact if exact else fuzzy:
                if (concept_id, kind) in seen:
                    continue
                seen.add((concept_id, kind))
                candidates.append((start, end, concept_id, kind, mode))
    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0], c[2]))
    chosen: list[tuple] = []
    for cand in candidates:
        if all(cand[1] <= kept[0] or cand[0] >= kept[1] for kept in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda c: c[0])
    return [
        MentionSpan(post.post_id, c[0], c[1], text[c[0] : c[1]], c[2], c[3], c[4])
        for c in chosen
    ]


def pmi_oracle(
    c_wd: int,
    c_w: int,
    c_d: int,
    n: int,
    min_count: int = 5,
    smoothing: bool = True,
) -> float:
    """Probability-table PMI: build the three probabilities as exact
    rationals and take log2 of the exact odds ratio."""
    if n == 0:
        raise ZeroDivisionError("empty corpus")
    if c_wd < min_count:
        return 0.0
    if smoothing:
        c_wd, c_w, c_d = c_wd + 1, c_w + 1, c_d + 1
    p_joint = Fraction(c_wd, n)
    p_w = Fraction(c_w, n)
    p_d = Fraction(c_d, n)
    return math.log2(p_joint / (p_w * p_d))


def emotion_score_oracle(counts, condition: str, words, min_count: int = 5) -> float:
    """Hand-summed category score: mean of per-word oracle PMIs."""
    values = []
    for word in words:
        c_wd = counts.word_condition_posts.get((word, condition), 0)
        c_w = counts.word_posts.get(word, 0)
        c_d = counts.posts_per_condition.get(condition, 0)
        values.append(pmi_oracle(c_wd, c_w, c_d, counts.n_posts, min_count))
    return math.fsum(values) / len(values)


def apportion_oracle(items_by_practice, patient_rows):
    """Per-patient simulation: every registered patient of a practice gets
    items / total_patients; borough totals sum patient shares."""
    per_practice: dict[str, list] = {}
    for row in patient_rows:
        per_practice.setdefault(row.practice_code, []).append(row)
    borough: dict[str, float] = {}
    unallocated = 0.0
    for practice, items in items_by_practice.items():
        rows = per_practice.get(practice, [])
        total = sum(r.patients for r in rows)
        if total <= 0:
            unallocated += float(items)
            continue
        per_patient = items / total
        for row in rows:
            borough[row.lsoa_code] = borough.get(row.lsoa_code, 0.0) + per_patient * row.patients
    return borough, unallocated


def in_memory_practice_items(records, index, condition_id) -> dict[str, int]:
    """Reference aggregation: materialize, sort, group, sum."""
    rows = [
        (r.practice_code, r.items)
        for r in records
        if condition_id in index.conditions_for_bnf(r.bnf_code)
    ]
    rows.sort(key=lambda t: t[0])
    return {
        practice: sum(items for _, items in group)
        for practice, group in groupby(rows, key=lambda t: t[0])
    }


def tfidf_oracle(count: int, kind_total: int, df: int, n_conditions: int) -> float:
    return (count / kind_total) * math.log(1.0 + n_conditions / df)
