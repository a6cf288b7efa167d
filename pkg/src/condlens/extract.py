"""Mention extraction: tokenize posts, link symptom/drug mentions to the
terminology, and tally them as expected or emerging per condition.

The extractor seam is pluggable (:class:`MentionExtractor`); the shipped
implementation is a lexicon matcher that tries exact synonym matches over
token n-grams first and falls back to a conservative one-edit fuzzy match
for longer tokens.  Overlapping candidate spans are resolved longest-first,
then leftmost, then by smallest concept id, which makes extraction
deterministic and independent of scan order.
"""

from __future__ import annotations

import json
import logging
from collections import Counter
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Protocol, Sequence

from ._text import nfc_lower, token_spans
from .lexicons import ConceptKind, ConditionSpec, Terminology

logger = logging.getLogger(__name__)

DEFAULT_MAX_NGRAM = 5
FUZZY_MIN_TOKEN_LEN = 5

EXTRACTABLE_KINDS = (ConceptKind.SYMPTOM, ConceptKind.DRUG)


class DuplicatePostId(Exception):
    def __init__(self, post_id: str):
        super().__init__(f"duplicate post id {post_id!r}")
        self.post_id = post_id


@dataclass(frozen=True)
class Post:
    post_id: str
    condition_id: str
    text: str
    created_at: datetime


@dataclass(frozen=True)
class MentionSpan:
    """One linked mention.  Offsets index the normalized post text and
    ``surface == normalize_text(post.text)[start:end]``."""

    post_id: str
    start: int
    end: int
    surface: str
    concept_id: str
    kind: ConceptKind
    match_mode: str  # "exact" | "fuzzy"


@dataclass(frozen=True)
class MentionTally:
    condition_id: str
    concept_id: str
    kind: ConceptKind
    count: int
    label: str  # "expected" | "emerging"


def normalize_text(text: str) -> str:
    """Normalization applied to post text before tokenizing; mention offsets
    index this string."""
    return nfc_lower(text)


def tokenize(text: str) -> list[tuple[str, int, int]]:
    """Tokens (maximal runs of letters/digits/hyphens) of the normalized
    text, with offsets into it."""
    return token_spans(normalize_text(text))


def within_one_edit(a: str, b: str) -> bool:
    """Damerau-Levenshtein distance(a, b) <= 1, decided without building the
    full DP table (equal / one substitution / adjacent transposition / one
    insertion or deletion)."""
    if a == b:
        return True
    la, lb = len(a), len(b)
    if abs(la - lb) > 1:
        return False
    if la == lb:
        first = -1
        second = -1
        for i in range(la):
            if a[i] != b[i]:
                if first < 0:
                    first = i
                elif second < 0:
                    second = i
                else:
                    return False
        if second < 0:
            return True  # single substitution
        return (
            second == first + 1 and a[first] == b[second] and a[second] == b[first]
        )
    if la > lb:
        a, b = b, a
        la, lb = lb, la
    i = 0
    while i < la and a[i] == b[i]:
        i += 1
    return a[i:] == b[i + 1 :]


def _fuzzy_tokens_match(text_tokens: Sequence[str], syn_tokens: Sequence[str]) -> bool:
    """Token-wise fuzzy rule: every token pair is equal, or both tokens are
    >= FUZZY_MIN_TOKEN_LEN chars and within one edit."""
    if len(text_tokens) != len(syn_tokens):
        return False
    for t, s in zip(text_tokens, syn_tokens):
        if t == s:
            continue
        if len(t) < FUZZY_MIN_TOKEN_LEN or len(s) < FUZZY_MIN_TOKEN_LEN:
            return False
        if not within_one_edit(t, s):
            return False
    return True


class MentionExtractor(Protocol):
    """Anything that turns a post into linked mention spans.  The deployed
    implementation is :class:`LexiconMatcher`; model-based extractors plug in
    behind the same call."""

    def extract(self, post: Post) -> list[MentionSpan]: ...


@dataclass(frozen=True)
class _Candidate:
    start: int
    end: int
    concept_id: str
    kind: ConceptKind
    match_mode: str


class LexiconMatcher:
    """Terminology-backed matcher over token n-grams (up to ``max_ngram``).

    For each n-gram, exact synonym lookups (symptom then drug index) run
    first; fuzzy candidates are considered only when the n-gram has no exact
    match of any kind.  Candidate spans are then resolved globally:
    longest span wins, ties broken leftmost, then smallest concept id.
    """

    def __init__(
        self,
        terminology: Terminology,
        max_ngram: int = DEFAULT_MAX_NGRAM,
        fuzzy: bool = True,
    ):
        if max_ngram < 1:
            raise ValueError("max_ngram must be >= 1")
        self.terminology = terminology
        self.max_ngram = max_ngram
        self.fuzzy = fuzzy
        # synonyms bucketed by token count for the fuzzy scan
        self._fuzzy_pool: dict[int, list[tuple[tuple[str, ...], str, ConceptKind]]] = {}
        for kind in EXTRACTABLE_KINDS:
            for synonym, concept in terminology.synonym_index(kind).items():
                toks = tuple(synonym.split(" "))
                self._fuzzy_pool.setdefault(len(toks), []).append(
                    (toks, concept.id, kind)
                )
        for pool in self._fuzzy_pool.values():
            pool.sort(key=lambda entry: (entry[1], entry[0]))
        # n-gram key -> matches; shared read-only after warmup, GIL-safe
        self._memo: dict[str, tuple[tuple[str, ConceptKind, str], ...]] = {}

    def _match_ngram(self, key: str) -> tuple[tuple[str, ConceptKind, str], ...]:
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        matches: list[tuple[str, ConceptKind, str]] = []
        for kind in EXTRACTABLE_KINDS:
            concept = self.terminology.synonym_index(kind).get(key)
            if concept is not None:
                matches.append((concept.id, kind, "exact"))
        if not matches and self.fuzzy:
            toks = tuple(key.split(" "))
            if any(len(t) >= FUZZY_MIN_TOKEN_LEN for t in toks):
                seen: set[tuple[str, ConceptKind]] = set()
                for syn_toks, concept_id, kind in self._fuzzy_pool.get(len(toks), ()):
                    if (concept_id, kind) in seen:
                        continue
                    if _fuzzy_tokens_match(toks, syn_toks):
                        matches.append((concept_id, kind, "fuzzy"))
                        seen.add((concept_id, kind))
        result = tuple(matches)
        self._memo[key] = result
        return result

    def extract(self, post: Post) -> list[MentionSpan]:
        text = normalize_text(post.text)
        tokens = token_spans(text)
        candidates: list[_Candidate] = []
        n = len(tokens)
        for i in range(n):
            for length in range(min(self.max_ngram, n - i), 0, -1):
                key = " ".join(tokens[k][0] for k in range(i, i + length))
                for concept_id, kind, mode in self._match_ngram(key):
                    candidates.append(
                        _Candidate(tokens[i][1], tokens[i + length - 1][2], concept_id, kind, mode)
                    )
        chosen = resolve_overlaps(candidates)
        return [
            MentionSpan(
                post_id=post.post_id,
                start=c.start,
                end=c.end,
                surface=text[c.start : c.end],
                concept_id=c.concept_id,
                kind=c.kind,
                match_mode=c.match_mode,
            )
            for c in chosen
        ]


def extract_mentions(
    post: Post, terminology: Terminology, max_ngram: int = DEFAULT_MAX_NGRAM
) -> list[MentionSpan]:
    """One-shot extraction.  Batch callers should hold a
    :class:`LexiconMatcher` instead to reuse its n-gram cache."""
    return LexiconMatcher(terminology, max_ngram=max_ngram).extract(post)


def resolve_overlaps(candidates: Iterable[_Candidate]) -> list[_Candidate]:
    """Longest span first, then leftmost, then smallest concept id; accepted
    spans never overlap.  Returns spans sorted by start offset."""
    ordered = sorted(
        candidates, key=lambda c: (-(c.end - c.start), c.start, c.concept_id)
    )
    chosen: list[_Candidate] = []
    for cand in ordered:
        if all(cand.end <= kept.start or cand.start >= kept.end for kept in chosen):
            chosen.append(cand)
    chosen.sort(key=lambda c: c.start)
    return chosen


def tally_condition(
    posts: Sequence[Post],
    spec: ConditionSpec,
    terminology: Terminology,
    extractor: MentionExtractor | None = None,
    per_post_binary: bool = False,
) -> list[MentionTally]:
    """Count extracted mentions per (concept, kind) and label each tally
    expected or emerging against the condition's expected sets.

    ``per_post_binary`` counts each concept at most once per post instead of
    raw occurrence counts.
    """
    for post in posts:
        if post.condition_id != spec.condition_id:
            raise ValueError(
                f"post {post.post_id!r} belongs to {post.condition_id!r}, "
                f"not {spec.condition_id!r}"
            )
    if extractor is None:
        extractor = LexiconMatcher(terminology)
    counts: Counter[tuple[str, ConceptKind]] = Counter()
    for post in posts:
        spans = extractor.extract(post)
        keys = ((span.concept_id, span.kind) for span in spans)
        if per_post_binary:
            counts.update(set(keys))
        else:
            counts.update(keys)
    return _tallies_from_counts(counts, spec)


def _tallies_from_counts(
    counts: Counter[tuple[str, ConceptKind]], spec: ConditionSpec
) -> list[MentionTally]:
    tallies = []
    for (concept_id, kind), count in sorted(counts.items()):
        label = "expected" if concept_id in spec.expected_for(kind) else "emerging"
        tallies.append(
            MentionTally(
                condition_id=spec.condition_id,
                concept_id=concept_id,
                kind=kind,
                count=count,
                label=label,
            )
        )
    return tallies


def merge_tallies(parts: Iterable[Sequence[MentionTally]], spec: ConditionSpec) -> list[MentionTally]:
    """Merge per-partition tallies of the same condition.  Associative and
    commutative, so results are independent of how posts were partitioned."""
    counts: Counter[tuple[str, ConceptKind]] = Counter()
    for tallies in parts:
        for tally in tallies:
            if tally.condition_id != spec.condition_id:
                raise ValueError("cannot merge tallies across conditions")
            counts[(tally.concept_id, tally.kind)] += tally.count
    return _tallies_from_counts(counts, spec)


def load_posts(
    path: str | Path,
    subreddit_map: dict[str, str] | None = None,
) -> tuple[list[Post], list[tuple[int, str]]]:
    """Read a JSON-Lines post corpus.

    Each line carries ``post_id``, ``text``, ``created_at`` and either a
    ``condition_id`` or a ``subreddit`` resolved through ``subreddit_map``.
    Returns (posts, rejects) where rejects are (line_no, reason) pairs for
    rows that were skipped; a duplicate post id aborts the load.
    """
    posts: list[Post] = []
    rejects: list[tuple[int, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                raw = json.loads(line)
            except json.JSONDecodeError as exc:
                rejects.append((line_no, f"bad json: {exc.msg}"))
                continue
            post_id = raw.get("post_id")
            if not post_id:
                rejects.append((line_no, "missing post_id"))
                continue
            if post_id in seen:
                raise DuplicatePostId(post_id)
            condition_id = raw.get("condition_id")
            if condition_id is None and subreddit_map is not None:
                condition_id = subreddit_map.get(raw.get("subreddit", ""))
            if condition_id is None:
                rejects.append((line_no, "no condition_id and unmapped subreddit"))
                continue
            text = raw.get("text", "")
            if not normalize_text(text).strip():
                rejects.append((line_no, "empty text after normalization"))
                continue
            created = raw.get("created_at", "1970-01-01T00:00:00+00:00")
            try:
                created_at = datetime.fromisoformat(created.replace("Z", "+00:00"))
            except ValueError:
                rejects.append((line_no, f"bad created_at {created!r}"))
                continue
            if created_at.tzinfo is None:
                created_at = created_at.replace(tzinfo=timezone.utc)
            seen.add(post_id)
            posts.append(Post(post_id, condition_id, text, created_at))
    if rejects:
        logger.warning("%s: skipped %d malformed post lines", path, len(rejects))
    return posts, rejects
