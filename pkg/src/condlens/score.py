"""Association scores over the post corpus, and the opinion-change metrics.

PMI uses post-level co-occurrence counts with add-one smoothing and a
minimum co-occurrence threshold; category scores average word PMIs over the
whole category word list.  Bubble weights and body-part salience both use a
within-kind tf-idf with a smoothed idf, so a concept mentioned under every
condition still keeps a positive weight.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from ._text import normalize_term
from .extract import MentionTally, Post, tokenize
from .lexicons import PLUTCHIK_CATEGORIES, BodyLexicon, ConceptKind, EmotionLexicon


class EmptyCorpus(Exception):
    """Raised when association scores are requested over zero posts."""


class OutOfRange(Exception):
    def __init__(self, value: int):
        super().__init__(f"Likert value {value} outside [-3, +3]")
        self.value = value


class NoSamples(Exception):
    def __init__(self, statement_id: str):
        super().__init__(f"no samples for statement {statement_id!r}")
        self.statement_id = statement_id


@dataclass(frozen=True)
class PmiConfig:
    """Knobs for the association score.  Defaults: post-level counting is
    fixed in the counts builder; smoothing add-one; words below ``min_count``
    co-occurrences score 0; negative scores are kept."""

    min_count: int = 5
    add_one_smoothing: bool = True
    clamp_nonnegative: bool = False


DEFAULT_PMI = PmiConfig()


@dataclass
class CorpusCounts:
    """Post-level occurrence counts behind PMI.

    ``n_posts`` is the total corpus size N; ``posts_per_condition[d]`` the
    number of posts collected under condition d; ``word_posts[w]`` the number
    of posts containing word w at least once; ``word_condition_posts[w, d]``
    the number of condition-d posts containing w.
    """

    n_posts: int
    posts_per_condition: dict[str, int]
    word_posts: dict[str, int]
    word_condition_posts: dict[tuple[str, str], int]

    @classmethod
    def from_posts(
        cls, posts: Sequence[Post], vocabulary: Iterable[str] | None = None
    ) -> "CorpusCounts":
        """Build counts over a corpus; ``vocabulary`` (normalized unigrams)
        restricts which words are counted."""
        vocab = frozenset(vocabulary) if vocabulary is not None else None
        per_condition: Counter[str] = Counter()
        word_posts: Counter[str] = Counter()
        word_condition: Counter[tuple[str, str]] = Counter()
        for post in posts:
            per_condition[post.condition_id] += 1
            words = {tok for tok, _, _ in tokenize(post.text)}
            if vocab is not None:
                words &= vocab
            for word in words:
                word_posts[word] += 1
                word_condition[(word, post.condition_id)] += 1
        return cls(
            n_posts=len(posts),
            posts_per_condition=dict(per_condition),
            word_posts=dict(word_posts),
            word_condition_posts=dict(word_condition),
        )

    def check(self) -> None:
        """Assert the count identities (used by tests and bundle validation)."""
        assert sum(self.posts_per_condition.values()) == self.n_posts
        for (word, condition), c_wd in self.word_condition_posts.items():
            assert 0 <= c_wd <= min(
                self.word_posts.get(word, 0), self.posts_per_condition.get(condition, 0)
            )


def pmi(
    word: str,
    condition: str,
    counts: CorpusCounts,
    config: PmiConfig = DEFAULT_PMI,
) -> float:
    """Pointwise mutual information between a word and a condition.

    Returns ``log2((c_wd * N) / (c_w * c_d))`` with add-one smoothing on
    c_w, c_d and c_wd; 0.0 (not an error) when the raw co-occurrence count
    is below ``config.min_count``.
    """
    n = counts.n_posts
    if n == 0:
        raise EmptyCorpus("cannot score over an empty corpus")
    c_wd = counts.word_condition_posts.get((word, condition), 0)
    if c_wd < config.min_count:
        return 0.0
    c_w = counts.word_posts.get(word, 0)
    c_d = counts.posts_per_condition.get(condition, 0)
    if config.add_one_smoothing:
        c_wd, c_w, c_d = c_wd + 1, c_w + 1, c_d + 1
    if c_w == 0 or c_d == 0 or c_wd == 0:
        return 0.0
    value = math.log2((c_wd * n) / (c_w * c_d))
    if config.clamp_nonnegative and value < 0.0:
        return 0.0
    return value


@dataclass(frozen=True)
class EmotionScoreSet:
    """Per-condition emotion association scores plus the display ranking
    (descending score, ties alphabetical).  All eight categories present."""

    condition_id: str
    scores: dict[str, float]
    rank: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if set(self.scores) != set(PLUTCHIK_CATEGORIES):
            raise ValueError("scores must cover exactly the 8 Plutchik categories")
        ordered = tuple(sorted(self.scores, key=lambda c: (-self.scores[c], c)))
        object.__setattr__(self, "rank", ordered)


def emotion_scores(
    condition: str,
    lexicon: EmotionLexicon,
    counts: CorpusCounts,
    config: PmiConfig = DEFAULT_PMI,
) -> EmotionScoreSet:
    """score(condition, category) = mean PMI over every word of the category
    (words absent from the corpus contribute 0)."""
    scores: dict[str, float] = {}
    for category, words in lexicon.categories.items():
        if not words:
            scores[category] = 0.0
            continue
        total = sum(pmi(word, condition, counts, config) for word in sorted(words))
        scores[category] = total / len(words)
    return EmotionScoreSet(condition_id=condition, scores=scores)


@dataclass(frozen=True)
class BubbleWeight:
    condition_id: str
    concept_id: str
    kind: ConceptKind
    label: str
    weight: float
    df: int


def tfidf_weights(
    tallies_by_condition: Mapping[str, Sequence[MentionTally]],
    n_conditions: int,
) -> list[BubbleWeight]:
    """Bubble sizes: tf within (condition, kind), idf = ln(1 + n/df) with df
    counted across conditions within the same kind.  Conditions with zero
    mentions of a kind produce no weights for it."""
    if n_conditions < 1:
        raise ValueError("n_conditions must be >= 1")
    df: Counter[tuple[str, ConceptKind]] = Counter()
    for tallies in tallies_by_condition.values():
        for tally in tallies:
            if tally.count > 0:
                df[(tally.concept_id, tally.kind)] += 1
    weights: list[BubbleWeight] = []
    for condition_id in sorted(tallies_by_condition):
        tallies = tallies_by_condition[condition_id]
        kind_totals: Counter[ConceptKind] = Counter()
        for tally in tallies:
            kind_totals[tally.kind] += tally.count
        for tally in sorted(tallies, key=lambda t: (t.kind, t.concept_id)):
            if tally.count == 0:
                continue
            tf = tally.count / kind_totals[tally.kind]
            concept_df = df[(tally.concept_id, tally.kind)]
            idf = math.log(1.0 + n_conditions / concept_df)
            weights.append(
                BubbleWeight(
                    condition_id=condition_id,
                    concept_id=tally.concept_id,
                    kind=tally.kind,
                    label=tally.label,
                    weight=tf * idf,
                    df=concept_df,
                )
            )
    return weights


@dataclass(frozen=True)
class BodyPartScore:
    condition_id: str
    zone_id: str
    weight: float


def body_scores(
    posts: Sequence[Post],
    body: BodyLexicon,
    counts: CorpusCounts | None = None,
    n_conditions: int | None = None,
) -> list[BodyPartScore]:
    """Body-part salience per condition: each part is a pseudo-concept whose
    count is the sum of its words' post-level counts, weighted with the same
    within-kind tf-idf as the bubbles."""
    if counts is None:
        counts = CorpusCounts.from_posts(posts, vocabulary=body.words)
    conditions = sorted(counts.posts_per_condition)
    if n_conditions is None:
        n_conditions = len(conditions)
    if n_conditions == 0:
        return []
    part_counts: dict[str, dict[str, int]] = {d: {} for d in conditions}
    for condition in conditions:
        for part, words in body.parts.items():
            total = sum(
                counts.word_condition_posts.get((word, condition), 0) for word in words
            )
            if total > 0:
                part_counts[condition][part] = total
    df: Counter[str] = Counter()
    for condition in conditions:
        for part in part_counts[condition]:
            df[part] += 1
    scores: list[BodyPartScore] = []
    for condition in conditions:
        total = sum(part_counts[condition].values())
        if total == 0:
            continue
        for part in sorted(part_counts[condition]):
            tf = part_counts[condition][part] / total
            idf = math.log(1.0 + n_conditions / df[part])
            scores.append(
                BodyPartScore(
                    condition_id=condition,
                    zone_id=body.zone_ids[part],
                    weight=tf * idf,
                )
            )
    return scores


# --- opinion-change metrics (survey study utilities) -----------------------

STATEMENT_IDS = ("S1", "S2", "S3", "S4", "S5", "S6")
OPINION_BUCKETS = ("NP", "NWP", "PP")


@dataclass(frozen=True)
class OpinionSample:
    """One participant's before/after agreement with one statement, on the
    7-point Likert scale from strongly disagree (-3) to strongly agree (+3)."""

    statement_id: str
    before: int
    after: int

    def __post_init__(self):
        if self.statement_id not in STATEMENT_IDS:
            raise ValueError(f"unknown statement id {self.statement_id!r}")
        for value in (self.before, self.after):
            if not -3 <= value <= 3:
                raise OutOfRange(value)


def bucket(likert: int) -> str:
    """Opinion bucket: NP for {-3,-2}, NWP for {-1,0,+1}, PP for {+2,+3}."""
    if not isinstance(likert, int) or isinstance(likert, bool):
        raise OutOfRange(likert)
    if likert in (-3, -2):
        return "NP"
    if likert in (-1, 0, 1):
        return "NWP"
    if likert in (2, 3):
        return "PP"
    raise OutOfRange(likert)


def _statement_samples(
    samples: Sequence[OpinionSample], statement: str
) -> list[OpinionSample]:
    selected = [s for s in samples if s.statement_id == statement]
    if not selected:
        raise NoSamples(statement)
    return selected


def persuasion_likelihood(
    samples: Sequence[OpinionSample], statement: str
) -> tuple[Fraction, Fraction, Fraction]:
    """(dNP, dNWP, dPP): change in the share of each opinion bucket after the
    intervention.  Returned as exact rationals so dNP + dNWP + dPP == 0
    holds identically (binary floats cannot even represent a 10% shift)."""
    selected = _statement_samples(samples, statement)
    n = len(selected)
    before: Counter[str] = Counter(bucket(s.before) for s in selected)
    after: Counter[str] = Counter(bucket(s.after) for s in selected)
    deltas = tuple(Fraction(after[b] - before[b], n) for b in OPINION_BUCKETS)
    return deltas  # type: ignore[return-value]


def average_opinion_change(samples: Sequence[OpinionSample], statement: str) -> Fraction:
    """Mean per-participant (after - before) for one statement."""
    selected = _statement_samples(samples, statement)
    return Fraction(sum(s.after - s.before for s in selected), len(selected))


def opinion_table(
    samples: Sequence[OpinionSample],
) -> list[dict[str, float | int | str]]:
    """Per-statement rows: bucket share deltas and average opinion change,
    for the statements present in the sample set."""
    rows = []
    present = [sid for sid in STATEMENT_IDS if any(s.statement_id == sid for s in samples)]
    for sid in present:
        d_np, d_nwp, d_pp = persuasion_likelihood(samples, sid)
        rows.append(
            {
                "statement_id": sid,
                "n": sum(1 for s in samples if s.statement_id == sid),
                "delta_np": float(d_np),
                "delta_nwp": float(d_nwp),
                "delta_pp": float(d_pp),
                "average_change": float(average_opinion_change(samples, sid)),
            }
        )
    return rows
