import math
import random
from datetime import datetime, timezone
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from condlens.extract import MentionTally, Post
from condlens.lexicons import PLUTCHIK_CATEGORIES, BodyLexicon, ConceptKind, EmotionLexicon
from condlens.score import (
    CorpusCounts,
    EmotionScoreSet,
    EmptyCorpus,
    NoSamples,
    OpinionSample,
    OutOfRange,
    PmiConfig,
    average_opinion_change,
    body_scores,
    bucket,
    emotion_scores,
    persuasion_likelihood,
    pmi,
    tfidf_weights,
)

from oracles import emotion_score_oracle, pmi_oracle, tfidf_oracle

NOW = datetime(2017, 2, 2, tzinfo=timezone.utc)


def counts_of(n, c_d, pairs):
    """CorpusCounts for a single condition 'd' plus a filler condition that
    absorbs the remaining posts, so the count identities hold."""
    word_posts = {w: c_w for w, (c_w, _) in pairs.items()}
    word_condition = {(w, "d"): c_wd for w, (_, c_wd) in pairs.items()}
    return CorpusCounts(
        n_posts=n,
        posts_per_condition={"d": c_d, "rest": n - c_d},
        word_posts=word_posts,
        word_condition_posts=word_condition,
    )


class TestPmi:
    def test_word_exclusive_to_condition(self):
        counts = counts_of(100, 10, {"w": (10, 10)})
        value = pmi("w", "d", counts)
        assert math.isclose(value, pmi_oracle(10, 10, 10, 100), rel_tol=1e-12)
        assert abs(value - 3.18) < 0.01

    def test_independent_word(self):
        counts = counts_of(100, 50, {"w": (50, 25)})
        assert abs(pmi("w", "d", counts)) < 0.05

    def test_below_min_count_scores_zero(self):
        counts = counts_of(100, 10, {"w": (10, 2)})
        assert pmi("w", "d", counts) == 0.0

    def test_empty_corpus_raises(self):
        counts = CorpusCounts(0, {}, {}, {})
        with pytest.raises(EmptyCorpus):
            pmi("w", "d", counts)

    def test_matches_probability_table_oracle(self):
        rng = random.Random(99)
        for _ in range(300):
            n = rng.randint(20, 5000)
            c_d = rng.randint(1, n)
            c_w = rng.randint(1, n)
            c_wd = rng.randint(0, min(c_w, c_d))
            counts = counts_of(n, c_d, {"w": (c_w, c_wd)})
            mine = pmi("w", "d", counts)
            ref = pmi_oracle(c_wd, c_w, c_d, n)
            assert math.isclose(mine, ref, rel_tol=1e-12, abs_tol=1e-12)

    def test_smoothing_vanishes_at_scale(self):
        rng = random.Random(7)
        for _ in range(100):
            n = rng.randint(50, 400)
            c_d = rng.randint(10, n)
            c_w = rng.randint(10, n)
            c_wd = rng.randint(1, min(c_w, c_d))
            counts = counts_of(n * 100, c_d * 100, {"w": (c_w * 100, c_wd * 100)})
            smoothed = pmi("w", "d", counts)
            plain = pmi("w", "d", counts, PmiConfig(add_one_smoothing=False))
            assert abs(smoothed - plain) < 0.02

    def test_clamp_option(self):
        counts = counts_of(100, 50, {"w": (50, 10)})
        raw = pmi("w", "d", counts, PmiConfig(min_count=1))
        assert raw < 0
        assert pmi("w", "d", counts, PmiConfig(min_count=1, clamp_nonnegative=True)) == 0.0

    def test_permuting_condition_labels_permutes_scores(self):
        counts = CorpusCounts(
            n_posts=200,
            posts_per_condition={"a": 80, "b": 120},
            word_posts={"w": 60},
            word_condition_posts={("w", "a"): 40, ("w", "b"): 20},
        )
        swapped = CorpusCounts(
            n_posts=200,
            posts_per_condition={"a": 120, "b": 80},
            word_posts={"w": 60},
            word_condition_posts={("w", "a"): 20, ("w", "b"): 40},
        )
        assert pmi("w", "a", counts) == pmi("w", "b", swapped)
        assert pmi("w", "b", counts) == pmi("w", "a", swapped)


def lexicon_with_sadness(words) -> EmotionLexicon:
    categories = {name: frozenset() for name in PLUTCHIK_CATEGORIES}
    categories["sadness"] = frozenset(words)
    return EmotionLexicon(categories)


class TestEmotionScores:
    def test_category_mean_of_word_scores(self):
        # engineered so pmi(cry)=2.0 and pmi(tear)=1.0 exactly
        counts = counts_of(128, 15, {"cry": (15, 7), "tear": (31, 7)})
        assert pmi("cry", "d", counts) == 2.0
        assert pmi("tear", "d", counts) == 1.0
        scores = emotion_scores("d", lexicon_with_sadness({"cry", "tear"}), counts)
        assert scores.scores["sadness"] == 1.5
        assert scores.rank[0] == "sadness"

    def test_no_cooccurrence_gives_zero_scores_alphabetical_rank(self):
        counts = counts_of(50, 10, {})
        scores = emotion_scores("d", lexicon_with_sadness({"cry"}), counts)
        assert all(v == 0.0 for v in scores.scores.values())
        assert list(scores.rank) == sorted(PLUTCHIK_CATEGORIES)

    def test_seeded_corpus_ranks_sadness_first(self, emolex):
        posts = []
        for i in range(40):
            posts.append(Post(f"d{i}", "dep", "cry tears and grief, crying again", NOW))
        for i in range(40):
            posts.append(Post(f"o{i}", "oth", "happy laugh, glad and cheerful", NOW))
        counts = CorpusCounts.from_posts(posts, vocabulary=emolex.words)
        scores = emotion_scores("dep", emolex, counts)
        assert scores.rank[0] == "sadness"
        ref = emotion_score_oracle(counts, "dep", sorted(emolex.categories["sadness"]))
        assert math.isclose(scores.scores["sadness"], ref, rel_tol=1e-12, abs_tol=1e-12)

    def test_rank_ties_break_alphabetically(self):
        scores = EmotionScoreSet("d", {name: 0.0 for name in PLUTCHIK_CATEGORIES})
        assert list(scores.rank) == sorted(PLUTCHIK_CATEGORIES)

    def test_all_categories_required(self):
        with pytest.raises(ValueError):
            EmotionScoreSet("d", {"sadness": 1.0})


def tally(cid, concept, kind, count, label="emerging"):
    return MentionTally(cid, concept, kind, count, label)


class TestTfidf:
    def test_worked_example(self):
        tallies = {
            "d1": [
                tally("d1", "s", ConceptKind.SYMPTOM, 5),
                tally("d1", "t", ConceptKind.SYMPTOM, 5),
            ]
        }
        weights = {w.concept_id: w for w in tfidf_weights(tallies, n_conditions=14)}
        expected = tfidf_oracle(5, 10, 1, 14)
        assert math.isclose(weights["s"].weight, expected, rel_tol=1e-12)
        assert math.isclose(weights["s"].weight, 0.5 * math.log(15.0), rel_tol=1e-12)

    def test_concept_in_every_condition_keeps_positive_weight(self):
        tallies = {
            f"d{i}": [tally(f"d{i}", "s", ConceptKind.SYMPTOM, 1)] for i in range(14)
        }
        weights = tfidf_weights(tallies, n_conditions=14)
        assert len(weights) == 14
        for w in weights:
            assert math.isclose(w.weight, math.log(2.0), rel_tol=1e-12)
            assert w.df == 14

    def test_single_condition_single_concept(self):
        tallies = {"d": [tally("d", "s", ConceptKind.SYMPTOM, 3)]}
        (w,) = tfidf_weights(tallies, n_conditions=1)
        assert math.isclose(w.weight, math.log(2.0), rel_tol=1e-12)

    def test_tf_within_kind_is_separate(self):
        tallies = {
            "d": [
                tally("d", "s", ConceptKind.SYMPTOM, 2),
                tally("d", "x", ConceptKind.DRUG, 6),
            ]
        }
        weights = {w.concept_id: w for w in tfidf_weights(tallies, n_conditions=2)}
        # both are the only mention of their kind, so tf = 1 for each
        assert math.isclose(weights["s"].weight, weights["x"].weight, rel_tol=1e-12)

    def test_zero_mentions_zero_weights(self):
        assert tfidf_weights({"d": []}, n_conditions=3) == []

    @given(
        st.dictionaries(
            st.sampled_from(["d1", "d2", "d3"]),
            st.lists(
                st.tuples(st.sampled_from("abcdef"), st.integers(1, 9)),
                min_size=1,
                max_size=6,
                unique_by=lambda t: t[0],
            ),
            min_size=1,
        )
    )
    @settings(max_examples=60)
    def test_tf_sums_to_one_per_condition(self, raw):
        tallies = {
            cid: [tally(cid, c, ConceptKind.SYMPTOM, n) for c, n in rows]
            for cid, rows in raw.items()
        }
        weights = tfidf_weights(tallies, n_conditions=5)
        by_condition: dict[str, float] = {}
        for w in weights:
            assert w.weight > 0
            idf = math.log(1.0 + 5 / w.df)
            by_condition[w.condition_id] = by_condition.get(w.condition_id, 0.0) + w.weight / idf
        for cid, total in by_condition.items():
            assert math.isclose(total, 1.0, rel_tol=1e-9)


class TestBodyScores:
    def lexicon(self):
        return BodyLexicon(
            parts={"joints": frozenset({"joint", "joints"}), "head": frozenset({"head"})},
            zone_ids={"joints": "joints", "head": "head"},
        )

    def test_condition_specific_words_peak_their_zone(self):
        posts = [Post(f"r{i}", "ra", "my joints hurt, every joint aches", NOW) for i in range(6)]
        posts += [Post(f"o{i}", "oth", "my head hurts", NOW) for i in range(6)]
        posts += [Post("o9", "oth", "joints ache a bit", NOW)]
        scores = body_scores(posts, self.lexicon())
        ra = {s.zone_id: s.weight for s in scores if s.condition_id == "ra"}
        assert max(ra, key=ra.get) == "joints"
        # hand-check: ra mentions joints in all 6 posts and nothing else
        assert math.isclose(ra["joints"], 1.0 * math.log(1 + 2 / 2), rel_tol=1e-12)

    def test_no_body_words(self):
        posts = [Post("p1", "d", "nothing relevant here", NOW)]
        assert body_scores(posts, self.lexicon()) == []

    def test_single_word_single_zone(self):
        posts = [Post("p1", "d", "my head", NOW), Post("p2", "e", "fine", NOW)]
        scores = body_scores(posts, self.lexicon())
        assert len(scores) == 1
        assert scores[0].zone_id == "head"
        assert scores[0].weight > 0


class TestOpinionMetrics:
    @pytest.mark.parametrize(
        "likert, expected",
        [(-3, "NP"), (-2, "NP"), (-1, "NWP"), (0, "NWP"), (1, "NWP"), (2, "PP"), (3, "PP")],
    )
    def test_buckets(self, likert, expected):
        assert bucket(likert) == expected

    @pytest.mark.parametrize("bad", [-4, 4, 17])
    def test_bucket_out_of_range(self, bad):
        with pytest.raises(OutOfRange):
            bucket(bad)

    def test_sample_validation(self):
        with pytest.raises(OutOfRange):
            OpinionSample("S1", -4, 0)
        with pytest.raises(ValueError):
            OpinionSample("S9", 0, 0)

    def test_worked_example(self):
        before = [2, 2, -3, 0]
        after = [3, 2, -1, 1]
        samples = [OpinionSample("S1", b, a) for b, a in zip(before, after)]
        d_np, d_nwp, d_pp = persuasion_likelihood(samples, "S1")
        assert (d_np, d_nwp, d_pp) == (-0.25, 0.25, 0.0)
        assert average_opinion_change(samples, "S1") == pytest.approx(
            ((3 - 2) + 0 + 2 + 1) / 4
        )

    def test_no_change(self):
        samples = [OpinionSample("S2", v, v) for v in (-3, -1, 0, 2, 3)]
        assert persuasion_likelihood(samples, "S2") == (0.0, 0.0, 0.0)
        assert average_opinion_change(samples, "S2") == 0.0

    def test_ten_percent_shift_cohort(self):
        # nine hold still, one moves from the neutral band to positive;
        # exact rationals make the +0.10 shift representable with no slack
        samples = [OpinionSample("S2", 1, 2)]
        samples += [OpinionSample("S2", 2, 2) for _ in range(4)]
        samples += [OpinionSample("S2", 0, 0) for _ in range(3)]
        samples += [OpinionSample("S2", -2, -2) for _ in range(2)]
        d_np, d_nwp, d_pp = persuasion_likelihood(samples, "S2")
        assert d_pp == Fraction(1, 10)
        assert d_nwp == Fraction(-1, 10)
        assert d_np == 0

    def test_no_samples(self):
        with pytest.raises(NoSamples):
            persuasion_likelihood([OpinionSample("S1", 0, 0)], "S2")

    @given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=40))
    @settings(max_examples=200)
    def test_deltas_sum_to_zero_exactly(self, pairs):
        samples = [OpinionSample("S3", b, a) for b, a in pairs]
        d_np, d_nwp, d_pp = persuasion_likelihood(samples, "S3")
        assert d_np + d_nwp + d_pp == 0.0
