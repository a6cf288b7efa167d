import pytest
from hypothesis import given
from hypothesis import strategies as st

from condlens._text import normalize_term
from condlens.lexicons import (
    PLUTCHIK_CATEGORIES,
    BodyLexicon,
    Concept,
    ConceptKind,
    CrossConceptSynonymCollision,
    DuplicateConceptId,
    EmptyPart,
    LexiconError,
    MalformedRow,
    Terminology,
    UnknownConceptRef,
    UnknownEmotionCategory,
    load_body_lexicon,
    load_condition_catalog,
    load_emotion_lexicon,
    load_terminology,
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


class TestNormalization:
    @pytest.mark.parametrize(
        "raw, expected",
        [
            ("  Brain   FOG!! ", "brain fog"),
            ("state-of-the-art", "state-of-the-art"),
            ("Parkinson's disease", "parkinson s disease"),
            ("WEAKNESS", "weakness"),
            ("", ""),
        ],
    )
    def test_examples(self, raw, expected):
        assert normalize_term(raw) == expected

    @given(st.text(max_size=40))
    def test_idempotent(self, text):
        once = normalize_term(text)
        assert normalize_term(once) == once


class TestTerminology:
    def test_paper_row(self, tmp_path):
        path = write(tmp_path, "t.tsv", "13791008\tasthenia\tsymptom\tweakness|asthenia\n")
        term = load_terminology(path)
        concept = term.lookup("weakness", ConceptKind.SYMPTOM)
        assert concept is not None
        assert concept.id == "13791008"
        assert concept.synonyms == frozenset({"weakness", "asthenia"})

    def test_empty_file(self, tmp_path):
        term = load_terminology(write(tmp_path, "t.tsv", ""))
        assert len(term) == 0

    def test_synonym_collision_within_kind(self, tmp_path):
        path = write(
            tmp_path,
            "t.tsv",
            "1\tback pain\tsymptom\tpain\n2\tchest pain\tsymptom\tpain\n",
        )
        with pytest.raises(CrossConceptSynonymCollision) as err:
            load_terminology(path)
        assert err.value.synonym == "pain"
        assert err.value.kind == ConceptKind.SYMPTOM

    def test_shared_name_across_kinds_is_fine(self, tmp_path):
        path = write(
            tmp_path,
            "t.tsv",
            "1\tfoxglove\tdrug\tfoxglove\n2\tfoxglove\tcondition\tfoxglove\n",
        )
        term = load_terminology(path)
        assert term.lookup("foxglove", ConceptKind.DRUG).id == "1"
        assert term.lookup("foxglove", ConceptKind.CONDITION).id == "2"

    def test_duplicate_concept_id(self, tmp_path):
        path = write(tmp_path, "t.tsv", "1\ta\tsymptom\ta\n1\tb\tsymptom\tb\n")
        with pytest.raises(DuplicateConceptId):
            load_terminology(path)

    def test_malformed_row_carries_line_number(self, tmp_path):
        path = write(tmp_path, "t.tsv", "1\ta\tsymptom\ta\nbroken line\n")
        with pytest.raises(MalformedRow) as err:
            load_terminology(path)
        assert err.value.line_no == 2

    def test_unknown_kind(self, tmp_path):
        path = write(tmp_path, "t.tsv", "1\ta\tgadget\ta\n")
        with pytest.raises(MalformedRow):
            load_terminology(path)

    def test_canonical_always_in_synonyms(self, terminology):
        for concept in terminology.concepts():
            assert normalize_term(concept.canonical) in concept.synonyms

    def test_lookup_totality(self, terminology):
        for concept in terminology.concepts():
            for synonym in concept.synonyms:
                assert terminology.lookup(synonym, concept.kind) is concept

    def test_round_trip(self, terminology, tmp_path):
        dumped = tmp_path / "dump.tsv"
        terminology.dump(dumped)
        reloaded = load_terminology(dumped)
        assert len(reloaded) == len(terminology)
        for concept in terminology.concepts():
            for synonym in concept.synonyms:
                again = reloaded.lookup(synonym, concept.kind)
                assert again is not None and again.id == concept.id

    def test_known_ids_from_bundled_fixture(self, terminology):
        assert terminology.lookup("brain fog", ConceptKind.SYMPTOM).id == "40917007"
        assert terminology.lookup("weakness", ConceptKind.SYMPTOM).id == "13791008"
        benzos = terminology.lookup("benzos", ConceptKind.DRUG)
        assert benzos.canonical == "Benzodiazepines"


class TestConditionCatalog:
    def test_bundled_catalog(self, terminology, catalog):
        assert len(catalog) == 13
        by_name = {spec.name: spec for spec in catalog}
        ra = by_name["Rheumatoid arthritis"]
        stiffness = terminology.lookup("stiffness", ConceptKind.SYMPTOM)
        tenderness = terminology.lookup("tenderness", ConceptKind.SYMPTOM)
        swelling = terminology.lookup("swelling", ConceptKind.SYMPTOM)
        assert {stiffness.id, tenderness.id, swelling.id} <= ra.expected_symptoms
        leflunomide = terminology.lookup("leflunomide", ConceptKind.DRUG)
        celecoxib = terminology.lookup("celecoxib", ConceptKind.DRUG)
        assert {leflunomide.id, celecoxib.id} <= ra.expected_drugs

    def test_referential_integrity(self, terminology, catalog):
        for spec in catalog:
            assert terminology[spec.condition_id].kind == ConceptKind.CONDITION
            for cid in spec.expected_symptoms:
                assert terminology[cid].kind == ConceptKind.SYMPTOM
            for cid in spec.expected_drugs:
                assert terminology[cid].kind == ConceptKind.DRUG

    def test_empty_expected_sets(self, tmp_path):
        term = load_terminology(write(tmp_path, "t.tsv", "9\tx\tcondition\tx\n"))
        path = write(
            tmp_path,
            "c.json",
            '[{"condition_id": "9", "name": "X", "subreddit": "x",'
            ' "expected_symptoms": [], "expected_drugs": []}]',
        )
        specs = load_condition_catalog(path, term)
        assert specs[0].expected_symptoms == frozenset()

    def test_unknown_ref(self, tmp_path):
        term = load_terminology(write(tmp_path, "t.tsv", "9\tx\tcondition\tx\n"))
        path = write(
            tmp_path,
            "c.json",
            '[{"condition_id": "9", "name": "X", "subreddit": "x",'
            ' "expected_symptoms": ["999"], "expected_drugs": []}]',
        )
        with pytest.raises(UnknownConceptRef) as err:
            load_condition_catalog(path, term)
        assert err.value.concept_id == "999"

    def test_wrong_kind_ref(self, tmp_path):
        term = load_terminology(
            write(tmp_path, "t.tsv", "9\tx\tcondition\tx\n8\ty\tdrug\ty\n")
        )
        path = write(
            tmp_path,
            "c.json",
            '[{"condition_id": "9", "name": "X", "subreddit": "x",'
            ' "expected_symptoms": ["8"], "expected_drugs": []}]',
        )
        with pytest.raises(UnknownConceptRef):
            load_condition_catalog(path, term)


class TestEmotionLexicon:
    def test_bundled(self, emolex):
        assert set(emolex.categories) == set(PLUTCHIK_CATEGORIES)
        assert {"cry", "tear"} <= emolex.categories["sadness"]
        # a word may belong to several categories
        assert "excited" in emolex.categories["joy"]
        assert "excited" in emolex.categories["anticipation"]

    def test_load_rows(self, tmp_path):
        path = write(tmp_path, "e.tsv", "cry\tsadness\ntear\tsadness\n")
        lex = load_emotion_lexicon(path)
        assert {"cry", "tear"} <= lex.categories["sadness"]
        assert set(lex.categories) == set(PLUTCHIK_CATEGORIES)

    def test_unknown_category(self, tmp_path):
        path = write(tmp_path, "e.tsv", "happy\telation\n")
        with pytest.raises(UnknownEmotionCategory):
            load_emotion_lexicon(path)


class TestBodyLexicon:
    def test_bundled(self, body_lexicon):
        assert "tongue" in body_lexicon.parts["mouth"]
        assert "lip" in body_lexicon.parts["mouth"]
        zones = list(body_lexicon.zone_ids.values())
        assert len(zones) == len(set(zones))
        for part, words in body_lexicon.parts.items():
            assert words, part

    def test_load_row(self, tmp_path):
        path = write(tmp_path, "b.tsv", "tongue\tmouth\tmouth\n")
        lex = load_body_lexicon(path)
        assert "tongue" in lex.parts["mouth"]

    def test_empty_part_rejected(self):
        with pytest.raises(EmptyPart):
            BodyLexicon(parts={"mouth": frozenset()}, zone_ids={"mouth": "mouth"})

    def test_duplicate_zone_ids_rejected(self):
        with pytest.raises(LexiconError):
            BodyLexicon(
                parts={"mouth": frozenset({"lip"}), "jaw": frozenset({"chin"})},
                zone_ids={"mouth": "z1", "jaw": "z1"},
            )

    def test_conflicting_zone_in_file(self, tmp_path):
        path = write(tmp_path, "b.tsv", "lip\tmouth\tz1\ntongue\tmouth\tz2\n")
        with pytest.raises(MalformedRow):
            load_body_lexicon(path)


def test_concept_requires_canonical():
    with pytest.raises(LexiconError):
        Concept("1", "", ConceptKind.SYMPTOM, frozenset())


def test_terminology_rejects_collision_programmatically():
    a = Concept("1", "ache", ConceptKind.SYMPTOM, frozenset({"ache"}))
    b = Concept("2", "pain", ConceptKind.SYMPTOM, frozenset({"ache", "pain"}))
    with pytest.raises(CrossConceptSynonymCollision):
        Terminology([a, b])
