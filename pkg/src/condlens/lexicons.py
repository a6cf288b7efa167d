"""Terminology, condition catalog, emotion lexicon, and body-part dictionary.

All structures are immutable after construction and safe to share across
worker threads.  File formats:

* terminology.tsv  -- ``concept_id <TAB> canonical <TAB> kind <TAB> syn1|syn2``
* conditions.json  -- array of ``{condition_id, name, subreddit,
  expected_symptoms[], expected_drugs[]}``
* emolex.tsv       -- ``word <TAB> category``
* body.tsv         -- ``word <TAB> part <TAB> zone_id``
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterator

from ._text import normalize_term

logger = logging.getLogger(__name__)

# Plutchik's eight basic emotion categories, in the conventional listing order.
PLUTCHIK_CATEGORIES = (
    "anger",
    "joy",
    "disgust",
    "fear",
    "anticipation",
    "trust",
    "sadness",
    "surprise",
)


class ConceptKind(str, Enum):
    SYMPTOM = "symptom"
    DRUG = "drug"
    CONDITION = "condition"
    BODY_PART = "body_part"


class LexiconError(Exception):
    """Base class for lexicon loading failures."""


class MalformedRow(LexiconError):
    def __init__(self, path: str | Path, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = str(path)
        self.line_no = line_no
        self.reason = reason


class DuplicateConceptId(LexiconError):
    def __init__(self, concept_id: str):
        super().__init__(f"duplicate concept id {concept_id!r}")
        self.concept_id = concept_id


class CrossConceptSynonymCollision(LexiconError):
    def __init__(self, kind: ConceptKind, synonym: str, ids: tuple[str, str]):
        super().__init__(
            f"synonym {synonym!r} maps to both {ids[0]} and {ids[1]} within kind {kind.value}"
        )
        self.kind = kind
        self.synonym = synonym
        self.ids = ids


class UnknownConceptRef(LexiconError):
    def __init__(self, condition: str, concept_id: str, reason: str = "not in terminology"):
        super().__init__(f"condition {condition!r} references {concept_id!r}: {reason}")
        self.condition = condition
        self.concept_id = concept_id


class UnknownEmotionCategory(LexiconError):
    def __init__(self, name: str):
        super().__init__(f"unknown emotion category {name!r}")
        self.name = name


class EmptyPart(LexiconError):
    def __init__(self, name: str):
        super().__init__(f"body part {name!r} has no words")
        self.name = name


@dataclass(frozen=True)
class Concept:
    """One terminology node.  ``synonyms`` are normalized, deduplicated, and
    always include the normalized canonical name."""

    id: str
    canonical: str
    kind: ConceptKind
    synonyms: frozenset[str]

    def __post_init__(self):
        if not self.canonical:
            raise LexiconError(f"concept {self.id!r} has empty canonical name")
        norm = normalize_term(self.canonical)
        if norm not in self.synonyms:
            object.__setattr__(self, "synonyms", self.synonyms | {norm})


@dataclass(frozen=True)
class ConditionSpec:
    condition_id: str
    name: str
    subreddit: str
    expected_symptoms: frozenset[str]
    expected_drugs: frozenset[str]

    def expected_for(self, kind: ConceptKind) -> frozenset[str]:
        if kind == ConceptKind.SYMPTOM:
            return self.expected_symptoms
        if kind == ConceptKind.DRUG:
            return self.expected_drugs
        return frozenset()


class Terminology:
    """Concept store indexed by id and by every normalized synonym per kind.

    A synonym may be shared by concepts of *different* kinds (a drug and a
    condition may carry the same name); within one kind a shared synonym is a
    :class:`CrossConceptSynonymCollision`.
    """

    def __init__(self, concepts: list[Concept]):
        self._by_id: dict[str, Concept] = {}
        self._by_synonym: dict[ConceptKind, dict[str, Concept]] = {
            kind: {} for kind in ConceptKind
        }
        for concept in concepts:
            if concept.id in self._by_id:
                raise DuplicateConceptId(concept.id)
            self._by_id[concept.id] = concept
            index = self._by_synonym[concept.kind]
            for synonym in concept.synonyms:
                other = index.get(synonym)
                if other is not None and other.id != concept.id:
                    raise CrossConceptSynonymCollision(
                        concept.kind, synonym, (other.id, concept.id)
                    )
                index[synonym] = concept

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, concept_id: str) -> bool:
        return concept_id in self._by_id

    def get(self, concept_id: str) -> Concept | None:
        return self._by_id.get(concept_id)

    def __getitem__(self, concept_id: str) -> Concept:
        return self._by_id[concept_id]

    def lookup(self, term: str, kind: ConceptKind) -> Concept | None:
        """Resolve a surface term to the concept of the given kind, or None."""
        return self._by_synonym[kind].get(normalize_term(term))

    def synonym_index(self, kind: ConceptKind) -> dict[str, Concept]:
        """Normalized synonym -> concept map for one kind (read-only use)."""
        return self._by_synonym[kind]

    def concepts(self, kind: ConceptKind | None = None) -> Iterator[Concept]:
        for concept in self._by_id.values():
            if kind is None or concept.kind == kind:
                yield concept

    def max_synonym_tokens(self) -> int:
        longest = 1
        for index in self._by_synonym.values():
            for synonym in index:
                longest = max(longest, synonym.count(" ") + 1)
        return longest

    def dump(self, path: str | Path) -> None:
        """Write the terminology back out as TSV (sorted by concept id)."""
        lines = []
        for concept in sorted(self._by_id.values(), key=lambda c: c.id):
            synonyms = "|".join(sorted(concept.synonyms))
            lines.append(
                f"{concept.id}\t{concept.canonical}\t{concept.kind.value}\t{synonyms}"
            )
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_terminology(path: str | Path) -> Terminology:
    """Load a terminology TSV snapshot.  Empty file -> empty terminology."""
    concepts: list[Concept] = []
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise MalformedRow(path, line_no, f"expected 4 fields, got {len(parts)}")
            concept_id, canonical, kind_name, synonyms_field = parts
            if not concept_id or not canonical:
                raise MalformedRow(path, line_no, "empty concept id or canonical name")
            try:
                kind = ConceptKind(kind_name)
            except ValueError:
                raise MalformedRow(path, line_no, f"unknown kind {kind_name!r}") from None
            synonyms = frozenset(
                normalize_term(s) for s in synonyms_field.split("|") if normalize_term(s)
            )
            concepts.append(Concept(concept_id, canonical, kind, synonyms))
    terminology = Terminology(concepts)
    logger.info("loaded %d concepts from %s", len(terminology), path)
    return terminology


def load_condition_catalog(path: str | Path, terminology: Terminology) -> list[ConditionSpec]:
    """Load the condition catalog and check every concept reference."""
    path = Path(path)
    raw = json.loads(path.read_text(encoding="utf-8"))
    specs: list[ConditionSpec] = []
    for entry in raw:
        name = entry["name"]
        condition_id = entry["condition_id"]
        concept = terminology.get(condition_id)
        if concept is None:
            raise UnknownConceptRef(name, condition_id)
        if concept.kind != ConceptKind.CONDITION:
            raise UnknownConceptRef(name, condition_id, f"kind is {concept.kind.value}")
        for key, kind in (
            ("expected_symptoms", ConceptKind.SYMPTOM),
            ("expected_drugs", ConceptKind.DRUG),
        ):
            for ref in entry.get(key, []):
                ref_concept = terminology.get(ref)
                if ref_concept is None:
                    raise UnknownConceptRef(name, ref)
                if ref_concept.kind != kind:
                    raise UnknownConceptRef(
                        name, ref, f"kind is {ref_concept.kind.value}, expected {kind.value}"
                    )
        specs.append(
            ConditionSpec(
                condition_id=condition_id,
                name=name,
                subreddit=entry["subreddit"],
                expected_symptoms=frozenset(entry.get("expected_symptoms", [])),
                expected_drugs=frozenset(entry.get("expected_drugs", [])),
            )
        )
    logger.info("loaded %d conditions from %s", len(specs), path)
    return specs


@dataclass(frozen=True)
class EmotionLexicon:
    """Word lists for the eight Plutchik categories.  Every category key is
    always present; a word may belong to several categories."""

    categories: dict[str, frozenset[str]]

    def __post_init__(self):
        missing = set(PLUTCHIK_CATEGORIES) - set(self.categories)
        extra = set(self.categories) - set(PLUTCHIK_CATEGORIES)
        if missing or extra:
            raise LexiconError(f"bad category set: missing={missing}, extra={extra}")

    @property
    def words(self) -> frozenset[str]:
        out: set[str] = set()
        for words in self.categories.values():
            out |= words
        return frozenset(out)


def load_emotion_lexicon(path: str | Path) -> EmotionLexicon:
    path = Path(path)
    categories: dict[str, set[str]] = {name: set() for name in PLUTCHIK_CATEGORIES}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise MalformedRow(path, line_no, f"expected 2 fields, got {len(parts)}")
            word, category = parts
            word = normalize_term(word)
            if not word:
                raise MalformedRow(path, line_no, "empty word")
            if category not in categories:
                raise UnknownEmotionCategory(category)
            categories[category].add(word)
    return EmotionLexicon({name: frozenset(words) for name, words in categories.items()})


@dataclass(frozen=True)
class BodyLexicon:
    """Body-part word sets plus the stable zone id the UI figure uses."""

    parts: dict[str, frozenset[str]]
    zone_ids: dict[str, str]

    def __post_init__(self):
        for part, words in self.parts.items():
            if not words:
                raise EmptyPart(part)
        zones = list(self.zone_ids.values())
        if len(zones) != len(set(zones)):
            raise LexiconError("zone ids are not unique")
        if set(self.parts) != set(self.zone_ids):
            raise LexiconError("parts and zone_ids key sets differ")

    @property
    def words(self) -> frozenset[str]:
        out: set[str] = set()
        for words in self.parts.values():
            out |= words
        return frozenset(out)


def load_body_lexicon(path: str | Path) -> BodyLexicon:
    path = Path(path)
    parts: dict[str, set[str]] = {}
    zone_ids: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise MalformedRow(path, line_no, f"expected 3 fields, got {len(fields)}")
            word, part, zone_id = fields
            word = normalize_term(word)
            if not word:
                raise MalformedRow(path, line_no, "empty word")
            if part in zone_ids and zone_ids[part] != zone_id:
                raise MalformedRow(path, line_no, f"part {part!r} has conflicting zone ids")
            zone_ids[part] = zone_id
            parts.setdefault(part, set()).add(word)
    return BodyLexicon(
        parts={part: frozenset(words) for part, words in parts.items()},
        zone_ids=zone_ids,
    )
