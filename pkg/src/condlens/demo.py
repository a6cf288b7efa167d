"""Deterministic synthetic demo dataset.

Replaces the private post/prescription snapshots with a seeded generator:
posts mix expected and emerging concept mentions with per-condition emotion
and body-part skews; prescriptions are spread over practices whose patients
are apportioned across twelve demo regions.  The census fixture is
constructed so that North Norfolk sits below the England mean for population
and density with deprivation slightly above it, while Rochdale sits above
the mean with markedly high deprivation, and the rheumatoid arthritis
prescription rate peaks in those two regions.
"""

from __future__ import annotations

import csv
import json
import random
import shutil
from dataclasses import dataclass
from pathlib import Path

from . import data_path
from .lexicons import (
    PLUTCHIK_CATEGORIES,
    ConceptKind,
    load_body_lexicon,
    load_condition_catalog,
    load_emotion_lexicon,
    load_terminology,
)

DEFAULT_SEED = 1202
DEFAULT_POSTS = 2000
DEFAULT_RX_ROWS = 100_000
RX_MONTHS = [201807 + i for i in range(6)] + [201901 + i for i in range(6)]

# code, name, population, area_km2, deprivation
DEMO_REGIONS = [
    ("E06000014", "York", 210_000, 271.9, 13.5),
    ("E06000051", "Shropshire", 323_000, 3197.0, 20.0),
    ("E06000052", "Cornwall", 570_000, 3563.0, 25.0),
    ("E07000030", "Eden", 53_000, 2142.0, 18.0),
    ("E07000040", "East Devon", 150_000, 814.0, 16.0),
    ("E07000079", "Cotswold", 91_000, 1165.0, 12.0),
    ("E07000091", "New Forest", 180_000, 753.0, 14.0),
    ("E07000147", "North Norfolk", 103_000, 960.0, 21.5),
    ("E07000165", "Harrogate", 161_000, 1308.0, 15.0),
    ("E07000178", "Oxford", 152_000, 45.6, 19.0),
    ("E08000005", "Rochdale", 260_000, 158.0, 36.5),
    ("E08000019", "Sheffield", 584_000, 367.9, 26.0),
]

NORTH_NORFOLK = "E07000147"
ROCHDALE = "E08000005"
RA_CONDITION = "69896004"

# relative per-patient prescription rate of rheumatoid arthritis drugs;
# everything else stays near 1.0
RA_REGION_RATE = {NORTH_NORFOLK: 3.0, ROCHDALE: 2.5}

EMOTION_SKEW = {
    "69896004": {"sadness": 2.0, "anger": 2.0, "fear": 1.5},
    "73211009": {"fear": 2.0, "anticipation": 2.0, "trust": 1.5},
    "35489007": {"sadness": 4.0, "fear": 2.0},
    "52448006": {"sadness": 2.5, "fear": 2.5, "surprise": 1.5},
    "20010003": {"anger": 3.0, "fear": 2.0, "sadness": 2.0},
    "9014002": {"disgust": 3.0, "anger": 1.5},
    "235675006": {"disgust": 2.0, "fear": 1.5},
    "40930008": {"sadness": 1.5, "anticipation": 1.5},
    "10743008": {"disgust": 2.5, "fear": 1.5},
    "49049000": {"fear": 2.0, "trust": 1.5, "sadness": 1.5},
    "13445001": {"surprise": 2.5, "fear": 2.0},
    "24700007": {"fear": 2.5, "trust": 2.0, "sadness": 1.5},
    "78275009": {"anticipation": 2.0, "joy": 1.5, "surprise": 1.5},
}

BODY_SKEW = {
    "69896004": {"joints": 5.0, "hands": 3.0, "legs": 2.0, "feet": 2.0},
    "73211009": {"feet": 3.0, "eyes": 2.0, "skin": 1.5},
    "35489007": {"head": 2.0, "heart": 1.5, "chest": 1.0},
    "52448006": {"head": 3.0},
    "20010003": {"head": 2.0, "heart": 2.0},
    "9014002": {"skin": 5.0, "head": 2.0, "arms": 1.5, "legs": 1.5},
    "235675006": {"stomach": 5.0, "gut": 3.0, "mouth": 1.0},
    "40930008": {"throat": 3.0, "skin": 2.0, "head": 1.5},
    "10743008": {"gut": 5.0, "stomach": 3.0, "back": 1.0},
    "49049000": {"hands": 3.0, "legs": 2.0, "arms": 2.0},
    "13445001": {"ears": 5.0, "head": 2.0},
    "24700007": {"legs": 3.0, "arms": 2.0, "eyes": 2.0, "hands": 2.0},
    "78275009": {"throat": 3.0, "head": 2.0, "chest": 1.5},
}

POST_TEMPLATES = [
    "been dealing with {sym} and {sym2} for weeks now, feeling {emo} and {emo2} about it",
    "my doctor started me on {drug} last month and the {sym} is finally easing, {emo} but {emo2}",
    "anyone else get {sym}? my {body} has been awful lately and i am {emo}, honestly {emo2}",
    "the {sym} in my {body} keeps me up at night, so {emo} and a bit {emo2}",
    "switched from {drug} to {drug2} but still have {sym}, {emo} does not cover it, also {emo2}",
    "today the {sym} flared up again along with {sym2}, i feel {emo} and {emo2}",
    "{sym} plus {sym2} since tuesday, tried {drug} with no luck, utterly {emo} yet {emo2}",
    "my {body} aches constantly, probably the {sym}, which leaves me {emo} and {emo2}",
    "does {drug} help with {sym}? my {body} is worse every morning and i get {emo}, even {emo2}",
    "three months of {sym} and {sym2} now, the {body} trouble makes me {emo} and {emo2}",
]


def _typo(rng: random.Random, word: str) -> str:
    """Swap two adjacent letters of one longer word (feeds the fuzzy matcher)."""
    if len(word) < 5:
        return word
    i = rng.randrange(1, len(word) - 1)
    return word[:i] + word[i + 1] + word[i] + word[i + 2 :]


def _weighted_choice(rng: random.Random, items: list[str], weights: list[float]) -> str:
    return rng.choices(items, weights=weights, k=1)[0]


@dataclass
class DemoPaths:
    root: Path

    @property
    def config(self) -> Path:
        return self.root / "config.json"


def generate_demo(
    out_dir: str | Path,
    seed: int = DEFAULT_SEED,
    n_posts: int = DEFAULT_POSTS,
    n_rx_rows: int = DEFAULT_RX_ROWS,
) -> DemoPaths:
    """Write the full synthetic working set plus a pipeline config file."""
    root = Path(out_dir)
    root.mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)

    for name in ("terminology.tsv", "conditions.json", "emolex.tsv", "body.tsv"):
        shutil.copyfile(data_path(name), root / name)

    terminology = load_terminology(root / "terminology.tsv")
    catalog = load_condition_catalog(root / "conditions.json", terminology)
    emolex = load_emotion_lexicon(root / "emolex.tsv")
    body = load_body_lexicon(root / "body.tsv")

    _write_posts(root / "posts.jsonl", rng, terminology, catalog, emolex, body, n_posts)
    drug_bnf = _write_drug_files(root, rng, terminology, catalog)
    _write_practices_and_patients(root, rng)
    _write_prescriptions(root / "prescriptions", rng, catalog, drug_bnf, n_rx_rows)
    _write_census(root / "census.csv")
    _write_survey(root / "survey.csv")
    _write_region_names(root / "region_names.json")

    config = {
        "seed": seed,
        "paths": {
            "terminology": "terminology.tsv",
            "conditions": "conditions.json",
            "emolex": "emolex.tsv",
            "body": "body.tsv",
            "posts": "posts.jsonl",
            "prescriptions": "prescriptions",
            "drugs": "drugs.csv",
            "practices": "practices.csv",
            "patients": "patients.csv",
            "census": "census.csv",
            "drugbank": "drugbank.tsv",
            "survey": "survey.csv",
        },
        "params": {
            "max_ngram": 5,
            "pmi_min_count": 5,
            "per_post_binary": False,
            "rank_k": 3,
        },
    }
    (root / "config.json").write_text(
        json.dumps(config, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return DemoPaths(root=root)


def _surface(rng: random.Random, concept) -> str:
    return rng.choice(sorted(concept.synonyms))


def _write_posts(path, rng, terminology, catalog, emolex, body, n_posts) -> None:
    symptoms = sorted(terminology.concepts(ConceptKind.SYMPTOM), key=lambda c: c.id)
    drugs = sorted(terminology.concepts(ConceptKind.DRUG), key=lambda c: c.id)
    categories = list(PLUTCHIK_CATEGORIES)
    # stable small word pools keep per-word counts above the PMI threshold
    emo_pool = {
        cat: rng.sample(sorted(emolex.categories[cat]), k=min(5, len(emolex.categories[cat])))
        for cat in categories
    }
    zones = sorted(body.parts)
    zone_pool = {zone: rng.sample(sorted(body.parts[zone]), k=min(3, len(body.parts[zone]))) for zone in zones}

    per_condition: dict[str, dict] = {}
    for spec in catalog:
        expected_sym = [terminology[cid] for cid in sorted(spec.expected_symptoms)]
        expected_drug = [terminology[cid] for cid in sorted(spec.expected_drugs)]
        emerging_sym = rng.sample(
            [c for c in symptoms if c.id not in spec.expected_symptoms], k=8
        )
        emerging_drug = rng.sample(
            [c for c in drugs if c.id not in spec.expected_drugs], k=4
        )
        skew = EMOTION_SKEW.get(spec.condition_id, {})
        emo_weights = [skew.get(cat, 1.0) for cat in categories]
        body_skew = BODY_SKEW.get(spec.condition_id, {})
        body_weights = [body_skew.get(zone, 0.3) for zone in zones]
        per_condition[spec.condition_id] = {
            "expected_sym": expected_sym,
            "expected_drug": expected_drug,
            "emerging_sym": emerging_sym,
            "emerging_drug": emerging_drug,
            "emo_weights": emo_weights,
            "body_weights": body_weights,
        }

    condition_ids = [spec.condition_id for spec in catalog]
    with open(path, "w", encoding="utf-8") as fh:
        for i in range(n_posts):
            cid = condition_ids[i % len(condition_ids)]
            ctx = per_condition[cid]

            def pick_symptom() -> str:
                pool = ctx["expected_sym"] if rng.random() < 0.7 and ctx["expected_sym"] else ctx["emerging_sym"]
                text = _surface(rng, rng.choice(pool))
                if rng.random() < 0.05:
                    words = text.split(" ")
                    j = rng.randrange(len(words))
                    words[j] = _typo(rng, words[j])
                    text = " ".join(words)
                return text

            def pick_drug() -> str:
                pool = ctx["expected_drug"] if rng.random() < 0.7 and ctx["expected_drug"] else ctx["emerging_drug"]
                return _surface(rng, rng.choice(pool))

            def pick_emotion() -> str:
                cat = _weighted_choice(rng, list(PLUTCHIK_CATEGORIES), ctx["emo_weights"])
                return rng.choice(emo_pool[cat])

            def pick_body() -> str:
                zone = _weighted_choice(rng, zones, ctx["body_weights"])
                return rng.choice(zone_pool[zone])

            template = rng.choice(POST_TEMPLATES)
            text = template.format(
                sym=pick_symptom(),
                sym2=pick_symptom(),
                drug=pick_drug(),
                drug2=pick_drug(),
                emo=pick_emotion(),
                emo2=pick_emotion(),
                body=pick_body(),
            )
            day = 1 + (i * 7) % 28
            month = 1 + (i * 3) % 6
            record = {
                "post_id": f"p{i:06d}",
                "condition_id": cid,
                "text": text,
                "created_at": f"2017-{month:02d}-{day:02d}T{(i * 11) % 24:02d}:00:00+00:00",
            }
            fh.write(json.dumps(record, sort_keys=True) + "\n")


def _write_drug_files(root, rng, terminology, catalog) -> dict[str, str]:
    """drugs.csv (BNF code per drug) and drugbank.tsv (drug -> conditions).
    Returns drug concept id -> BNF code."""
    drug_concepts = sorted(terminology.concepts(ConceptKind.DRUG), key=lambda c: c.id)
    bnf: dict[str, str] = {}
    with open(root / "drugs.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bnf_code", "drug_name"])
        for i, concept in enumerate(drug_concepts):
            code = f"{(i + 1) % 14 + 1:02d}0{i + 1:04d}B0"
            bnf[concept.id] = code
            writer.writerow([code, concept.canonical])
        # codes whose names resolve to nothing (reported, never fatal)
        writer.writerow(["990001ZZ", "Obscurol elixir"])
        writer.writerow(["990002ZZ", "Placebonium forte"])

    name_of = {spec.condition_id: spec.name for spec in catalog}
    rows: list[tuple[str, str]] = []
    for spec in catalog:
        for drug_id in sorted(spec.expected_drugs):
            rows.append((terminology[drug_id].canonical, name_of[spec.condition_id]))
    merged: dict[str, list[str]] = {}
    for drug_name, condition_name in rows:
        merged.setdefault(drug_name, []).append(condition_name)
    # off-label second uses and unresolvable pages round out the mapping
    merged.setdefault("Amitriptyline", []).append("Irritable bowel syndrome")
    merged.setdefault("Gabapentin", []).append("Rheumatoid arthritis")
    merged["Duloxetine"] = ["Depression"]
    merged["Melatonin"] = ["Sleep apnea"]
    merged["Paracetamol"] = []
    merged["Omeprazole"] = []
    unmatched = [
        "Imaginaryzumab", "Placebonium", "Nocebocillin", "Fauxparin",
        "Mythomycin", "Pretendolol", "Lorem ipsumab", "Hypotheticaine",
    ]
    with open(root / "drugbank.tsv", "w", encoding="utf-8") as fh:
        for drug_name in sorted(merged):
            fh.write(f"{drug_name}\t{'|'.join(sorted(set(merged[drug_name])))}\n")
        for drug_name in unmatched:
            fh.write(f"{drug_name}\t\n")
    return bnf


def practices_for_region(code: str) -> list[str]:
    return [f"P{code[1:]}{k}" for k in range(1, 4)]


def _write_practices_and_patients(root, rng) -> None:
    with open(root / "practices.csv", "w", newline="", encoding="utf-8") as fh_p, open(
        root / "patients.csv", "w", newline="", encoding="utf-8"
    ) as fh_q:
        practices = csv.writer(fh_p)
        patients = csv.writer(fh_q)
        practices.writerow(["practice_code", "name", "address"])
        patients.writerow(["practice_code", "lsoa_code", "patients"])
        n = len(DEMO_REGIONS)
        for idx, (code, name, population, _, _) in enumerate(DEMO_REGIONS):
            neighbour = DEMO_REGIONS[(idx + 1) % n][0]
            for k, practice in enumerate(practices_for_region(code), start=1):
                practices.writerow([practice, f"{name} Surgery {k}", f"{k} High Street, {name}"])
                share = population // 3
                home = int(share * 0.85)
                away = share - home
                patients.writerow([practice, code, home])
                patients.writerow([practice, neighbour, away])
        # a practice that prescribes but has no patient rows: lands in the
        # unallocated bucket
        practices.writerow(["P9999X", "Mobile Clinic", "no fixed address"])


def _write_prescriptions(rx_dir: Path, rng, catalog, drug_bnf, n_rows: int) -> None:
    rx_dir.mkdir(parents=True, exist_ok=True)
    condition_ids = [spec.condition_id for spec in catalog]
    drugs_by_condition = {
        spec.condition_id: sorted(spec.expected_drugs) for spec in catalog
    }
    region_codes = [r[0] for r in DEMO_REGIONS]
    populations = {r[0]: r[2] for r in DEMO_REGIONS}
    # per-(condition, region) sampling weight: relative per-patient rate x
    # population, so the realized rate tracks the designed relative rate
    weights: dict[str, list[float]] = {}
    for cid in condition_ids:
        rels = []
        for code in region_codes:
            if cid == RA_CONDITION:
                rel = RA_REGION_RATE.get(code, 1.0)
            else:
                rel = 0.8 + 0.5 * rng.random()
            rels.append(rel * populations[code])
        weights[cid] = rels

    by_month: dict[int, list[list[str]]] = {m: [] for m in RX_MONTHS}
    for i in range(n_rows):
        month = RX_MONTHS[i % len(RX_MONTHS)]
        cid = rng.choice(condition_ids)
        region = _weighted_choice(rng, region_codes, weights[cid])
        practice = rng.choice(practices_for_region(region))
        if rng.random() < 0.02:
            practice = "P9999X"
        drug_id = rng.choice(drugs_by_condition[cid])
        items = rng.randint(1, 12)
        quantity = items * 28
        cost = round(items * (2.0 + 6.0 * rng.random()), 2)
        drug_name = f"demo row {cid}"
        by_month[month].append(
            [practice, drug_bnf[drug_id], drug_name, str(items), f"{cost:.2f}", str(quantity), str(month)]
        )
    for month, rows in by_month.items():
        with open(rx_dir / f"{month}.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(
                ["practice_code", "bnf_code", "drug_name", "items", "total_cost", "quantity", "period"]
            )
            writer.writerows(rows)


def _write_census(path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["lsoa_code", "population", "area_km2", "deprivation"])
        for code, _, population, area, deprivation in DEMO_REGIONS:
            writer.writerow([code, population, area, deprivation])


def _write_region_names(path: Path) -> None:
    names = {code: name for code, name, _, _, _ in DEMO_REGIONS}
    path.write_text(json.dumps(names, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_survey(path: Path) -> None:
    """Ten-participant cohort; on S2 exactly one participant moves from the
    neutral band into positive, so the S2 bucket deltas are (0, -0.10, +0.10)."""
    s2_before = [0, 1, 1, -2, 2, 2, 2, 3, 3, -3]
    s2_after = [0, 2, 1, -2, 2, 2, 2, 3, 3, -3]
    rows: list[tuple[str, str, int, int]] = []
    for i in range(10):
        pid = f"u{i + 1:02d}"
        rows.append((pid, "S1", [1, -1, 0, 2, -2, 1, 0, -1, 2, 0][i], [1, -1, 0, 2, -2, 1, 0, -1, 2, 0][i]))
        rows.append((pid, "S2", s2_before[i], s2_after[i]))
        rows.append((pid, "S3", [0, 0, 1, -1, 2, -2, 3, 1, 0, -1][i], [1, 0, 1, -1, 2, -1, 3, 1, 1, -1][i]))
        rows.append((pid, "S4", [-3, -2, -2, -1, 0, 1, -3, -2, 2, 0][i], [-2, -1, -2, 0, 1, 1, -2, -2, 2, 1][i]))
        rows.append((pid, "S5", [-3, -3, -2, -1, 0, 1, -3, -2, 2, 0][i], [-3, -2, -2, 0, 0, 1, -2, -2, 2, 0][i]))
        rows.append((pid, "S6", [0, 1, 1, 2, -1, 0, 2, 1, 0, -1][i], [1, 1, 2, 2, 0, 0, 2, 1, 1, -1][i]))
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["participant_id", "statement_id", "before", "after"])
        for pid, sid, before, after in rows:
            writer.writerow([pid, sid, before, after])
