"""End-to-end scoring pipeline: posts + NHS files + lexicons -> bundle.

Deterministic given identical inputs: extraction order follows the corpus,
aggregation folds are associative, and all output collections are sorted
before serialization.  ``threads`` only changes wall-clock time, never a
byte of the bundle.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from . import rx, store
from .extract import LexiconMatcher, MentionTally, Post, load_posts, tally_condition
from .lexicons import (
    PLUTCHIK_CATEGORIES,
    ConceptKind,
    load_body_lexicon,
    load_condition_catalog,
    load_emotion_lexicon,
    load_terminology,
)
from .score import (
    CorpusCounts,
    PmiConfig,
    body_scores,
    emotion_scores,
    tfidf_weights,
)

logger = logging.getLogger(__name__)

INPUT_KEYS = (
    "terminology",
    "conditions",
    "emolex",
    "body",
    "posts",
    "prescriptions",
    "drugs",
    "practices",
    "patients",
    "census",
    "drugbank",
)


@dataclass
class PipelineConfig:
    """Paths are resolved relative to the config file's directory."""

    root: Path
    paths: dict[str, str]
    max_ngram: int = 5
    pmi_min_count: int = 5
    per_post_binary: bool = False
    rank_k: int = 3
    region_map: str | None = None  # optional lsoa -> display region csv
    seed: int = 0

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        path = Path(path)
        raw = json.loads(path.read_text(encoding="utf-8"))
        params = raw.get("params", {})
        return cls(
            root=path.parent,
            paths=raw["paths"],
            max_ngram=params.get("max_ngram", 5),
            pmi_min_count=params.get("pmi_min_count", 5),
            per_post_binary=params.get("per_post_binary", False),
            rank_k=params.get("rank_k", 3),
            region_map=params.get("region_map"),
            seed=raw.get("seed", 0),
        )

    def resolve(self, key: str) -> Path:
        return self.root / self.paths[key]


def _prescription_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix == ".csv")
    return [path]


def condition_practice_items(
    records: Iterable[rx.PrescriptionRecord], index: rx.DrugIndex
) -> tuple[dict[str, dict[str, int]], set[int]]:
    """One streaming pass over records: per-condition per-practice item
    totals plus the set of periods seen."""
    totals: dict[str, dict[str, int]] = {}
    periods: set[int] = set()
    for record in records:
        periods.add(record.period)
        for cid in index.conditions_for_bnf(record.bnf_code):
            totals.setdefault(cid, {}).setdefault(record.practice_code, 0)
            totals[cid][record.practice_code] += record.items
    return totals, periods


def _aggregate_prescriptions(
    files: list[Path], index: rx.DrugIndex, threads: int
) -> tuple[dict[str, dict[str, int]], set[int], list[rx.ParseReport]]:
    reports = [rx.ParseReport() for _ in files]

    def run_one(i: int) -> tuple[dict[str, dict[str, int]], set[int]]:
        return condition_practice_items(
            rx.parse_prescriptions(files[i], report=reports[i]), index
        )

    if threads > 1 and len(files) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_one, range(len(files))))
    else:
        parts = [run_one(i) for i in range(len(files))]

    conditions = sorted({cid for totals, _ in parts for cid in totals})
    merged = {
        cid: rx.merge_practice_items(
            [totals.get(cid, {}) for totals, _ in parts]
        )
        for cid in conditions
    }
    periods: set[int] = set()
    for _, seen in parts:
        periods |= seen
    return merged, periods, reports


@dataclass
class PipelineResult:
    bundle_dir: Path
    manifest: dict[str, Any]
    warnings: list[str] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)


def run_score(
    config: PipelineConfig, out_dir: str | Path, threads: int = 1
) -> PipelineResult:
    warnings: list[str] = []
    stats: dict[str, Any] = {}
    pmi_config = PmiConfig(min_count=config.pmi_min_count)

    terminology = load_terminology(config.resolve("terminology"))
    catalog = load_condition_catalog(config.resolve("conditions"), terminology)
    emolex = load_emotion_lexicon(config.resolve("emolex"))
    body = load_body_lexicon(config.resolve("body"))
    subreddit_map = {spec.subreddit: spec.condition_id for spec in catalog}

    posts_path = config.resolve("posts")
    posts: list[Post] = []
    if posts_path.exists():
        posts, rejects = load_posts(posts_path, subreddit_map)
        if rejects:
            warnings.append(f"posts: skipped {len(rejects)} malformed lines")
    else:
        warnings.append(f"posts input {posts_path} missing; profiles will be empty")
    stats["posts"] = len(posts)

    by_condition: dict[str, list[Post]] = {spec.condition_id: [] for spec in catalog}
    unknown_condition_posts = 0
    for post in posts:
        if post.condition_id in by_condition:
            by_condition[post.condition_id].append(post)
        else:
            unknown_condition_posts += 1
    if unknown_condition_posts:
        warnings.append(f"posts: {unknown_condition_posts} posts under unknown conditions ignored")

    # extraction + tallies
    matcher = LexiconMatcher(terminology, max_ngram=config.max_ngram)
    tallies: dict[str, list[MentionTally]] = {}
    spec_of = {spec.condition_id: spec for spec in catalog}

    def tally_one(cid: str) -> tuple[str, list[MentionTally]]:
        return cid, tally_condition(
            by_condition[cid],
            spec_of[cid],
            terminology,
            extractor=matcher,
            per_post_binary=config.per_post_binary,
        )

    condition_ids = sorted(by_condition)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for cid, result in pool.map(tally_one, condition_ids):
                tallies[cid] = result
    else:
        for cid in condition_ids:
            tallies[cid] = tally_one(cid)[1]
    stats["mentions"] = sum(t.count for ts in tallies.values() for t in ts)

    # association scores
    counts = CorpusCounts.from_posts(posts, vocabulary=emolex.words | body.words)
    weights = tfidf_weights(tallies, n_conditions=len(catalog))
    emotion_by_condition = {}
    for spec in catalog:
        if counts.n_posts > 0:
            emotion_by_condition[spec.condition_id] = emotion_scores(
                spec.condition_id, emolex, counts, pmi_config
            )
        else:
            emotion_by_condition[spec.condition_id] = None
    body_by_condition: dict[str, list] = {spec.condition_id: [] for spec in catalog}
    if posts:
        for score_row in body_scores(posts, body, counts, n_conditions=len(catalog)):
            body_by_condition.setdefault(score_row.condition_id, []).append(score_row)

    # prescriptions -> prevalence
    drugbank_rows, drugbank_report = rx.parse_drugbank(config.resolve("drugbank"))
    drug_name_rows, _ = rx.parse_drug_names(config.resolve("drugs"))
    index, index_report = rx.build_drug_index(
        drugbank_rows, drug_name_rows, terminology, [s.condition_id for s in catalog]
    )
    stats["drugbank_rows"] = index_report.total_drugbank_rows
    stats["drugbank_matched"] = index_report.matched_rows
    if index_report.unresolved_drugs:
        warnings.append(
            f"drugbank: {len(index_report.unresolved_drugs)} drug names did not resolve"
        )

    patients, _ = rx.parse_patients(config.resolve("patients"))
    rx_files = _prescription_files(config.resolve("prescriptions"))
    totals, periods, rx_reports = _aggregate_prescriptions(rx_files, index, threads)
    months = max(1, len(periods))
    rejected_rows = sum(r.rejected for r in rx_reports)
    stats["rx_rows"] = sum(r.accepted for r in rx_reports)
    stats["rx_rejected"] = rejected_rows
    if rejected_rows:
        warnings.append(f"prescriptions: rejected {rejected_rows} rows")

    region_map: dict[str, str] = {}
    if config.region_map:
        with open(config.root / config.region_map, encoding="utf-8") as fh:
            for line in fh:
                parts = line.strip().split(",")
                if len(parts) == 2 and parts[0] != "lsoa_code":
                    region_map[parts[0]] = parts[1]

    prevalence_tables: dict[str, dict[str, Any]] = {}
    for spec in catalog:
        rows = rx.prevalence_from_practice_items(
            totals.get(spec.condition_id, {}), patients, spec.condition_id, months
        )
        if region_map:
            rows = rx.aggregate_prevalence(rows, region_map)
        prevalence_tables[spec.condition_id] = _prevalence_payload(rows, config.rank_k)

    census, _ = rx.parse_census(config.resolve("census"))
    indicators, _ = rx.build_indicators(census)

    # assemble + persist
    bundle = _assemble_bundle(
        config,
        catalog,
        terminology,
        tallies,
        weights,
        emotion_by_condition,
        body_by_condition,
        prevalence_tables,
        indicators,
    )
    if not posts:
        warnings.append("no posts: bundle contains prevalence only, profiles are empty")
    manifest = store.write_bundle(bundle, out_dir)
    logger.info("bundle written to %s (digest %s)", out_dir, manifest["bundle_digest"][:12])
    return PipelineResult(
        bundle_dir=Path(out_dir), manifest=manifest, warnings=warnings, stats=stats
    )


def _prevalence_payload(rows: list[rx.BoroughPrevalence], rank_k: int) -> dict[str, Any]:
    regional = [r for r in rows if r.lsoa_code != rx.UNALLOCATED]
    unallocated = sum(r.apportioned_items for r in rows if r.lsoa_code == rx.UNALLOCATED)
    relative = rx.england_relative({r.lsoa_code: r.rate for r in regional})
    rel_of = {rv.code: rv for rv in relative.values}
    top, bottom = rx.rank_regions(regional, rank_k)
    months = rows[0].months if rows else 1
    return {
        "condition_id": rows[0].condition_id if rows else "",
        "months": months,
        "mean": relative.mean,
        "sd": relative.sd,
        "regions": [
            {
                "code": r.lsoa_code,
                "apportioned_items": r.apportioned_items,
                "patients": r.patients_total,
                "rate": r.rate,
                "delta_from_mean": rel_of[r.lsoa_code].delta_from_mean,
                "z": rel_of[r.lsoa_code].z,
                "z_display": rel_of[r.lsoa_code].z_display,
            }
            for r in regional
        ],
        "unallocated_items": unallocated,
        "top": [r.lsoa_code for r in top],
        "bottom": [r.lsoa_code for r in bottom],
    }


def _assemble_bundle(
    config: PipelineConfig,
    catalog,
    terminology,
    tallies,
    weights,
    emotion_by_condition,
    body_by_condition,
    prevalence_tables,
    indicators,
) -> store.ProfileBundle:
    # per-(concept, kind): which conditions mention it (for hover lists)
    associated: dict[tuple[str, ConceptKind], list[str]] = {}
    for cid in sorted(tallies):
        for tally in tallies[cid]:
            associated.setdefault((tally.concept_id, tally.kind), []).append(cid)
    count_of = {
        (t.condition_id, t.concept_id, t.kind): t.count
        for ts in tallies.values()
        for t in ts
    }
    weight_rows: dict[str, list] = {}
    for w in weights:
        weight_rows.setdefault(w.condition_id, []).append(w)

    profiles: dict[str, dict[str, Any]] = {}
    for spec in catalog:
        cid = spec.condition_id
        groups: dict[str, dict[str, list]] = {
            "symptoms": {"expected": [], "emerging": []},
            "drugs": {"expected": [], "emerging": []},
        }
        for w in sorted(weight_rows.get(cid, []), key=lambda w: (-w.weight, w.concept_id)):
            group = "symptoms" if w.kind == ConceptKind.SYMPTOM else "drugs"
            groups[group][w.label].append(
                {
                    "concept_id": w.concept_id,
                    "name": terminology[w.concept_id].canonical,
                    "weight": w.weight,
                    "count": count_of[(cid, w.concept_id, w.kind)],
                    "df": w.df,
                    "conditions": associated[(w.concept_id, w.kind)],
                }
            )
        emotions = emotion_by_condition.get(cid)
        if emotions is None:
            emotion_payload = {
                "scores": {cat: 0.0 for cat in sorted(PLUTCHIK_CATEGORIES)},
                "rank": sorted(PLUTCHIK_CATEGORIES),
            }
        else:
            emotion_payload = {
                "scores": dict(sorted(emotions.scores.items())),
                "rank": list(emotions.rank),
            }
        profiles[cid] = {
            "condition_id": cid,
            "name": spec.name,
            "subreddit": spec.subreddit,
            "symptoms": groups["symptoms"],
            "drugs": groups["drugs"],
            "emotions": emotion_payload,
            "body": [
                {"zone_id": s.zone_id, "weight": s.weight}
                for s in sorted(body_by_condition.get(cid, []), key=lambda s: s.zone_id)
            ],
        }

    indicators_payload = {
        "regions": [
            {
                "code": r.lsoa_code,
                "population": r.population,
                "density": r.density,
                "deprivation": r.deprivation,
                "z": dict(sorted(r.z.items())),
                "z_display": dict(sorted(r.z_display.items())),
            }
            for r in indicators
        ]
    }

    provenance = {}
    for key in INPUT_KEYS:
        path = config.resolve(key)
        if path.is_dir():
            for child in sorted(path.iterdir()):
                provenance[f"{key}/{child.name}"] = store.sha256_file(child)
        elif path.exists():
            provenance[key] = store.sha256_file(path)

    return store.ProfileBundle(
        conditions=[
            {"condition_id": s.condition_id, "name": s.name, "subreddit": s.subreddit}
            for s in catalog
        ],
        profiles=profiles,
        prevalence=prevalence_tables,
        indicators=indicators_payload,
        provenance=provenance,
        params={
            "max_ngram": config.max_ngram,
            "pmi_min_count": config.pmi_min_count,
            "per_post_binary": config.per_post_binary,
            "rank_k": config.rank_k,
        },
    )
