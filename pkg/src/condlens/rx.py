"""NHS-style prescription analytics: streaming CSV parsers for the four file
kinds plus census data, the DrugBank-derived drug-to-condition index, and
per-borough prevalence by registered-patient apportionment.

Parsers are single-pass and constant-memory; malformed rows are recorded
with their line numbers in a :class:`ParseReport` instead of being silently
dropped or raising mid-stream.
"""

from __future__ import annotations

import csv
import logging
import math
import statistics
from collections import defaultdict
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from ._text import normalize_term
from .lexicons import ConceptKind, Terminology

logger = logging.getLogger(__name__)

# NHS releases run monthly from July 2010; the bundled window ends June 2019.
DEFAULT_PERIOD_BOUNDS = (201007, 201906)

UNALLOCATED = "unallocated"

Z_DISPLAY_CLIP = 2.0


class RowError(NamedTuple):
    line_no: int
    kind: str  # MalformedRow | NegativeQuantity | NonMonotonicPeriod | ...
    message: str


@dataclass
class ParseReport:
    """Accepted/rejected row counts and the per-row errors and warnings."""

    path: str = ""
    accepted: int = 0
    rejected: int = 0
    errors: list[RowError] = field(default_factory=list)
    warnings: list[RowError] = field(default_factory=list)

    def reject(self, line_no: int, kind: str, message: str) -> None:
        self.rejected += 1
        self.errors.append(RowError(line_no, kind, message))

    def warn(self, line_no: int, kind: str, message: str) -> None:
        self.warnings.append(RowError(line_no, kind, message))


def valid_period(period: int) -> bool:
    return 190001 <= period <= 210012 and 1 <= period % 100 <= 12


@dataclass(slots=True)
class PrescriptionRecord:
    practice_code: str
    bnf_code: str
    drug_name: str
    items: int
    total_cost: Decimal
    quantity: Decimal
    period: int  # YYYYMM


@dataclass(frozen=True)
class PracticePatients:
    practice_code: str
    lsoa_code: str
    patients: int


@dataclass(frozen=True)
class CensusRow:
    lsoa_code: str
    population: int
    area_km2: float
    deprivation: float


def _open_rows(path: str | Path):
    fh = open(path, newline="", encoding="utf-8")
    return fh, csv.reader(fh)


def parse_prescriptions(
    path: str | Path,
    report: ParseReport | None = None,
    period_bounds: tuple[int, int] | None = DEFAULT_PERIOD_BOUNDS,
) -> Iterator[PrescriptionRecord]:
    """Stream prescription rows: ``practice,bnf,drug,items,cost,quantity,period``.

    Rows with a non-numeric field, a negative quantity, or a period outside
    ``period_bounds`` are rejected into the report.  A period lower than its
    predecessor is accepted with a NonMonotonicPeriod warning.
    """
    if report is None:
        report = ParseReport()
    report.path = str(path)
    fh, rows = _open_rows(path)
    last_period = 0
    with fh:
        for line_no, row in enumerate(rows, start=1):
            if line_no == 1 and row and row[0] == "practice_code":
                continue
            if len(row) != 7:
                report.reject(line_no, "MalformedRow", f"expected 7 fields, got {len(row)}")
                continue
            practice, bnf, drug, items_s, cost_s, qty_s, period_s = row
            try:
                items = int(items_s)
                period = int(period_s)
                cost = Decimal(cost_s)
                quantity = Decimal(qty_s)
            except (ValueError, InvalidOperation):
                report.reject(line_no, "MalformedRow", f"non-numeric field in {row!r}")
                continue
            if not bnf:
                report.reject(line_no, "MalformedRow", "empty bnf_code")
                continue
            if items < 0:
                report.reject(line_no, "MalformedRow", f"negative items {items}")
                continue
            if quantity < 0:
                report.reject(line_no, "NegativeQuantity", f"quantity {quantity}")
                continue
            if not valid_period(period):
                report.reject(line_no, "MalformedRow", f"bad period {period_s!r}")
                continue
            if period_bounds is not None and not (
                period_bounds[0] <= period <= period_bounds[1]
            ):
                report.reject(line_no, "MalformedRow", f"period {period} outside bounds")
                continue
            if period < last_period:
                report.warn(line_no, "NonMonotonicPeriod", f"{period} after {last_period}")
            last_period = max(last_period, period)
            report.accepted += 1
            yield PrescriptionRecord(practice, bnf, drug, items, cost, quantity, period)


def parse_patients(
    path: str | Path, report: ParseReport | None = None
) -> tuple[list[PracticePatients], ParseReport]:
    """``practice_code,lsoa_code,patients`` rows; duplicate (practice, lsoa)
    pairs and negative counts are rejected."""
    if report is None:
        report = ParseReport()
    report.path = str(path)
    out: list[PracticePatients] = []
    seen: set[tuple[str, str]] = set()
    fh, rows = _open_rows(path)
    with fh:
        for line_no, row in enumerate(rows, start=1):
            if line_no == 1 and row and row[0] == "practice_code":
                continue
            if len(row) != 3:
                report.reject(line_no, "MalformedRow", f"expected 3 fields, got {len(row)}")
                continue
            practice, lsoa, patients_s = row
            try:
                patients = int(patients_s)
            except ValueError:
                report.reject(line_no, "MalformedRow", f"non-numeric patients {patients_s!r}")
                continue
            if patients < 0:
                report.reject(line_no, "MalformedRow", f"negative patients {patients}")
                continue
            key = (practice, lsoa)
            if key in seen:
                report.reject(line_no, "MalformedRow", f"duplicate pair {key!r}")
                continue
            seen.add(key)
            report.accepted += 1
            out.append(PracticePatients(practice, lsoa, patients))
    return out, report


def parse_drug_names(
    path: str | Path, report: ParseReport | None = None
) -> tuple[list[tuple[str, str]], ParseReport]:
    """NHS drugs file: ``bnf_code,drug_name`` pairs."""
    if report is None:
        report = ParseReport()
    report.path = str(path)
    out: list[tuple[str, str]] = []
    fh, rows = _open_rows(path)
    with fh:
        for line_no, row in enumerate(rows, start=1):
            if line_no == 1 and row and row[0] == "bnf_code":
                continue
            if len(row) != 2 or not row[0] or not row[1]:
                report.reject(line_no, "MalformedRow", f"bad drug row {row!r}")
                continue
            report.accepted += 1
            out.append((row[0], row[1]))
    return out, report


def parse_practices(
    path: str | Path, report: ParseReport | None = None
) -> tuple[list[tuple[str, str, str]], ParseReport]:
    """NHS GPs file: ``practice_code,name,address`` rows."""
    if report is None:
        report = ParseReport()
    report.path = str(path)
    out: list[tuple[str, str, str]] = []
    fh, rows = _open_rows(path)
    with fh:
        for line_no, row in enumerate(rows, start=1):
            if line_no == 1 and row and row[0] == "practice_code":
                continue
            if len(row) != 3 or not row[0]:
                report.reject(line_no, "MalformedRow", f"bad practice row {row!r}")
                continue
            report.accepted += 1
            out.append((row[0], row[1], row[2]))
    return out, report


def parse_census(
    path: str | Path, report: ParseReport | None = None
) -> tuple[list[CensusRow], ParseReport]:
    """Census indicators: ``lsoa_code,population,area_km2,deprivation``."""
    if report is None:
        report = ParseReport()
    report.path = str(path)
    out: list[CensusRow] = []
    fh, rows = _open_rows(path)
    with fh:
        for line_no, row in enumerate(rows, start=1):
            if line_no == 1 and row and row[0] == "lsoa_code":
                continue
            if len(row) != 4:
                report.reject(line_no, "MalformedRow", f"expected 4 fields, got {len(row)}")
                continue
            try:
                census = CensusRow(row[0], int(row[1]), float(row[2]), float(row[3]))
            except ValueError:
                report.reject(line_no, "MalformedRow", f"non-numeric field in {row!r}")
                continue
            if not census.lsoa_code or census.area_km2 <= 0 or census.population < 0:
                report.reject(line_no, "MalformedRow", f"bad census values {row!r}")
                continue
            report.accepted += 1
            out.append(census)
    return out, report


def parse_drugbank(
    path: str | Path, report: ParseReport | None = None
) -> tuple[list[tuple[str, list[str]]], ParseReport]:
    """DrugBank-style TSV: ``drug_name <TAB> condition|condition|...``.
    An empty condition field is allowed (a drug page with no mapped
    condition)."""
    if report is None:
        report = ParseReport()
    report.path = str(path)
    out: list[tuple[str, list[str]]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0]:
                report.reject(line_no, "MalformedRow", f"bad drugbank row {line!r}")
                continue
            conditions = [c for c in parts[1].split("|") if c]
            report.accepted += 1
            out.append((parts[0], conditions))
    return out, report


@dataclass
class DrugIndexReport:
    total_drugbank_rows: int = 0
    matched_rows: int = 0
    unresolved_drugs: list[str] = field(default_factory=list)
    unresolved_conditions: list[str] = field(default_factory=list)
    unresolved_bnf_names: list[str] = field(default_factory=list)


class DrugIndex:
    """BNF code -> drug concept, and drug concept -> mapped condition ids."""

    def __init__(
        self,
        bnf_to_drug: Mapping[str, str],
        drug_conditions: Mapping[str, frozenset[str]],
    ):
        self.bnf_to_drug = dict(bnf_to_drug)
        self.drug_conditions = {k: frozenset(v) for k, v in drug_conditions.items()}

    def drugs_for_condition(self, condition_id: str) -> frozenset[str]:
        return frozenset(
            drug for drug, conds in self.drug_conditions.items() if condition_id in conds
        )

    def conditions_for_bnf(self, bnf_code: str) -> frozenset[str]:
        drug = self.bnf_to_drug.get(bnf_code)
        if drug is None:
            return frozenset()
        return self.drug_conditions.get(drug, frozenset())


def build_drug_index(
    drugbank_rows: Sequence[tuple[str, list[str]]],
    drug_name_rows: Sequence[tuple[str, str]],
    terminology: Terminology,
    known_conditions: Iterable[str],
) -> tuple[DrugIndex, DrugIndexReport]:
    """Resolve DrugBank rows and NHS drug names against the terminology.

    Drugs resolve by normalized name to drug concepts; condition names to
    condition concepts that must exist in ``known_conditions`` (the catalog).
    Unresolved names are counted and reported, never fatal.
    """
    known = frozenset(known_conditions)
    report = DrugIndexReport(total_drugbank_rows=len(drugbank_rows))
    drug_conditions: dict[str, set[str]] = defaultdict(set)
    for drug_name, condition_names in drugbank_rows:
        drug = terminology.lookup(drug_name, ConceptKind.DRUG)
        if drug is None:
            report.unresolved_drugs.append(drug_name)
            continue
        mapped = False
        for condition_name in condition_names:
            concept = terminology.lookup(condition_name, ConceptKind.CONDITION)
            if concept is None or concept.id not in known:
                report.unresolved_conditions.append(condition_name)
                continue
            drug_conditions[drug.id].add(concept.id)
            mapped = True
        if mapped:
            report.matched_rows += 1
    bnf_to_drug: dict[str, str] = {}
    for bnf_code, drug_name in drug_name_rows:
        drug = terminology.lookup(drug_name, ConceptKind.DRUG)
        if drug is None:
            report.unresolved_bnf_names.append(drug_name)
            continue
        bnf_to_drug[bnf_code] = drug.id
    index = DrugIndex(bnf_to_drug, {k: frozenset(v) for k, v in drug_conditions.items()})
    logger.info(
        "drug index: %d/%d drugbank rows mapped, %d bnf codes resolved",
        report.matched_rows,
        report.total_drugbank_rows,
        len(bnf_to_drug),
    )
    return index, report


@dataclass(frozen=True)
class BoroughPrevalence:
    """Apportioned prescription load of one condition in one borough.

    ``rate`` is items per 1000 registered patients per month of the window
    (``months`` = 1 for a single-month batch, so rate = 1000 * items /
    patients in that case)."""

    condition_id: str
    lsoa_code: str
    apportioned_items: float
    patients_total: int
    rate: float
    months: int = 1


def practice_items(
    records: Iterable[PrescriptionRecord], index: DrugIndex, condition_id: str
) -> dict[str, int]:
    """Single-pass fold: total items per practice over records whose drug is
    mapped to the condition."""
    totals: dict[str, int] = defaultdict(int)
    for record in records:
        if condition_id in index.conditions_for_bnf(record.bnf_code):
            totals[record.practice_code] += record.items
    return dict(totals)


def merge_practice_items(parts: Iterable[Mapping[str, int]]) -> dict[str, int]:
    """Associative, commutative merge of per-partition practice totals."""
    merged: dict[str, int] = defaultdict(int)
    for part in parts:
        for practice, items in part.items():
            merged[practice] += items
    return dict(merged)


def borough_patient_totals(patients: Sequence[PracticePatients]) -> dict[str, int]:
    totals: dict[str, int] = defaultdict(int)
    for row in patients:
        totals[row.lsoa_code] += row.patients
    return dict(totals)


def apportion(
    items_by_practice: Mapping[str, int], patients: Sequence[PracticePatients]
) -> tuple[dict[str, float], float]:
    """Split each practice's items across boroughs by registered-patient
    share.  Items of practices with no (or zero) patient rows land in the
    returned ``unallocated`` bucket.  Conserves the item total exactly up to
    float rounding."""
    by_practice: dict[str, list[PracticePatients]] = defaultdict(list)
    for row in patients:
        by_practice[row.practice_code].append(row)
    borough_items: dict[str, float] = defaultdict(float)
    unallocated = 0.0
    for practice in sorted(items_by_practice):
        items = items_by_practice[practice]
        rows = by_practice.get(practice, [])
        total_patients = sum(r.patients for r in rows)
        if total_patients <= 0:
            unallocated += float(items)
            continue
        for row in sorted(rows, key=lambda r: r.lsoa_code):
            borough_items[row.lsoa_code] += items * (row.patients / total_patients)
    return dict(borough_items), unallocated


def prevalence(
    records: Iterable[PrescriptionRecord],
    index: DrugIndex,
    patients: Sequence[PracticePatients],
    condition_id: str,
    months: int = 1,
) -> list[BoroughPrevalence]:
    """Per-borough prevalence of one condition.  Every borough with
    registered patients gets a row (rate 0 when nothing was apportioned);
    unallocated items appear under the :data:`UNALLOCATED` code."""
    totals = practice_items(records, index, condition_id)
    return prevalence_from_practice_items(totals, patients, condition_id, months)


def prevalence_from_practice_items(
    items_by_practice: Mapping[str, int],
    patients: Sequence[PracticePatients],
    condition_id: str,
    months: int = 1,
) -> list[BoroughPrevalence]:
    if months < 1:
        raise ValueError("months must be >= 1")
    borough_items, unallocated = apportion(items_by_practice, patients)
    patient_totals = borough_patient_totals(patients)
    out: list[BoroughPrevalence] = []
    for lsoa in sorted(set(patient_totals) | set(borough_items)):
        items = borough_items.get(lsoa, 0.0)
        registered = patient_totals.get(lsoa, 0)
        rate = 1000.0 * items / (registered * months) if registered > 0 else 0.0
        out.append(
            BoroughPrevalence(
                condition_id=condition_id,
                lsoa_code=lsoa,
                apportioned_items=items,
                patients_total=registered,
                rate=rate,
                months=months,
            )
        )
    if unallocated > 0.0:
        out.append(
            BoroughPrevalence(
                condition_id=condition_id,
                lsoa_code=UNALLOCATED,
                apportioned_items=unallocated,
                patients_total=0,
                rate=0.0,
                months=months,
            )
        )
    return out


@dataclass(frozen=True)
class RelativeValue:
    code: str
    value: float
    delta_from_mean: float
    z: float
    z_display: float  # clipped to [-2, +2] for the diverging map scale


@dataclass(frozen=True)
class EnglandRelative:
    mean: float
    sd: float
    degenerate: bool  # SD was 0; every z defined as 0
    values: tuple[RelativeValue, ...]


def england_relative(values: Mapping[str, float]) -> EnglandRelative:
    """Per-borough delta and z-score against the mean over all boroughs
    present.  A zero-spread distribution is degenerate: all z are 0."""
    if not values:
        return EnglandRelative(mean=0.0, sd=0.0, degenerate=True, values=())
    mean = statistics.fmean(values.values())
    sd = statistics.pstdev(values.values()) if len(values) > 1 else 0.0
    degenerate = sd == 0.0
    out = []
    for code in sorted(values):
        value = values[code]
        delta = value - mean
        z = 0.0 if degenerate else delta / sd
        z_display = max(-Z_DISPLAY_CLIP, min(Z_DISPLAY_CLIP, z))
        out.append(RelativeValue(code, value, delta, z, z_display))
    return EnglandRelative(mean=mean, sd=sd, degenerate=degenerate, values=tuple(out))


def rank_regions(
    prevalences: Sequence[BoroughPrevalence], k: int
) -> tuple[list[BoroughPrevalence], list[BoroughPrevalence]]:
    """(top-k, bottom-k) boroughs by rate; ties broken by borough code; the
    unallocated bucket never ranks."""
    ranked = [p for p in prevalences if p.lsoa_code != UNALLOCATED]
    top = sorted(ranked, key=lambda p: (-p.rate, p.lsoa_code))[: max(k, 0)]
    bottom = sorted(ranked, key=lambda p: (p.rate, p.lsoa_code))[: max(k, 0)]
    return top, bottom


INDICATOR_NAMES = ("population", "density", "deprivation")


@dataclass(frozen=True)
class RegionIndicators:
    lsoa_code: str
    population: int
    density: float  # people per km^2
    deprivation: float
    z: dict[str, float]
    z_display: dict[str, float]

    def __post_init__(self):
        for value in self.z.values():
            if not math.isfinite(value):
                raise ValueError(f"non-finite z for {self.lsoa_code}")


def build_indicators(
    census: Sequence[CensusRow],
) -> tuple[list[RegionIndicators], dict[str, EnglandRelative]]:
    """England-relative standardization of the census indicators."""
    raw = {
        "population": {c.lsoa_code: float(c.population) for c in census},
        "density": {c.lsoa_code: c.population / c.area_km2 for c in census},
        "deprivation": {c.lsoa_code: c.deprivation for c in census},
    }
    relatives = {name: england_relative(values) for name, values in raw.items()}
    lookup = {
        name: {rv.code: rv for rv in rel.values} for name, rel in relatives.items()
    }
    out = []
    for row in sorted(census, key=lambda c: c.lsoa_code):
        code = row.lsoa_code
        out.append(
            RegionIndicators(
                lsoa_code=code,
                population=row.population,
                density=row.population / row.area_km2,
                deprivation=row.deprivation,
                z={name: lookup[name][code].z for name in INDICATOR_NAMES},
                z_display={name: lookup[name][code].z_display for name in INDICATOR_NAMES},
            )
        )
    return out, relatives


def aggregate_prevalence(
    prevalences: Sequence[BoroughPrevalence], region_map: Mapping[str, str]
) -> list[BoroughPrevalence]:
    """Re-key boroughs onto display regions (lsoa -> region).  Codes absent
    from the map pass through unchanged (identity default)."""
    items: dict[str, float] = defaultdict(float)
    patients: dict[str, int] = defaultdict(int)
    months = prevalences[0].months if prevalences else 1
    condition_id = prevalences[0].condition_id if prevalences else ""
    for p in prevalences:
        code = p.lsoa_code if p.lsoa_code == UNALLOCATED else region_map.get(p.lsoa_code, p.lsoa_code)
        items[code] += p.apportioned_items
        patients[code] += p.patients_total
    out = []
    for code in sorted(items):
        registered = patients[code]
        rate = 1000.0 * items[code] / (registered * months) if registered > 0 else 0.0
        out.append(
            BoroughPrevalence(
                condition_id=condition_id,
                lsoa_code=code,
                apportioned_items=items[code],
                patients_total=registered,
                rate=rate,
                months=months,
            )
        )
    return out
