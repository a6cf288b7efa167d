"""Versioned on-disk bundles of computed condition profiles.

Layout under the bundle directory:

* ``manifest.json``                -- schema version, digests, catalog, params
* ``profiles/<condition_id>.json`` -- bubbles + emotions + body zones
* ``prevalence/<condition_id>.json``
* ``indicators.json``

Files are canonical JSON (sorted keys, two-space indent, LF, trailing
newline) so bundles diff cleanly and identical inputs produce identical
bytes.  Writes go to a temp directory and land via atomic rename; readers
only ever see complete bundles.
"""

from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping

from .lexicons import PLUTCHIK_CATEGORIES
from .rx import INDICATOR_NAMES, UNALLOCATED

SCHEMA_VERSION = 1


class StoreError(Exception):
    pass


class SchemaMismatch(StoreError):
    def __init__(self, found: Any, expected: int = SCHEMA_VERSION):
        super().__init__(f"bundle schema {found!r}, reader expects {expected}")
        self.found = found


class DigestMismatch(StoreError):
    def __init__(self, rel_path: str):
        super().__init__(f"digest mismatch for {rel_path}")
        self.rel_path = rel_path


class CorruptFile(StoreError):
    def __init__(self, rel_path: str, reason: str):
        super().__init__(f"{rel_path}: {reason}")
        self.rel_path = rel_path


def canonical_json(obj: Any) -> str:
    """Deterministic serialization: sorted keys, 2-space indent, LF endings.
    Floats keep their shortest round-trip repr, so the encoding is lossless."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


@dataclass
class ProfileBundle:
    """In-memory form of a bundle.  ``profiles`` and ``prevalence`` are keyed
    by condition id; every value is a plain JSON-compatible dict matching the
    on-disk schema."""

    conditions: list[dict[str, Any]]
    profiles: dict[str, dict[str, Any]]
    prevalence: dict[str, dict[str, Any]]
    indicators: dict[str, Any]
    provenance: dict[str, str]
    params: dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION
    built_at: str = ""
    bundle_digest: str = ""

    def condition_ids(self) -> list[str]:
        return [c["condition_id"] for c in self.conditions]


def _data_files(bundle: ProfileBundle) -> dict[str, Any]:
    files: dict[str, Any] = {"indicators.json": bundle.indicators}
    for cid, profile in bundle.profiles.items():
        files[f"profiles/{cid}.json"] = profile
    for cid, table in bundle.prevalence.items():
        files[f"prevalence/{cid}.json"] = table
    return files


def write_bundle(bundle: ProfileBundle, directory: str | Path) -> dict[str, Any]:
    """Serialize the bundle; returns the manifest.  The bundle digest covers
    the data files only, so rebuilding identical inputs at a different time
    still yields an identical digest."""
    directory = Path(directory)
    directory.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(
        tempfile.mkdtemp(prefix=f".{directory.name}.tmp", dir=directory.parent)
    )
    try:
        files = _data_files(bundle)
        digests: dict[str, str] = {}
        for rel_path, payload in files.items():
            target = staging / rel_path
            target.parent.mkdir(parents=True, exist_ok=True)
            data = canonical_json(payload).encode("utf-8")
            target.write_bytes(data)
            digests[rel_path] = sha256_bytes(data)
        bundle_digest = sha256_bytes(
            "\n".join(f"{p} {digests[p]}" for p in sorted(digests)).encode("ascii")
        )
        manifest = {
            "schema_version": bundle.schema_version,
            "built_at": bundle.built_at
            or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "bundle_digest": bundle_digest,
            "conditions": bundle.conditions,
            "files": digests,
            "provenance": bundle.provenance,
            "params": bundle.params,
        }
        (staging / "manifest.json").write_text(
            canonical_json(manifest), encoding="utf-8"
        )
        if directory.exists():
            shutil.rmtree(directory)
        os.replace(staging, directory)
    except BaseException:
        shutil.rmtree(staging, ignore_errors=True)
        raise
    return manifest


def _read_json(directory: Path, rel_path: str, expected_digest: str | None) -> Any:
    path = directory / rel_path
    if not path.exists():
        raise CorruptFile(rel_path, "missing file")
    data = path.read_bytes()
    if expected_digest is not None and sha256_bytes(data) != expected_digest:
        raise DigestMismatch(rel_path)
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise CorruptFile(rel_path, f"invalid json: {exc.msg}") from None


def read_bundle(directory: str | Path) -> ProfileBundle:
    """Load and digest-verify a bundle directory."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise CorruptFile("manifest.json", "missing file")
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise CorruptFile("manifest.json", f"invalid json: {exc.msg}") from None
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise SchemaMismatch(manifest.get("schema_version"))
    files: Mapping[str, str] = manifest.get("files", {})
    profiles: dict[str, dict[str, Any]] = {}
    prevalence: dict[str, dict[str, Any]] = {}
    indicators: dict[str, Any] = {}
    for rel_path, digest in files.items():
        payload = _read_json(directory, rel_path, digest)
        if rel_path == "indicators.json":
            indicators = payload
        elif rel_path.startswith("profiles/"):
            profiles[Path(rel_path).stem] = payload
        elif rel_path.startswith("prevalence/"):
            prevalence[Path(rel_path).stem] = payload
        else:
            raise CorruptFile(rel_path, "unexpected bundle member")
    return ProfileBundle(
        conditions=manifest.get("conditions", []),
        profiles=profiles,
        prevalence=prevalence,
        indicators=indicators,
        provenance=manifest.get("provenance", {}),
        params=manifest.get("params", {}),
        schema_version=manifest["schema_version"],
        built_at=manifest.get("built_at", ""),
        bundle_digest=manifest.get("bundle_digest", ""),
    )


@dataclass
class ValidationReport:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate_bundle(directory: str | Path) -> ValidationReport:
    """Digest check plus referential-integrity and invariant checks over the
    loaded bundle."""
    violations: list[str] = []
    try:
        bundle = read_bundle(directory)
    except StoreError as exc:
        return ValidationReport(ok=False, violations=[str(exc)])
    known_conditions = set(bundle.condition_ids())
    if not bundle.provenance:
        violations.append("manifest has no provenance digests")
    region_codes = {
        region["code"] for region in bundle.indicators.get("regions", [])
    }
    for cid, profile in bundle.profiles.items():
        if cid not in known_conditions:
            violations.append(f"profile {cid} not in the condition catalog")
        emotions = profile.get("emotions", {})
        if set(emotions.get("scores", {})) != set(PLUTCHIK_CATEGORIES):
            violations.append(f"profile {cid}: emotion categories incomplete")
        for group in ("symptoms", "drugs"):
            for label in ("expected", "emerging"):
                for entry in profile.get(group, {}).get(label, []):
                    if entry.get("weight", 0) <= 0:
                        violations.append(
                            f"profile {cid}: non-positive weight for {entry.get('concept_id')}"
                        )
                    for other in entry.get("conditions", []):
                        if other not in known_conditions:
                            violations.append(
                                f"profile {cid}: unknown associated condition {other}"
                            )
    for cid, table in bundle.prevalence.items():
        if cid not in known_conditions:
            violations.append(f"prevalence {cid} not in the condition catalog")
        for region in table.get("regions", []):
            code = region.get("code")
            if code != UNALLOCATED and region_codes and code not in region_codes:
                violations.append(f"prevalence {cid}: unknown region {code}")
            if region.get("patients", 0) > 0:
                months = table.get("months", 1)
                expected_rate = (
                    1000.0 * region["apportioned_items"] / (region["patients"] * months)
                )
                if abs(expected_rate - region.get("rate", 0.0)) > 1e-9 * max(
                    1.0, abs(expected_rate)
                ):
                    violations.append(f"prevalence {cid}: rate mismatch for {code}")
    for region in bundle.indicators.get("regions", []):
        for name in INDICATOR_NAMES:
            z = region.get("z", {}).get(name)
            if z is None or not isinstance(z, (int, float)):
                violations.append(
                    f"indicators: missing z[{name}] for {region.get('code')}"
                )
    return ValidationReport(ok=not violations, violations=violations)
